// Copyright (c) 2026 The vaed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VAED_CLI_RUN_CONFIG_H_
#define VAED_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace vaed::cli {

// Typed command-line options that a JSON config file can fill in. Keys of
// the file are flag names without the leading dashes; precedence is
// command line, then file, then the option default.
class RunConfig {
 public:
  using Target = std::variant<int*, double*, bool*, uint64_t*, std::string*>;

  explicit RunConfig(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* Add(const std::string& name, T* target, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + name, *target, help)->capture_default_str();
    bindings_.push_back({name, Target(target), opt});
    return opt;
  }

  // Rejects keys that name no option of this command, and values of the
  // wrong type, with ValidationError.
  void ApplyFile(const nlohmann::json& file);
  void ApplyFile(const std::filesystem::path& path);

  // Every bound option with its effective value, plus "command".
  nlohmann::json Resolved() const;

 private:
  struct Binding {
    std::string name;
    Target target;
    CLI::Option* option;
  };
  CLI::App* app_;
  std::vector<Binding> bindings_;
};

}  // namespace vaed::cli

#endif  // VAED_CLI_RUN_CONFIG_H_
