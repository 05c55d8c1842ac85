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

#include "vaed/cli/run_config.h"

#include <algorithm>

#include "vaed/common/error.h"
#include "vaed/common/faed.h"

namespace vaed::cli {

using nlohmann::json;

void RunConfig::ApplyFile(const json& file) {
  if (!file.is_object()) throw ValidationError("config file must hold a JSON object");
  for (const auto& [key, value] : file.items()) {
    if (key == "command") {
      if (value != app_->get_name()) {
        throw ValidationError("config file was written for `" + value.dump() + "`, not `" +
                              app_->get_name() + "`");
      }
      continue;
    }
    auto it = std::find_if(bindings_.begin(), bindings_.end(),
                           [&](const Binding& b) { return b.name == key; });
    if (it == bindings_.end()) {
      throw ValidationError("config key '" + key + "' is not an option of " + app_->get_name());
    }
    if (it->option->count() > 0) continue;
    try {
      std::visit([&](auto* t) { *t = value.get<std::remove_pointer_t<decltype(t)>>(); }, it->target);
    } catch (const json::exception& e) {
      throw ValidationError("config key '" + key + "': " + e.what());
    }
  }
}

void RunConfig::ApplyFile(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ValidationError("config file " + path.string() + " does not exist");
  json j;
  try {
    j = json::parse(ReadFileBytes(path));
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  ApplyFile(j);
}

json RunConfig::Resolved() const {
  json j = {{"command", app_->get_name()}};
  for (const Binding& b : bindings_) {
    std::visit([&](auto* t) { j[b.name] = *t; }, b.target);
  }
  return j;
}

}  // namespace vaed::cli
