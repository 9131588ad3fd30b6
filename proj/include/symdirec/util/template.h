// Copyright 2026 The symdirec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYMDIREC_UTIL_TEMPLATE_H_
#define SYMDIREC_UTIL_TEMPLATE_H_

#include <map>
#include <string>
#include <string_view>

namespace symdirec {

// Replaces every `{name}` in `text` (name: a C identifier) in one pass, so
// braces inside substituted values are left alone. A placeholder with no
// value raises ConfigError; other braces, such as a Verilog `{a, b}`, are
// copied through.
std::string RenderTemplate(std::string_view text,
                           const std::map<std::string, std::string>& values);

// Reads `<dir>/<name>.txt`; IoError when missing.
std::string LoadTemplate(const std::string& dir, const std::string& name);

// Whole file as a string; IoError when unreadable.
std::string ReadFile(const std::string& path);

}  // namespace symdirec

#endif  // SYMDIREC_UTIL_TEMPLATE_H_
