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

#include "symdirec/util/template.h"

#include <fstream>
#include <regex>
#include <sstream>

#include "symdirec/error.h"

namespace symdirec {

std::string RenderTemplate(std::string_view text,
                           const std::map<std::string, std::string>& values) {
  static const std::regex kPlaceholder(R"(\{([A-Za-z_][A-Za-z0-9_]*)\})");
  std::string out;
  std::string s(text);
  auto last = s.cbegin();
  for (std::sregex_iterator it(s.begin(), s.end(), kPlaceholder), end; it != end; ++it) {
    const std::smatch& m = *it;
    auto found = values.find(m[1].str());
    if (found == values.end()) {
      throw ConfigError("template placeholder {" + m[1].str() + "} has no value");
    }
    out.append(last, m[0].first);
    out += found->second;
    last = m[0].second;
  }
  out.append(last, s.cend());
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string LoadTemplate(const std::string& dir, const std::string& name) {
  return ReadFile(dir + "/" + name + ".txt");
}

}  // namespace symdirec
