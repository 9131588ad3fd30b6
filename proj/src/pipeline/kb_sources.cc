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

#include <algorithm>
#include <filesystem>

#include "symdirec/hdl/parser.h"
#include "symdirec/hdl/segment.h"
#include "symdirec/pipeline/pipeline.h"
#include "symdirec/symlogic/extract.h"
#include "symdirec/util/template.h"

namespace symdirec::pipeline {

namespace fs = std::filesystem;

namespace {

std::string Trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string FirstComment(const std::string& text, const std::string& marker) {
  std::size_t p = text.find(marker);
  if (p == std::string::npos) return "";
  std::size_t e = text.find('\n', p);
  return Trim(text.substr(p + marker.size(), e == std::string::npos ? e : e - p - marker.size()));
}

// Symbolic form of a combinational design: outputs of the last module with
// intermediates inlined. Empty when extraction does not apply.
std::string ExtractPhi(const std::string& text, bool vhdl) {
  try {
    std::vector<hdl::ModuleAst> modules =
        vhdl ? hdl::ParseVhdlDesign(text) : hdl::ParseVerilogDesign(text);
    if (modules.empty()) return "";
    const hdl::ModuleAst& top = modules.back();
    symlogic::SymBundle b = symlogic::ExtractFromRtl(hdl::WholeModuleBlock(top, text));
    return OutputDefinitions(b).ToString();
  } catch (const Error&) {
    return "";
  }
}

std::string ModuleName(const std::string& text, bool vhdl) {
  try {
    auto modules = vhdl ? hdl::ParseVhdlDesign(text) : hdl::ParseVerilogDesign(text);
    if (!modules.empty()) return modules.back().name;
  } catch (const Error&) {
  }
  return "";
}

}  // namespace

std::vector<kb::KbEntry> CollectKbEntries(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::string ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".v" || ext == ".vhd" || ext == ".txt")) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<kb::KbEntry> out;
  for (const fs::path& path : files) {
    kb::KbEntry e;
    e.id = path.filename().string();
    e.y = ReadFile(path.string());
    std::string ext = path.extension().string();
    e.language = ext == ".v" ? "verilog" : ext == ".vhd" ? "vhdl" : "nl";
    bool vhdl = e.language == "vhdl";

    fs::path desc = path.string() + ".desc";
    if (fs::exists(desc)) {
      e.d = Trim(ReadFile(desc.string()));
    } else if (e.language == "nl") {
      e.d = Trim(e.y.substr(0, e.y.find('\n')));
    } else {
      e.d = FirstComment(e.y, vhdl ? "--" : "//");
      if (e.d.empty()) e.d = ModuleName(e.y, vhdl) + " " + e.language + " module";
    }

    fs::path phi = path.string() + ".phi";
    if (fs::exists(phi)) {
      e.phi = Trim(ReadFile(phi.string()));
    } else if (e.language != "nl") {
      e.phi = ExtractPhi(e.y, vhdl);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace symdirec::pipeline
