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

#ifndef SYMDIREC_SYMLOGIC_EXTRACT_H_
#define SYMDIREC_SYMLOGIC_EXTRACT_H_

#include "symdirec/hdl/segment.h"
#include "symdirec/symlogic/expr.h"

namespace symdirec::symlogic {

// Structural translation of a run of continuous assigns. Vectors are
// bit-blasted: every lhs bit gets its own definition (least significant
// first), named `sig` for scalars and `sig[i]` for vector bits. Widths follow
// Verilog's context-determined sizing with zero extension.
//
// Throws NotCombinational when the block holds an always block or an
// instantiation, and UnsupportedConstruct for arithmetic, comparisons other
// than ==/!=, shifts, variable indexes and parameters.
SymBundle ExtractFromRtl(const hdl::CodeBlock& block);

}  // namespace symdirec::symlogic

#endif  // SYMDIREC_SYMLOGIC_EXTRACT_H_
