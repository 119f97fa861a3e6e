// Copyright 2026 The hcvx Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Instance files: one JSON document per instance, tagged by "kind". Matrices
// are row-major upper triangles, bounds are {"lo": x | "-inf", "hi": x |
// "+inf"}. write_instance emits the canonical form, which parse_instance
// reads back to the same bytes.

#ifndef HCVX_IO_HPP_
#define HCVX_IO_HPP_

#include <string>
#include <string_view>
#include <variant>

#include "hcvx/model.hpp"

namespace hcvx {

using Instance = std::variant<UqInstance, QcqpInstance, BallIntersection, IlpInstance>;

// "uq", "qcqp", "balls" or "ilp".
std::string_view instance_kind(const Instance& inst);

// Throws ParseError with a line:column or field-path diagnostic; the decoded
// instance is validated and model errors propagate unchanged.
Instance parse_instance(std::string_view text);
Instance read_instance_file(const std::string& path);

std::string write_instance(const Instance& inst);

}  // namespace hcvx

#endif  // HCVX_IO_HPP_
