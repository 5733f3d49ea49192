// Copyright 2026 The gateset-forge Authors
//
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

#ifndef GSF_SERIALIZE_HPP
#define GSF_SERIALIZE_HPP

#include <string>

#include "json.hpp"

#include "gsf/channels.hpp"
#include "gsf/linalg.hpp"
#include "gsf/superop.hpp"

namespace gsf {

// JSON shapes:
//   transfer matrix  {"dim": d, "order": "IXYZ", "rows": [[...], ...]}
//   Choi matrix      {"dim": d, "order": "IXYZ", "rows": [[re, im, ...], ...]}
//   gate library     {"dim": d, "labels": [...], "gates": [PTM, ...]}
// Rows are row-major and carry full double precision. Parsers throw
// std::invalid_argument on anything malformed.

nlohmann::json json_from_ptm(const Ptm& r);
Ptm ptm_from_json(const nlohmann::json& j);

nlohmann::json json_from_choi(const CMat& choi);
CMat choi_from_json(const nlohmann::json& j);

nlohmann::json json_from_library(const GateLibrary& lib);
// Accepts either the full shape above or a label-only sidecar {dim, labels};
// in the latter case every label must be a parsable rotation name.
GateLibrary library_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

// Shortest decimal that parses back to the same double; the CSV convention
// throughout the toolkit.
std::string csv_double(double x);

}  // namespace gsf

#endif
