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

#include "gsf/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace gsf {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("serialize: " + what);
}

int side_from_dim(const json& j) {
  require(j.is_object(), "expected a JSON object");
  require(j.contains("dim") && j["dim"].is_number_integer(), "missing integer field 'dim'");
  int dim = j["dim"].get<int>();
  require(dim >= 2, "'dim' must be at least 2");
  if (j.contains("order")) {
    require(j["order"].is_string() && j["order"].get<std::string>() == "IXYZ",
            "unsupported basis order (only \"IXYZ\")");
  }
  return dim;
}

}  // namespace

nlohmann::json json_from_ptm(const Ptm& r) {
  json rows = json::array();
  for (int i = 0; i < r.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < r.size(); ++j) row.push_back(r.m(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"dim", r.dim}, {"order", "IXYZ"}, {"rows", std::move(rows)}};
}

Ptm ptm_from_json(const nlohmann::json& j) {
  int dim = side_from_dim(j);
  int n = dim * dim;
  require(j.contains("rows") && j["rows"].is_array() && int(j["rows"].size()) == n,
          "'rows' must hold dim^2 rows");
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = j["rows"][i];
    require(row.is_array() && int(row.size()) == n, "each row must hold dim^2 numbers");
    for (int c = 0; c < n; ++c) {
      require(row[c].is_number(), "matrix entries must be numbers");
      m(i, c) = row[c].get<double>();
    }
  }
  return Ptm(dim, std::move(m));
}

nlohmann::json json_from_choi(const CMat& choi) {
  int n = choi.rows();
  int dim = int(std::lround(std::sqrt(double(n))));
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) {
      row.push_back(choi(i, j).real());
      row.push_back(choi(i, j).imag());
    }
    rows.push_back(std::move(row));
  }
  return json{{"dim", dim}, {"order", "IXYZ"}, {"rows", std::move(rows)}};
}

CMat choi_from_json(const nlohmann::json& j) {
  int dim = side_from_dim(j);
  int n = dim * dim;
  require(j.contains("rows") && j["rows"].is_array() && int(j["rows"].size()) == n,
          "'rows' must hold dim^2 rows");
  CMat out(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = j["rows"][i];
    require(row.is_array() && int(row.size()) == 2 * n,
            "each Choi row must hold 2*dim^2 numbers (re, im interleaved)");
    for (int c = 0; c < n; ++c) {
      require(row[2 * c].is_number() && row[2 * c + 1].is_number(),
              "matrix entries must be numbers");
      out(i, c) = cplx(row[2 * c].get<double>(), row[2 * c + 1].get<double>());
    }
  }
  return out;
}

nlohmann::json json_from_library(const GateLibrary& lib) {
  json gates = json::array();
  for (const Ptm& g : lib.gates) gates.push_back(json_from_ptm(g));
  return json{{"dim", lib.dim}, {"labels", lib.labels}, {"gates", std::move(gates)}};
}

GateLibrary library_from_json(const nlohmann::json& j) {
  int dim = side_from_dim(j);
  require(j.contains("labels") && j["labels"].is_array(), "missing array field 'labels'");
  GateLibrary lib;
  lib.dim = dim;
  for (const auto& l : j["labels"]) {
    require(l.is_string(), "labels must be strings");
    lib.labels.push_back(l.get<std::string>());
  }
  require(!lib.labels.empty(), "library must name at least one gate");
  if (j.contains("gates")) {
    require(j["gates"].is_array() && j["gates"].size() == lib.labels.size(),
            "'gates' must match 'labels' in length");
    for (const auto& g : j["gates"]) {
      Ptm p = ptm_from_json(g);
      require(p.dim == dim, "gate dimension disagrees with library 'dim'");
      lib.gates.push_back(std::move(p));
    }
  } else {
    require(dim == 2, "label-only libraries are limited to one qubit");
    for (const std::string& l : lib.labels) {
      require(is_parsable_gate_label(l), "label '" + l + "' is not a rotation name");
      lib.gates.push_back(gate_from_label(l));
    }
  }
  return lib;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return json::parse(in);
}

std::string csv_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace gsf
