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

#include "gsf/sim.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gsf/rng.hpp"
#include "gsf/serialize.hpp"

namespace gsf {
namespace {

constexpr std::uint64_t kPairTag = 'P';
constexpr std::uint64_t kTripleTag = 'T';

double noisy(const ExperimentPlan& plan, std::uint64_t tag, int i, int j, int k, double mean) {
  if (plan.noise_power <= 0.0) return mean;
  return mean + std::sqrt(plan.noise_power) *
                    keyed_normal(plan.seed, tag, std::uint64_t(i), std::uint64_t(j),
                                 std::uint64_t(k));
}

[[noreturn]] void bad_line(int line_no, const std::string& what) {
  throw std::invalid_argument("record CSV line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

GateLibrary faulty_library(const ExperimentPlan& plan) {
  GateLibrary lib = plan.library;
  for (const ErrorModel& e : plan.errors) lib = apply_error_model(lib, e);
  return lib;
}

std::vector<ExperimentRecord> simulate_pairs(const ExperimentPlan& plan, const Ptm& channel) {
  GateLibrary lib = faulty_library(plan);
  int n = lib.size();
  std::vector<ExperimentRecord> out;
  out.reserve(size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    Vec prepared = lib.gates[i].m * plan.rho0;
    Vec evolved = channel.m * prepared;
    for (int j = 0; j < n; ++j) {
      double mean = dot(plan.m0, lib.gates[j].m * evolved);
      out.push_back({i, j, -1, noisy(plan, kPairTag, i, j, 0, mean), plan.noise_power});
    }
  }
  return out;
}

std::vector<ExperimentRecord> simulate_triples(const ExperimentPlan& plan) {
  GateLibrary lib = faulty_library(plan);
  int n = lib.size();
  std::vector<ExperimentRecord> out;
  out.reserve(size_t(n) * n * n);
  for (int i = 0; i < n; ++i) {
    Vec after_i = lib.gates[i].m * plan.rho0;
    for (int j = 0; j < n; ++j) {
      Vec after_j = lib.gates[j].m * after_i;
      for (int k = 0; k < n; ++k) {
        double mean = dot(plan.m0, lib.gates[k].m * after_j);
        out.push_back({i, j, k, noisy(plan, kTripleTag, i, j, k, mean), plan.noise_power});
      }
    }
  }
  return out;
}

Vec vec_colmajor(const Mat& m) {
  Vec v(size_t(m.rows()) * m.cols());
  size_t idx = 0;
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) v[idx++] = m(r, c);
  return v;
}

Mat unvec_colmajor(const Vec& v, int n) {
  if (int(v.size()) != n * n)
    throw std::invalid_argument("unvec_colmajor: length does not match the square side");
  Mat m(n, n);
  size_t idx = 0;
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) m(r, c) = v[idx++];
  return m;
}

namespace {

// One sensitivity column: entry (c*n + r) of vec(M rho^T) in column-major
// order is M[r] * rho[c], matching m = sum_{r,c} M[r] R[r][c] rho[c].
void fill_column(Mat& s, Mat& s_prime, Vec& noise, int col, const Vec& rho, const Vec& meas,
                 double noise_power) {
  int n = int(rho.size());
  double w = noise_power > 0.0 ? 1.0 / std::sqrt(noise_power) : 1.0;
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      double v = meas[r] * rho[c];
      s(c * n + r, col) = v;
      s_prime(c * n + r, col) = w * v;
    }
  noise[col] = noise_power;
}

}  // namespace

DesignMatrix build_design_matrix(const ExperimentPlan& plan) {
  const GateLibrary& lib = plan.library;
  int n = lib.size();
  int d2 = int(plan.rho0.size());
  DesignMatrix dm;
  dm.s = Mat(d2 * d2, n * n);
  dm.s_prime = Mat(d2 * d2, n * n);
  dm.noise = Vec(size_t(n) * n);
  int col = 0;
  for (int i = 0; i < n; ++i) {
    Vec rho = lib.gates[i].m * plan.rho0;
    for (int j = 0; j < n; ++j) {
      Vec meas = lib.gates[j].m.transposed() * plan.m0;
      fill_column(dm.s, dm.s_prime, dm.noise, col++, rho, meas, plan.noise_power);
    }
  }
  return dm;
}

DesignMatrix design_from_records(const GateLibrary& library, const Vec& rho0, const Vec& m0,
                                 const std::vector<ExperimentRecord>& records) {
  int n = library.size();
  int d2 = int(rho0.size());
  DesignMatrix dm;
  dm.s = Mat(d2 * d2, int(records.size()));
  dm.s_prime = Mat(d2 * d2, int(records.size()));
  dm.noise = Vec(records.size());
  for (size_t c = 0; c < records.size(); ++c) {
    const ExperimentRecord& rec = records[c];
    if (rec.is_triple())
      throw std::invalid_argument("design_from_records: pair records expected, found a triple");
    if (rec.i < 0 || rec.i >= n || rec.j < 0 || rec.j >= n)
      throw std::invalid_argument("design_from_records: gate index out of range");
    Vec rho = library.gates[rec.i].m * rho0;
    Vec meas = library.gates[rec.j].m.transposed() * m0;
    fill_column(dm.s, dm.s_prime, dm.noise, int(c), rho, meas, rec.noise_power);
  }
  return dm;
}

void write_records(const std::string& path, const std::vector<ExperimentRecord>& records,
                   const GateLibrary& library) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# gateset-forge records\n";
  out << "i,j,k,m,noise_power\n";
  for (const ExperimentRecord& r : records) {
    out << r.i << ',' << r.j << ',';
    if (r.is_triple()) out << r.k;
    out << ',' << csv_double(r.value) << ',' << csv_double(r.noise_power) << '\n';
  }
  write_json_file(path + ".json", json_from_library(library));
}

IngestResult ingest_records(const std::string& path) {
  IngestResult result;
  result.library = library_from_json(read_json_file(path + ".json"));
  int n = result.library.size();

  // Plausibility bound on a noiseless expectation: the norm of the default
  // computational-basis measurement vector (the sidecar does not carry M0).
  const double m0_norm = std::sqrt(2.0);

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    if (line.compare(first, 6, "i,j,k,") == 0) continue;  // column header

    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ls(line);
    while (std::getline(ls, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (fields.size() != 5 && fields.size() != 6)
      bad_line(line_no,
               "expected 5 or 6 comma-separated fields, got " + std::to_string(fields.size()));

    auto parse_int = [&](const std::string& f, const char* name) {
      try {
        size_t pos = 0;
        int v = std::stoi(f, &pos);
        if (pos != f.size()) throw std::invalid_argument("trailing junk");
        return v;
      } catch (const std::exception&) {
        bad_line(line_no, std::string("bad ") + name + " field '" + f + "'");
      }
    };
    auto parse_double = [&](const std::string& f, const char* name) {
      try {
        size_t pos = 0;
        double v = std::stod(f, &pos);
        if (pos != f.size()) throw std::invalid_argument("trailing junk");
        return v;
      } catch (const std::exception&) {
        bad_line(line_no, std::string("bad ") + name + " field '" + f + "'");
      }
    };

    ExperimentRecord rec;
    rec.i = parse_int(fields[0], "i");
    rec.j = parse_int(fields[1], "j");
    bool has_k = fields[2].find_first_not_of(" \t") != std::string::npos;
    rec.k = has_k ? parse_int(fields[2], "k") : -1;
    rec.value = parse_double(fields[3], "m");
    rec.noise_power = parse_double(fields[4], "noise_power");
    if (rec.noise_power < 0.0) bad_line(line_no, "negative noise_power");
    if (fields.size() == 6) {
      double reps = parse_double(fields[5], "repetitions");
      if (reps <= 0.0) bad_line(line_no, "repetitions must be positive");
      rec.noise_power /= reps;
    }
    if (rec.i < 0 || rec.i >= n || rec.j < 0 || rec.j >= n || (has_k && (rec.k < 0 || rec.k >= n)))
      bad_line(line_no, "gate index outside the library (size " + std::to_string(n) + ")");

    double bound = m0_norm + 5.0 * std::sqrt(rec.noise_power);
    if (std::abs(rec.value) > bound)
      result.warnings.push_back("line " + std::to_string(line_no) + ": value " + csv_double(rec.value) +
                                " exceeds the plausible bound " + csv_double(bound));
    result.records.push_back(rec);
  }
  return result;
}

}  // namespace gsf
