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

#ifndef GSF_SIM_HPP
#define GSF_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gsf/channels.hpp"
#include "gsf/linalg.hpp"
#include "gsf/superop.hpp"

namespace gsf {

// One measured expectation value. Gates are applied in index order: i right
// after preparation, k (when present) right before measurement. k < 0 marks a
// pair record from single-gate tomography runs.
struct ExperimentRecord {
  int i = 0;
  int j = 0;
  int k = -1;
  double value = 0.0;
  double noise_power = 0.0;

  bool is_triple() const { return k >= 0; }
};

// Everything one simulated data set depends on: the library the experimenter
// believes they have, the systematic errors layered onto it, the SPAM pair,
// the additive Gaussian noise power per record, and the seed that fixes both
// the error draws and the noise stream.
struct ExperimentPlan {
  GateLibrary library;
  std::vector<ErrorModel> errors;
  Vec rho0{0.5, 0.0, 0.0, 0.5};
  Vec m0{1.0, 0.0, 0.0, 1.0};
  double noise_power = 1.7e-4;
  std::uint64_t seed = 0;
};

// The plan's library with every error model applied, in declaration order.
GateLibrary faulty_library(const ExperimentPlan& plan);

// m_ij = <<M0| G~_j R_channel G~_i |rho0>> plus noise, rows lexicographic in
// (i, j). The faulty gates fire; the noise draw is keyed by (i, j) so the
// data set is reproducible record by record.
std::vector<ExperimentRecord> simulate_pairs(const ExperimentPlan& plan, const Ptm& channel);

// m_ijk = <<M0| G~_k G~_j G~_i |rho0>> plus noise, rows lexicographic in
// (i, j, k).
std::vector<ExperimentRecord> simulate_triples(const ExperimentPlan& plan);

// Column-major vectorization shared by all estimators.
Vec vec_colmajor(const Mat& m);
Mat unvec_colmajor(const Vec& v, int n);

// Stacked sensitivity vectors of the pair experiment. Column (i, j) is
// vec(M_j rho_i^T) with rho_i = R_i s0 and M_j = R_j^T m0, so a noiseless
// record obeys m = S^T vec(R_channel). Built from the gates the experimenter
// assumes (the plan's ideal library), never the faulty ones.
struct DesignMatrix {
  Mat s;        // d^4 x n_records
  Mat s_prime;  // columns divided by sqrt(noise_power); weight 1 where N = 0
  Vec noise;    // per-column noise power
};
DesignMatrix build_design_matrix(const ExperimentPlan& plan);
// Same construction but following an explicit record list (arbitrary order,
// omissions and repeats allowed, per-record noise powers respected).
DesignMatrix design_from_records(const GateLibrary& library, const Vec& rho0, const Vec& m0,
                                 const std::vector<ExperimentRecord>& records);

// CSV round trip. Lines starting with '#' are comments; data rows are
// "i,j,k,m,noise_power[,repetitions]" with the k field empty on pair records.
// A JSON sidecar at path + ".json" records the library ({dim, labels, gates}).
void write_records(const std::string& path, const std::vector<ExperimentRecord>& records,
                   const GateLibrary& library);

struct IngestResult {
  std::vector<ExperimentRecord> records;
  GateLibrary library;
  std::vector<std::string> warnings;
};
// Reads a record CSV plus its sidecar. A repetitions column divides the
// stated noise power (averaging n shots shrinks the variance n-fold).
// Malformed rows and out-of-range gate indices throw with the line number;
// implausibly large record values only warn.
IngestResult ingest_records(const std::string& path);

}  // namespace gsf

#endif
