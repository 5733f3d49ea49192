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

#ifndef GSF_SCQPT_HPP
#define GSF_SCQPT_HPP

#include <vector>

#include "json.hpp"

#include "gsf/metrics.hpp"
#include "gsf/sim.hpp"
#include "gsf/superop.hpp"

namespace gsf {

// Joint first-order model of the triple experiments in the per-gate error
// maps E_g (each faulty gate modeled as E_g applied after its ideal gate).
// Row (i, j, k) demands
//   <<M0| E_k R_k R_j R_i + R_k E_j R_j R_i + R_k R_j E_i R_i |rho0>>
//     = m_ijk + 2 <<M0| R_k R_j R_i |rho0>>
// with the unknowns stacked gate by gate, each block holding one error map's
// entries row-major (entry (r, c) of gate g at column g*n*n + r*n + c).
struct LinearizedSystem {
  Mat a;  // one row per triple record
  Vec b;
  GateLibrary ideal;
  Vec rho0, m0;
  std::vector<ExperimentRecord> records;  // the triples the rows came from
};

// Missing triples are simply absent rows; pair records are ignored. The
// matrix is rank-deficient by the frame freedom shared with the data.
LinearizedSystem build_linearized_system(const std::vector<ExperimentRecord>& records,
                                         const GateLibrary& ideal, const Vec& rho0,
                                         const Vec& m0);

struct GateSetEstimate {
  GateLibrary ideal;
  std::vector<Ptm> error_maps;  // CPTP, one per gate, applied after it
  GateLibrary estimated;        // error_maps[g] * ideal.gates[g]
  double lsq_linear = 0.0;      // ||A x - b||^2 at the returned point
  double lsq_exact = 0.0;       // full sixth-order misfit of the estimate
  double gradient_norm = 0.0;   // ||2 A^T (A x - b)|| at the returned point
  int iterations = 0;
  bool converged = true;
  double gauge_phi = 0.0;       // frame angle applied by gauge_optimize
};

// Minimizes ||A x - b||^2 over per-gate CPTP blocks by accelerated projected
// gradient (step 1/L from power iteration, restart on objective increase,
// stop when the objective change drops below 1e-12 of the starting misfit or
// after 200000 iterations), started from all-identity error maps. The flat frame directions make the
// minimizer non-unique; the limit point is accepted as-is and the frame is
// resolved later by gauge_optimize.
GateSetEstimate solve_constrained(const LinearizedSystem& sys);

// Full (non-linearized) misfit of a candidate library against the triple
// records: sum over triples of |m_ijk - <<M0|G_k G_j G_i|rho0>>|^2.
double exact_lsq(const GateLibrary& candidate,
                 const std::vector<ExperimentRecord>& records, const Vec& rho0,
                 const Vec& m0);

// Resolves the frame freedom: scans phi over the diagonal family
// R_U = rotation(z, phi), mapping every estimated gate to R_U^T G R_U, and
// keeps the frame minimizing the library-averaged metric against the target.
// A 720-point grid is refined by golden section to 1e-10 in phi; the worst
// case is phi = 0 (frame unchanged). Requires rho0 and m0 diagonal in the
// computational basis, the condition under which the data cannot see this
// family; other SPAM pairs are reported as errors rather than guessed at.
GateSetEstimate gauge_optimize(const GateSetEstimate& estimate,
                               const GateLibrary& target, Metric metric,
                               const Vec& rho0, const Vec& m0);

// Report with per-gate maps and metrics against the target library.
nlohmann::json json_from_gateset_estimate(const GateSetEstimate& estimate,
                                          const GateLibrary& target);

}  // namespace gsf

#endif
