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

#ifndef GSF_QPT_HPP
#define GSF_QPT_HPP

#include <vector>

#include "json.hpp"

#include "gsf/sim.hpp"
#include "gsf/superop.hpp"

namespace gsf {

// Linear inversion of the pair-experiment normal equations. The estimate may
// be unphysical; that is the point of keeping it.
struct BareEstimate {
  Ptm r_est;
  int rank = 0;                     // numerical rank of S'S'^T
  bool used_pseudo_inverse = false;
  double residual = 0.0;            // ||S^T r - m||_2, unweighted
};

// Solves the noise-weighted normal equations. Full-rank designs (condition
// below 1e10) invert directly; otherwise the pseudo-inverse with eigenvalues
// under 1e-10 * max treated as zero, after which the trace-preservation row
// is imposed explicitly. Throws std::invalid_argument when the undetermined
// directions extend beyond that row, since no amount of physics fixes those.
BareEstimate bare_estimate(const DesignMatrix& design, const Vec& values);

// Noise-weighted sum of squared misfits, sum_c (m_c - s_c^T r)^2 / N_c, with
// weight 1 on noiseless records. Zero iff the candidate reproduces every
// record exactly.
double lsq_value(const std::vector<ExperimentRecord>& records, const DesignMatrix& design,
                 const Vec& candidate);

struct PhysicalEstimate {
  Ptm r_phys;
  double choi_min_eig = 0.0;
  double distance = 0.0;  // Frobenius distance moved, in transfer-matrix entries
  int sweeps = 0;
  bool converged = true;
};

// Nearest completely-positive trace-preserving map in the flat (Frobenius)
// metric: alternating projections between the PSD cone in Choi space and the
// trace row, with Dykstra's correction so the limit is the true nearest
// point of the intersection. Stops when an iterate moves less than 1e-11 or
// after 5000 sweeps (flagged, never silent).
PhysicalEstimate project_cptp(const Ptm& r);

struct ReconstructionReport {
  BareEstimate bare;
  PhysicalEstimate phys;
  double lsq_value = 0.0;  // of the physical estimate against the records
};

// bare_estimate then project_cptp over a pair-record data set, with the
// design built from the plan's assumed library and SPAM pair.
ReconstructionReport qpt_pipeline(const std::vector<ExperimentRecord>& records,
                                  const ExperimentPlan& plan);

nlohmann::json json_from_reconstruction(const ReconstructionReport& report);

}  // namespace gsf

#endif
