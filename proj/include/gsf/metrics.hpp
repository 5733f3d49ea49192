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

#ifndef GSF_METRICS_HPP
#define GSF_METRICS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "gsf/channels.hpp"
#include "gsf/superop.hpp"

namespace gsf {

// 1 - (Tr(R_target^T R)/d + 1)/(d + 1), the gate error averaged over pure
// input states. Valid against unitary targets only; anything else throws.
double avg_gate_fidelity_error(const Ptm& r, const Ptm& r_target);

struct DiamondReport {
  double value = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Completely bounded trace-norm distance ||L1 - L2||_diamond through the
// standard semidefinite program: maximize Re<J, X> over the off-diagonal
// block X of a PSD matrix whose diagonal blocks are I (x) rho0 and
// I (x) rho1 for density matrices rho0, rho1. J is the trace-d Choi matrix
// of the difference, which only needs Hermiticity preservation, so bare
// (unphysical) estimates are fine as inputs.
DiamondReport diamond_distance_report(const Ptm& r1, const Ptm& r2);
// The value alone; throws std::runtime_error if the solver breaks down.
double diamond_distance(const Ptm& r1, const Ptm& r2);

enum class Metric { fidelity_error, diamond };
Metric metric_from_name(const std::string& name);   // "fidelity-error" | "diamond"
std::string metric_name(Metric m);

struct GateMetrics {
  std::string label;
  double fidelity_error = 0.0;
  double diamond_distance = 0.0;
};

struct MetricReport {
  std::vector<GateMetrics> per_gate;
  double mean_fidelity_error = 0.0;
  double mean_diamond_distance = 0.0;
};

// Gate-by-gate comparison of two equally sized libraries (targets must be
// unitary for the fidelity column).
MetricReport compare_libraries(const GateLibrary& estimate, const GateLibrary& target);

// Arithmetic mean of the chosen per-gate distance.
double library_distance(const GateLibrary& estimate, const GateLibrary& target, Metric metric);

// CSV rows "gate_label, fidelity_error, diamond_distance" plus an "average"
// footer row.
void write_metric_csv(std::ostream& out, const MetricReport& report);

}  // namespace gsf

#endif
