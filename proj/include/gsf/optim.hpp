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

#ifndef GSF_OPTIM_HPP
#define GSF_OPTIM_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gsf/linalg.hpp"
#include "gsf/superop.hpp"

namespace gsf {

// Frobenius-nearest positive semidefinite matrix: eigendecompose and clamp
// negative eigenvalues.
Mat project_psd(const Mat& h);

// Exact affine projection onto the trace-preserving set: restore the first
// row to (1, 0, ..., 0).
Ptm project_tp(const Ptm& r);

struct DykstraResult {
  Vec x;
  int sweeps = 0;
  bool converged = false;
};

// Dykstra's alternating projection scheme for the Frobenius-nearest point in
// the intersection of two closed convex sets. Each sweep applies project_a
// then project_b, so the returned point satisfies set B exactly; run until
// the sweep moves x by less than tol (max-norm) or max_sweeps is hit.
DykstraResult dykstra(const std::function<Vec(const Vec&)>& project_a,
                      const std::function<Vec(const Vec&)>& project_b, Vec x0,
                      double tol, int max_sweeps);

struct ApgResult {
  Vec x;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimize (1/2) ||a x - b||^2 over the set carried by `project` (an exact
// Euclidean projection, applied in place). Nesterov momentum with a
// function-value restart; the accepted objective sequence never increases.
// The step is 1/L with L = lambda_max(a^T a) from power iteration. Stops when
// the relative objective change drops below tol.
ApgResult accelerated_projected_gradient(
    const Mat& a, const Vec& b, const std::function<void(Vec&)>& project,
    Vec x0, double tol, int max_iter);

enum class SdpStatus { optimal, max_iter, numerical_failure };
std::string sdp_status_name(SdpStatus s);

// maximize  sum_k <objective[k], X_k>
// subject to sum_k <constraints[i][k], X_k> = rhs[i]  for each i
//            X_k symmetric positive semidefinite
// All blocks are dense symmetric real matrices; complex Hermitian data rides
// on the [[A, -B], [B, A]] embedding from linalg.
struct SdpProblem {
  std::vector<int> block_sizes;
  std::vector<Mat> objective;
  std::vector<std::vector<Mat>> constraints;
  Vec rhs;
};

struct SdpOptions {
  int max_iterations = 200;
  double gap_tol = 1e-8;
  double feas_tol = 1e-9;
  // Optional per-iteration CSV dump for debugging.
  std::ostream* trace = nullptr;
};

struct SdpSolution {
  std::vector<Mat> x;
  std::vector<Mat> z;
  Vec y;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  SdpStatus status = SdpStatus::numerical_failure;
  // Constraint rows discarded by presolve as linear combinations of earlier
  // rows (consistency with rhs checked).
  std::vector<int> dropped_rows;
};

// Dense primal-dual path-following interior point method with
// Nesterov-Todd scaling and a Mehrotra predictor-corrector step, sized for
// blocks up to a few dozen rows.
SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts = {});

}  // namespace gsf

#endif
