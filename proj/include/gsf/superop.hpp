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

#ifndef GSF_SUPEROP_HPP
#define GSF_SUPEROP_HPP

#include <vector>

#include "gsf/linalg.hpp"
#include "gsf/rng.hpp"

namespace gsf {

// Normalized Pauli-basis conventions used across the toolkit:
//   - basis order I, X, Y, Z; tensor-lexicographic for multi-qubit dims
//   - states vectorize as  s_j = Tr(P_j rho) / d
//   - measurements vectorize as  e_j = Tr(M P_j)        (no 1/d)
//   - transfer matrix entries  R_ij = Tr(P_i L(P_j)) / d
// so that Tr(M L(rho)) = e . (R s), and channel composition is matrix
// multiplication with the later channel on the left.

// The d^2 Pauli strings for a power-of-two dimension d (cached per dim).
const std::vector<CMat>& pauli_basis(int dim);

// Pauli transfer matrix of a d-dimensional channel: real, d^2 x d^2.
struct Ptm {
  int dim = 0;
  Mat m;

  Ptm() = default;
  Ptm(int d, Mat mat) : dim(d), m(std::move(mat)) {}
  static Ptm identity(int dim);
  int size() const { return dim * dim; }
};

Ptm ptm_from_kraus(const std::vector<CMat>& kraus);
Ptm ptm_from_unitary(const CMat& u);

// Choi matrix with trace normalized to 1 for trace-preserving maps
// (input factor first, transposed Pauli expansion on that factor).
CMat choi_from_ptm(const Ptm& r);
Ptm ptm_from_choi(const CMat& choi, int dim);

// Choi matrix in output-tensor-input order with trace d, the normalization
// the diamond-norm program consumes. Equals d * factor-swap of choi_from_ptm.
CMat choi_output_first(const Ptm& r);

Vec vectorize_state(const CMat& rho);
Vec vectorize_measurement(const CMat& m);
CMat devectorize_state(const Vec& s, int dim);
CMat devectorize_measurement(const Vec& e, int dim);

// Tr(M L(rho)) for vectorized measurement, transfer matrix, vectorized state.
double expectation_value(const Vec& meas, const Ptm& r, const Vec& state);

// Channel composition: `after` applied after `before`.
Ptm compose(const Ptm& after, const Ptm& before);

bool is_trace_preserving(const Ptm& r, double tol);
bool is_unital(const Ptm& r, double tol);
// R^T R = I; holds exactly for PTMs of unitary channels.
bool is_orthogonal(const Ptm& r, double tol);
double choi_min_eigenvalue(const Ptm& r);
bool is_cptp(const Ptm& r, double tol);

// Apply the channel at the density-matrix level (basis-expansion route;
// used by tests to cross-check the vectorized path).
CMat apply_ptm(const Ptm& r, const CMat& rho);

// Random CPTP map from a Haar unitary on system x environment (dim_env =
// dim^2) acting on |0><0| of the environment; Kraus operators are retained so
// callers can cross-check against density-level arithmetic.
struct RandomChannel {
  std::vector<CMat> kraus;
  Ptm ptm;
};
RandomChannel random_cptp(int dim, Rng& rng);

}  // namespace gsf

#endif
