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

#ifndef GSF_CHANNELS_HPP
#define GSF_CHANNELS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gsf/superop.hpp"

namespace gsf {

// Qubit rotation exp(-i angle (axis . sigma) / 2). The Bloch block is the
// right-handed rotation about `axis` by `angle`, so X_{pi/2} sends Y -> Z
// and Z -> -Y.
Ptm rotation_ptm(const std::array<double, 3>& axis, double angle);
CMat rotation_unitary(const std::array<double, 3>& axis, double angle);

// diag(1, eps, eps, eps); eps = 1 is the identity channel.
Ptm depolarizing_ptm(double eps);
// Energy relaxation toward |0>: diagonal (1, sqrt(1-g), sqrt(1-g), 1-g) with
// the non-unital entry g in the Z row of the identity column.
Ptm amplitude_damping_ptm(double gamma);
// Phase damping: diag(1, 1-lambda, 1-lambda, 1).
Ptm dephasing_ptm(double lambda);

struct GateLibrary {
  int dim = 2;
  std::vector<std::string> labels;
  std::vector<Ptm> gates;

  int size() const { return int(gates.size()); }
};

// Named preparation libraries:
//   "tetrahedral"  4 geodesic rotations taking z to tetrahedron vertices
//   "cardinal-six" |0> to the six cardinal Bloch directions
//   "clifford-12"  the even rotation subgroup of the cube
//   "clifford-24"  the full rotation group of the cube
GateLibrary standard_library(const std::string& name);

// Parse "I", "X_pi", "Y_pi/2", "Z_-pi/4" style rotation labels.
Ptm gate_from_label(const std::string& label);
bool is_parsable_gate_label(const std::string& label);

enum class ErrorKind {
  depolarizing,
  amplitude_damping,
  dephasing,
  over_rotation,
  detuning,
  random_unitary,
  global_unitary,
};

enum class ErrorPlacement { pre, post };

struct ErrorModel {
  ErrorKind kind = ErrorKind::depolarizing;
  double strength = 0.0;
  ErrorPlacement placement = ErrorPlacement::post;
  uint64_t seed = 0;
};

ErrorKind error_kind_from_name(const std::string& name);
std::string error_kind_name(ErrorKind kind);
ErrorPlacement error_placement_from_name(const std::string& name);
std::string error_placement_name(ErrorPlacement p);

// The per-gate error factor the model attaches to each library element.
// Incoherent kinds and detuning use one fixed channel for every gate;
// over-rotation scales each gate's own rotation angle by `strength`;
// random/global unitary kinds draw axes from the model seed.
std::vector<Ptm> error_factors(const GateLibrary& ideal, const ErrorModel& e);
GateLibrary apply_error_model(const GateLibrary& ideal, const ErrorModel& e);

// (1/N) sum_g R_g^T A R_g.
Mat twirl_average(const Mat& a, const GateLibrary& g);
// What that average must be when the library is a unitary 2-design.
Mat twirl_closed_form(const Mat& a, int dim);

struct TwirlResult {
  Mat output;
  bool used_closed_form = false;
};
TwirlResult twirl(const Mat& a, const GateLibrary& g);

// Twirl of a fixed generic test matrix matches the closed form to 1e-10.
bool is_two_design(const GateLibrary& g);

// Depolarizing channel equivalent to a constant SPAM error map under
// 2-design twirling: scale alpha and depolarizing parameter eps.
struct DepolarizingEquivalent {
  double alpha = 1.0;
  double eps = 1.0;
};
DepolarizingEquivalent depolarizing_equivalent(const Ptm& error, const Vec& m0);

}  // namespace gsf

#endif
