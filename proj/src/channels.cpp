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

#include "gsf/channels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "gsf/rng.hpp"

namespace gsf {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::array<double, 3> normalized(std::array<double, 3> v) {
  double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (n < 1e-300) throw std::invalid_argument("rotation axis has zero length");
  return {v[0] / n, v[1] / n, v[2] / n};
}

// Rotation taking the +z Bloch axis onto v along the shortest arc. The
// antipode -z has no unique geodesic; that case is pinned to a rotation
// about +x.
Ptm geodesic_from_z(const std::array<double, 3>& target) {
  auto v = normalized(target);
  double angle = std::acos(std::clamp(v[2], -1.0, 1.0));
  if (angle < 1e-12) return Ptm::identity(2);
  std::array<double, 3> axis = {-v[1], v[0], 0.0};
  double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1]);
  if (n < 1e-12) axis = {1.0, 0.0, 0.0};
  return rotation_ptm(axis, angle);
}

void axis_angle_from_ptm(const Ptm& r, std::array<double, 3>& axis,
                         double& angle) {
  const Mat& m = r.m;
  double tr = m(1, 1) + m(2, 2) + m(3, 3);
  angle = std::acos(std::clamp((tr - 1.0) / 2.0, -1.0, 1.0));
  if (angle < 1e-9) {
    axis = {0.0, 0.0, 1.0};
    angle = 0.0;
    return;
  }
  if (kPi - angle > 1e-6) {
    axis = {m(3, 2) - m(2, 3), m(1, 3) - m(3, 1), m(2, 1) - m(1, 2)};
    double s = 2.0 * std::sin(angle);
    axis = {axis[0] / s, axis[1] / s, axis[2] / s};
    return;
  }
  // Near a half turn the off-diagonal difference vanishes; recover the axis
  // from (O + I)/2 = nn^T instead.
  std::array<double, 3> d = {(m(1, 1) + 1.0) / 2.0, (m(2, 2) + 1.0) / 2.0,
                             (m(3, 3) + 1.0) / 2.0};
  int k = 0;
  if (d[1] > d[k]) k = 1;
  if (d[2] > d[k]) k = 2;
  std::array<double, 3> a{};
  a[k] = std::sqrt(std::max(d[k], 0.0));
  for (int j = 0; j < 3; ++j) {
    if (j == k) continue;
    a[j] = (m(k + 1, j + 1) + m(j + 1, k + 1)) / (4.0 * a[k]);
  }
  axis = normalized(a);
}

Ptm constant_error_channel(const ErrorModel& e) {
  switch (e.kind) {
    case ErrorKind::depolarizing:
      return depolarizing_ptm(1.0 - e.strength);
    case ErrorKind::amplitude_damping:
      return amplitude_damping_ptm(e.strength);
    case ErrorKind::dephasing:
      return dephasing_ptm(e.strength);
    default:
      throw std::logic_error("not a constant-channel error kind");
  }
}

}  // namespace

Ptm rotation_ptm(const std::array<double, 3>& axis, double angle) {
  auto n = normalized(axis);
  double c = std::cos(angle), s = std::sin(angle);
  Mat m = Mat::identity(4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m(i + 1, j + 1) = c * (i == j ? 1.0 : 0.0) + (1.0 - c) * n[i] * n[j];
  m(1, 2) += -s * n[2];
  m(1, 3) += s * n[1];
  m(2, 1) += s * n[2];
  m(2, 3) += -s * n[0];
  m(3, 1) += -s * n[1];
  m(3, 2) += s * n[0];
  return Ptm{2, std::move(m)};
}

CMat rotation_unitary(const std::array<double, 3>& axis, double angle) {
  auto n = normalized(axis);
  std::complex<double> c{std::cos(angle / 2.0), 0.0};
  double s = std::sin(angle / 2.0);
  CMat u(2, 2);
  const std::complex<double> i1{0.0, 1.0};
  u(0, 0) = c - i1 * (s * n[2]);
  u(0, 1) = -i1 * (s * n[0]) - s * n[1];
  u(1, 0) = -i1 * (s * n[0]) + s * n[1];
  u(1, 1) = c + i1 * (s * n[2]);
  return u;
}

Ptm depolarizing_ptm(double eps) {
  Mat m = Mat::identity(4);
  m(1, 1) = m(2, 2) = m(3, 3) = eps;
  return Ptm{2, std::move(m)};
}

Ptm amplitude_damping_ptm(double gamma) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("amplitude damping rate outside [0, 1]");
  double root = std::sqrt(1.0 - gamma);
  Mat m = Mat::identity(4);
  m(1, 1) = m(2, 2) = root;
  m(3, 3) = 1.0 - gamma;
  m(3, 0) = gamma;
  return Ptm{2, std::move(m)};
}

Ptm dephasing_ptm(double lambda) {
  Mat m = Mat::identity(4);
  m(1, 1) = m(2, 2) = 1.0 - lambda;
  return Ptm{2, std::move(m)};
}

GateLibrary standard_library(const std::string& name) {
  GateLibrary lib;
  lib.dim = 2;
  auto add = [&lib](const std::string& label, Ptm g) {
    lib.labels.push_back(label);
    lib.gates.push_back(std::move(g));
  };
  if (name == "tetrahedral") {
    double polar = std::acos(-1.0 / 3.0);
    add("I", Ptm::identity(2));
    for (int k = 0; k < 3; ++k) {
      double azim = 2.0 * kPi * k / 3.0;
      std::array<double, 3> v = {std::sin(polar) * std::cos(azim),
                                 std::sin(polar) * std::sin(azim),
                                 std::cos(polar)};
      add("T" + std::to_string(k + 1), geodesic_from_z(v));
    }
    return lib;
  }
  if (name == "cardinal-six") {
    add("I", Ptm::identity(2));
    add("X_pi", rotation_ptm({1, 0, 0}, kPi));
    add("Y_pi/2", rotation_ptm({0, 1, 0}, kPi / 2));
    add("Y_-pi/2", rotation_ptm({0, 1, 0}, -kPi / 2));
    add("X_-pi/2", rotation_ptm({1, 0, 0}, -kPi / 2));
    add("X_pi/2", rotation_ptm({1, 0, 0}, kPi / 2));
    return lib;
  }
  if (name == "clifford-12" || name == "clifford-24") {
    add("I", Ptm::identity(2));
    add("X_pi", rotation_ptm({1, 0, 0}, kPi));
    add("Y_pi", rotation_ptm({0, 1, 0}, kPi));
    add("Z_pi", rotation_ptm({0, 0, 1}, kPi));
    const std::array<std::array<double, 3>, 4> diagonals = {
        {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}}};
    for (int k = 0; k < 4; ++k) {
      std::string stem = "B" + std::to_string(k + 1);
      add(stem + "_2pi/3", rotation_ptm(diagonals[k], 2.0 * kPi / 3.0));
      add(stem + "_-2pi/3", rotation_ptm(diagonals[k], -2.0 * kPi / 3.0));
    }
    if (name == "clifford-12") return lib;
    add("X_pi/2", rotation_ptm({1, 0, 0}, kPi / 2));
    add("X_-pi/2", rotation_ptm({1, 0, 0}, -kPi / 2));
    add("Y_pi/2", rotation_ptm({0, 1, 0}, kPi / 2));
    add("Y_-pi/2", rotation_ptm({0, 1, 0}, -kPi / 2));
    add("Z_pi/2", rotation_ptm({0, 0, 1}, kPi / 2));
    add("Z_-pi/2", rotation_ptm({0, 0, 1}, -kPi / 2));
    const std::array<std::array<double, 3>, 6> edges = {{{1, 1, 0},
                                                         {1, -1, 0},
                                                         {1, 0, 1},
                                                         {1, 0, -1},
                                                         {0, 1, 1},
                                                         {0, 1, -1}}};
    for (int k = 0; k < 6; ++k)
      add("E" + std::to_string(k + 1) + "_pi", rotation_ptm(edges[k], kPi));
    return lib;
  }
  throw std::invalid_argument("unknown gate library: " + name);
}

Ptm gate_from_label(const std::string& label) {
  if (label == "I") return Ptm::identity(2);
  if (label.size() < 4 || label[1] != '_')
    throw std::invalid_argument("unparsable gate label: " + label);
  std::array<double, 3> axis{};
  switch (label[0]) {
    case 'X': axis = {1, 0, 0}; break;
    case 'Y': axis = {0, 1, 0}; break;
    case 'Z': axis = {0, 0, 1}; break;
    default:
      throw std::invalid_argument("unparsable gate label: " + label);
  }
  std::string body = label.substr(2);
  double sign = 1.0;
  if (!body.empty() && body[0] == '-') {
    sign = -1.0;
    body = body.substr(1);
  }
  double mult = 1.0;
  size_t p = 0;
  while (p < body.size() && body[p] >= '0' && body[p] <= '9') ++p;
  if (p > 0) mult = std::stod(body.substr(0, p));
  if (body.compare(p, 2, "pi") != 0)
    throw std::invalid_argument("unparsable gate label: " + label);
  p += 2;
  double div = 1.0;
  if (p < body.size()) {
    if (body[p] != '/' || p + 1 >= body.size())
      throw std::invalid_argument("unparsable gate label: " + label);
    size_t used = 0;
    div = std::stod(body.substr(p + 1), &used);
    if (used != body.size() - p - 1 || div <= 0.0)
      throw std::invalid_argument("unparsable gate label: " + label);
  }
  return rotation_ptm(axis, sign * mult * kPi / div);
}

bool is_parsable_gate_label(const std::string& label) {
  try {
    gate_from_label(label);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

ErrorKind error_kind_from_name(const std::string& name) {
  if (name == "depolarizing") return ErrorKind::depolarizing;
  if (name == "amplitude-damping") return ErrorKind::amplitude_damping;
  if (name == "dephasing") return ErrorKind::dephasing;
  if (name == "over-rotation") return ErrorKind::over_rotation;
  if (name == "detuning") return ErrorKind::detuning;
  if (name == "random-unitary") return ErrorKind::random_unitary;
  if (name == "global-unitary") return ErrorKind::global_unitary;
  throw std::invalid_argument("unknown error model kind: " + name);
}

std::string error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::depolarizing: return "depolarizing";
    case ErrorKind::amplitude_damping: return "amplitude-damping";
    case ErrorKind::dephasing: return "dephasing";
    case ErrorKind::over_rotation: return "over-rotation";
    case ErrorKind::detuning: return "detuning";
    case ErrorKind::random_unitary: return "random-unitary";
    case ErrorKind::global_unitary: return "global-unitary";
  }
  throw std::logic_error("unreachable");
}

ErrorPlacement error_placement_from_name(const std::string& name) {
  if (name == "pre") return ErrorPlacement::pre;
  if (name == "post") return ErrorPlacement::post;
  throw std::invalid_argument("unknown error placement: " + name);
}

std::string error_placement_name(ErrorPlacement p) {
  return p == ErrorPlacement::pre ? "pre" : "post";
}

std::vector<Ptm> error_factors(const GateLibrary& ideal, const ErrorModel& e) {
  std::vector<Ptm> factors;
  factors.reserve(ideal.gates.size());
  switch (e.kind) {
    case ErrorKind::depolarizing:
    case ErrorKind::amplitude_damping:
    case ErrorKind::dephasing: {
      Ptm f = constant_error_channel(e);
      factors.assign(ideal.gates.size(), f);
      return factors;
    }
    case ErrorKind::detuning: {
      // Off-resonant drive: while a pulse plays, the effective field tilts
      // toward z by the relative detuning, so the realized gate is the
      // rotation about n + s*z through the scaled angle. A gate that is no
      // pulse at all evolves for no time and picks up nothing.
      for (const Ptm& g : ideal.gates) {
        std::array<double, 3> axis{};
        double angle = 0.0;
        axis_angle_from_ptm(g, axis, angle);
        if (angle == 0.0) {
          factors.push_back(Ptm::identity(2));
          continue;
        }
        std::array<double, 3> tilted{axis[0], axis[1], axis[2] + e.strength};
        double norm = std::sqrt(tilted[0] * tilted[0] + tilted[1] * tilted[1] +
                                tilted[2] * tilted[2]);
        Ptm detuned = rotation_ptm(tilted, angle * norm);
        factors.push_back(Ptm(2, detuned.m * g.m.transposed()));
      }
      return factors;
    }
    case ErrorKind::over_rotation: {
      for (const Ptm& g : ideal.gates) {
        std::array<double, 3> axis{};
        double angle = 0.0;
        axis_angle_from_ptm(g, axis, angle);
        if (angle == 0.0) {
          factors.push_back(Ptm::identity(2));
        } else {
          factors.push_back(rotation_ptm(axis, angle * e.strength));
        }
      }
      return factors;
    }
    case ErrorKind::random_unitary: {
      for (size_t i = 0; i < ideal.gates.size(); ++i) {
        Rng rng(combine_keys({e.seed, 0x756e6974617279ull, uint64_t(i)}));
        factors.push_back(rotation_ptm(random_unit_axis(rng), e.strength));
      }
      return factors;
    }
    case ErrorKind::global_unitary: {
      Rng rng(combine_keys({e.seed, 0x676c6f62616cull}));
      Ptm f = rotation_ptm(random_unit_axis(rng), e.strength);
      factors.assign(ideal.gates.size(), f);
      return factors;
    }
  }
  throw std::logic_error("unreachable");
}

GateLibrary apply_error_model(const GateLibrary& ideal, const ErrorModel& e) {
  GateLibrary out;
  out.dim = ideal.dim;
  out.labels = ideal.labels;
  std::vector<Ptm> factors = error_factors(ideal, e);
  out.gates.reserve(ideal.gates.size());
  for (size_t i = 0; i < ideal.gates.size(); ++i) {
    if (e.placement == ErrorPlacement::post) {
      out.gates.push_back(compose(factors[i], ideal.gates[i]));
    } else {
      out.gates.push_back(compose(ideal.gates[i], factors[i]));
    }
  }
  return out;
}

Mat twirl_average(const Mat& a, const GateLibrary& g) {
  if (g.gates.empty()) throw std::invalid_argument("empty gate library");
  int n = g.gates[0].size();
  Mat acc(n, n);
  for (const Ptm& r : g.gates) {
    acc += r.m.transposed() * a * r.m;
  }
  acc *= 1.0 / double(g.gates.size());
  return acc;
}

Mat twirl_closed_form(const Mat& a, int dim) {
  int n = dim * dim;
  double rest = (a.trace() - a(0, 0)) / double(n - 1);
  Mat out(n, n);
  out(0, 0) = a(0, 0);
  for (int k = 1; k < n; ++k) out(k, k) = rest;
  return out;
}

bool is_two_design(const GateLibrary& g) {
  // A fixed generic probe matrix; twirling it over the library agrees with
  // the Haar average exactly when the library is a unitary 2-design.
  int n = g.dim * g.dim;
  Rng rng(0x2d5eed);
  Mat probe(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) probe(i, j) = rng.normal();
  Mat diff = twirl_average(probe, g);
  diff -= twirl_closed_form(probe, g.dim);
  return diff.max_abs() <= 1e-10;
}

TwirlResult twirl(const Mat& a, const GateLibrary& g) {
  TwirlResult res;
  res.used_closed_form = is_two_design(g);
  res.output = res.used_closed_form ? twirl_closed_form(a, g.dim)
                                    : twirl_average(a, g);
  return res;
}

DepolarizingEquivalent depolarizing_equivalent(const Ptm& error,
                                               const Vec& m0) {
  if (error.dim != 2 || m0.size() != 4)
    throw std::invalid_argument("depolarizing equivalent is qubit-only");
  double d = 2.0;
  Vec e_m0 = error.m * m0;
  Vec identity_state(4, 0.0);
  identity_state[0] = 1.0;
  Vec e_id = error.m * identity_state;
  double tr_m0 = m0[0];
  if (std::abs(tr_m0) < 1e-300)
    throw std::invalid_argument("traceless measurement effect");
  DepolarizingEquivalent out;
  out.alpha = dot(m0, e_id) / tr_m0;
  double num = dot(m0, e_m0) / d / (dot(m0, e_id) * tr_m0 / d) - 1.0;
  double den = dot(m0, m0) / d / (tr_m0 * tr_m0 / d) - 1.0;
  out.eps = num / den;
  return out;
}

}  // namespace gsf
