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

#include "gsf/scqpt.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "gsf/channels.hpp"
#include "gsf/optim.hpp"
#include "gsf/qpt.hpp"
#include "gsf/serialize.hpp"

namespace gsf {

namespace {

void check_spam(const GateLibrary& lib, const Vec& rho0, const Vec& m0) {
  const size_t nn = size_t(lib.dim) * lib.dim;
  if (rho0.size() != nn || m0.size() != nn) {
    throw std::invalid_argument("scqpt: SPAM vector length does not match library dimension");
  }
}

void check_indices(const ExperimentRecord& rec, int n_gates) {
  if (rec.i < 0 || rec.i >= n_gates || rec.j < 0 || rec.j >= n_gates || rec.k < 0 ||
      rec.k >= n_gates) {
    throw std::invalid_argument("scqpt: record gate index out of range for the library");
  }
}

Ptm unpack_block(const Vec& x, int gate, int n, int dim) {
  Ptm block(dim, Mat(n, n));
  const size_t base = size_t(gate) * n * n;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) block.m(r, c) = x[base + size_t(r) * n + c];
  }
  return block;
}

void pack_block(Vec& x, int gate, const Ptm& block) {
  const int n = block.size();
  const size_t base = size_t(gate) * n * n;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) x[base + size_t(r) * n + c] = block.m(r, c);
  }
}

// Every gate conjugated into the rotated frame U = exp(-i phi Z / 2).
GateLibrary frame_conjugate(const GateLibrary& lib, double phi) {
  Ptm ru = rotation_ptm({0.0, 0.0, 1.0}, phi);
  Ptm ru_inv(lib.dim, ru.m.transposed());
  GateLibrary out;
  out.dim = lib.dim;
  out.labels = lib.labels;
  out.gates.reserve(lib.gates.size());
  for (const Ptm& g : lib.gates) out.gates.push_back(compose(ru_inv, compose(g, ru)));
  return out;
}

}  // namespace

LinearizedSystem build_linearized_system(const std::vector<ExperimentRecord>& records,
                                         const GateLibrary& ideal, const Vec& rho0,
                                         const Vec& m0) {
  if (ideal.size() == 0) {
    throw std::invalid_argument("build_linearized_system: empty gate library");
  }
  check_spam(ideal, rho0, m0);
  const int n = ideal.dim * ideal.dim;

  LinearizedSystem sys;
  sys.ideal = ideal;
  sys.rho0 = rho0;
  sys.m0 = m0;
  for (const ExperimentRecord& rec : records) {
    if (rec.is_triple()) sys.records.push_back(rec);
  }

  const int rows = int(sys.records.size());
  sys.a = Mat(rows, ideal.size() * n * n);
  sys.b = Vec(rows, 0.0);
  for (int row = 0; row < rows; ++row) {
    const ExperimentRecord& rec = sys.records[row];
    check_indices(rec, ideal.size());
    const Mat& ri = ideal.gates[rec.i].m;
    const Mat& rj = ideal.gates[rec.j].m;
    const Mat& rk = ideal.gates[rec.k].m;

    // States flowing right to left and measurements flowing left to right,
    // truncated at each gate's slot. The error map acts after its own gate,
    // so slot g sees the state propagated through gates up to and including
    // g and the measurement pulled back through everything later.
    Vec wi = ri * rho0;
    Vec wj = rj * wi;
    Vec wk = rk * wj;
    Vec vk = m0;
    Vec vj = rk.transposed() * vk;
    Vec vi = rj.transposed() * vj;

    auto add_block = [&](int gate, const Vec& v, const Vec& w) {
      const size_t base = size_t(gate) * n * n;
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) sys.a(row, base + size_t(r) * n + c) += v[r] * w[c];
      }
    };
    add_block(rec.k, vk, wk);
    add_block(rec.j, vj, wj);
    add_block(rec.i, vi, wi);
    sys.b[row] = rec.value + 2.0 * dot(m0, wk);
  }
  return sys;
}

GateSetEstimate solve_constrained(const LinearizedSystem& sys) {
  const int dim = sys.ideal.dim;
  const int n = dim * dim;
  const int nn = n * n;
  const int n_gates = sys.ideal.size();
  if (sys.a.cols() != n_gates * nn || sys.a.rows() != int(sys.b.size())) {
    throw std::invalid_argument("solve_constrained: system shape does not match its library");
  }

  Vec x0(size_t(n_gates) * nn, 0.0);
  for (int g = 0; g < n_gates; ++g) pack_block(x0, g, Ptm::identity(dim));

  auto project = [&](Vec& x) {
    for (int g = 0; g < n_gates; ++g) {
      pack_block(x, g, project_cptp(unpack_block(x, g, n, dim)).r_phys);
    }
  };

  // The stopping threshold is relative to the misfit of the all-identity
  // start, the natural scale of the problem. Normalizing by the current
  // objective instead would never fire once the floor is a tiny linearization
  // bias, and an absolute threshold stops far short of that floor.
  Vec r0 = sys.a * x0;
  for (size_t t = 0; t < r0.size(); ++t) r0[t] -= sys.b[t];
  const double f0_half = 0.5 * dot(r0, r0);
  ApgResult res =
      accelerated_projected_gradient(sys.a, sys.b, project, x0, 1e-12 * f0_half, 200000);

  GateSetEstimate est;
  est.ideal = sys.ideal;
  est.estimated.dim = dim;
  est.estimated.labels = sys.ideal.labels;
  est.error_maps.reserve(n_gates);
  est.estimated.gates.reserve(n_gates);
  for (int g = 0; g < n_gates; ++g) {
    Ptm error = unpack_block(res.x, g, n, dim);
    est.estimated.gates.push_back(compose(error, sys.ideal.gates[g]));
    est.error_maps.push_back(std::move(error));
  }

  est.lsq_linear = 2.0 * res.objective;
  Vec resid = sys.a * res.x;
  for (size_t t = 0; t < resid.size(); ++t) resid[t] -= sys.b[t];
  Vec grad = sys.a.transposed() * resid;
  est.gradient_norm = 2.0 * std::sqrt(dot(grad, grad));
  est.iterations = res.iterations;
  est.converged = res.converged;
  est.lsq_exact = exact_lsq(est.estimated, sys.records, sys.rho0, sys.m0);
  return est;
}

double exact_lsq(const GateLibrary& candidate, const std::vector<ExperimentRecord>& records,
                 const Vec& rho0, const Vec& m0) {
  check_spam(candidate, rho0, m0);
  double total = 0.0;
  for (const ExperimentRecord& rec : records) {
    if (!rec.is_triple()) continue;
    check_indices(rec, candidate.size());
    Vec w = candidate.gates[rec.i].m * rho0;
    w = candidate.gates[rec.j].m * w;
    w = candidate.gates[rec.k].m * w;
    const double miss = rec.value - dot(m0, w);
    total += miss * miss;
  }
  return total;
}

GateSetEstimate gauge_optimize(const GateSetEstimate& estimate, const GateLibrary& target,
                               Metric metric, const Vec& rho0, const Vec& m0) {
  const int n_gates = estimate.estimated.size();
  if (n_gates == 0 || target.size() != n_gates || estimate.ideal.size() != n_gates) {
    throw std::invalid_argument("gauge_optimize: estimate and target libraries do not line up");
  }
  check_spam(target, rho0, m0);
  if (std::abs(rho0[1]) > 1e-12 || std::abs(rho0[2]) > 1e-12 || std::abs(m0[1]) > 1e-12 ||
      std::abs(m0[2]) > 1e-12) {
    throw std::invalid_argument(
        "gauge_optimize: SPAM pair is not diagonal in the computational basis, so the z-rotation "
        "family is not a blind spot of this data");
  }
  for (const Ptm& g : estimate.ideal.gates) {
    if (!is_orthogonal(g, 1e-9)) {
      throw std::invalid_argument("gauge_optimize: ideal gates must be unitary");
    }
  }

  auto misfit = [&](double phi) {
    return library_distance(frame_conjugate(estimate.estimated, phi), target, metric);
  };

  // Coarse scan; the identity frame is the fallback when nothing beats it.
  const double two_pi = 2.0 * std::acos(-1.0);
  const int grid = 720;
  double best_phi = 0.0;
  double best_val = misfit(0.0);
  for (int t = 1; t < grid; ++t) {
    const double phi = two_pi * t / grid;
    const double v = misfit(phi);
    if (v < best_val) {
      best_val = v;
      best_phi = phi;
    }
  }

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_phi - two_pi / grid;
  double hi = best_phi + two_pi / grid;
  double c = hi - golden * (hi - lo);
  double d = lo + golden * (hi - lo);
  double fc = misfit(c);
  double fd = misfit(d);
  while (hi - lo > 1e-10) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - golden * (hi - lo);
      fc = misfit(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + golden * (hi - lo);
      fd = misfit(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  if (misfit(mid) < best_val) best_phi = mid;

  GateSetEstimate out = estimate;
  out.gauge_phi = std::fmod(estimate.gauge_phi + best_phi, two_pi);
  out.estimated = frame_conjugate(estimate.estimated, best_phi);
  for (int g = 0; g < n_gates; ++g) {
    Ptm inverse(estimate.ideal.dim, estimate.ideal.gates[g].m.transposed());
    out.error_maps[g] = compose(out.estimated.gates[g], inverse);
  }
  return out;
}

nlohmann::json json_from_gateset_estimate(const GateSetEstimate& estimate,
                                          const GateLibrary& target) {
  if (estimate.estimated.size() != target.size()) {
    throw std::invalid_argument("json_from_gateset_estimate: target library size mismatch");
  }
  nlohmann::json per_gate = nlohmann::json::array();
  for (int g = 0; g < estimate.estimated.size(); ++g) {
    nlohmann::json entry;
    entry["label"] = g < int(estimate.estimated.labels.size())
                         ? estimate.estimated.labels[g]
                         : "gate-" + std::to_string(g);
    entry["R_error"] = json_from_ptm(estimate.error_maps[g]);
    entry["R_estimated"] = json_from_ptm(estimate.estimated.gates[g]);
    entry["fidelity_error"] =
        avg_gate_fidelity_error(estimate.estimated.gates[g], target.gates[g]);
    entry["diamond_distance"] = diamond_distance(estimate.estimated.gates[g], target.gates[g]);
    per_gate.push_back(std::move(entry));
  }
  nlohmann::json j;
  j["per_gate"] = std::move(per_gate);
  j["gauge_phi"] = estimate.gauge_phi;
  j["lsq_linear"] = estimate.lsq_linear;
  j["lsq_exact"] = estimate.lsq_exact;
  j["iterations"] = estimate.iterations;
  j["converged"] = estimate.converged;
  j["gradient_norm"] = estimate.gradient_norm;
  return j;
}

}  // namespace gsf
