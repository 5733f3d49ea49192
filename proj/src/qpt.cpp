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

#include "gsf/qpt.hpp"

#include <cmath>
#include <stdexcept>

#include "gsf/optim.hpp"
#include "gsf/serialize.hpp"

namespace gsf {
namespace {

int side_of(int entries) {
  int n = int(std::lround(std::sqrt(double(entries))));
  if (n * n != entries) throw std::invalid_argument("qpt: vector is not a square matrix");
  return n;
}

}  // namespace

BareEstimate bare_estimate(const DesignMatrix& design, const Vec& values) {
  const Mat& sp = design.s_prime;
  int d4 = sp.rows();
  int n_rec = sp.cols();
  if (n_rec == 0) throw std::invalid_argument("bare_estimate: no records");
  if (int(values.size()) != n_rec)
    throw std::invalid_argument("bare_estimate: value count does not match the design");
  int n = side_of(d4);  // d^2

  // Noise-weighted normal equations: gram = S'S'^T, h = S'm'.
  Mat gram = sp * sp.transposed();
  Vec h(d4, 0.0);
  for (int c = 0; c < n_rec; ++c) {
    double w = design.noise[c] > 0.0 ? 1.0 / std::sqrt(design.noise[c]) : 1.0;
    double mp = w * values[c];
    for (int r = 0; r < d4; ++r) h[r] += sp(r, c) * mp;
  }

  EighResult eg = jacobi_eigh(gram);
  double lam_max = eg.values.back();
  double cut = 1e-10 * std::max(lam_max, 0.0);

  BareEstimate out;
  Vec r(d4, 0.0);
  for (int k = 0; k < d4; ++k) {
    if (eg.values[k] <= cut) continue;
    ++out.rank;
    double coeff = 0.0;
    for (int i = 0; i < d4; ++i) coeff += eg.vectors(i, k) * h[i];
    coeff /= eg.values[k];
    for (int i = 0; i < d4; ++i) r[i] += coeff * eg.vectors(i, k);
  }
  out.used_pseudo_inverse = out.rank < d4;

  if (out.used_pseudo_inverse) {
    // The trace row can be restored by fiat, but only if every undetermined
    // direction lives in that row. Anything else is a data deficiency that
    // no constraint fixes, so report it instead of guessing.
    double outside = 0.0;
    for (int k = 0; k < d4; ++k) {
      if (eg.values[k] > cut) continue;
      for (int i = 0; i < d4; ++i)
        if (i % n != 0) outside = std::max(outside, std::abs(eg.vectors(i, k)));
    }
    if (outside > 1e-6)
      throw std::invalid_argument(
          "bare_estimate: rank " + std::to_string(out.rank) +
          " design leaves directions outside the trace row undetermined");
    r[0] = 1.0;
    for (int c = 1; c < n; ++c) r[size_t(c) * n] = 0.0;
  }

  int dim = int(std::lround(std::sqrt(double(n))));
  out.r_est = Ptm(dim, unvec_colmajor(r, n));

  for (int c = 0; c < n_rec; ++c) {
    double pred = 0.0;
    for (int i = 0; i < d4; ++i) pred += design.s(i, c) * r[i];
    out.residual += (pred - values[c]) * (pred - values[c]);
  }
  out.residual = std::sqrt(out.residual);
  return out;
}

double lsq_value(const std::vector<ExperimentRecord>& records, const DesignMatrix& design,
                 const Vec& candidate) {
  int d4 = design.s.rows();
  if (int(records.size()) != design.s.cols())
    throw std::invalid_argument("lsq_value: record count does not match the design");
  if (int(candidate.size()) != d4)
    throw std::invalid_argument("lsq_value: candidate length does not match the design");
  double total = 0.0;
  for (size_t c = 0; c < records.size(); ++c) {
    double pred = 0.0;
    for (int i = 0; i < d4; ++i) pred += design.s(i, int(c)) * candidate[i];
    double miss = records[c].value - pred;
    double n = records[c].noise_power;
    total += n > 0.0 ? miss * miss / n : miss * miss;
  }
  return total;
}

PhysicalEstimate project_cptp(const Ptm& r) {
  int dim = r.dim;
  int n = r.size();

  // The transfer-matrix -> Choi change of basis is a scaled isometry, so
  // running Dykstra on transfer-matrix entries still computes the
  // Frobenius-nearest point in either picture.
  auto clamp_cp = [dim, n](const Vec& x) {
    Ptm p(dim, unvec_colmajor(x, n));
    CMat clamped = hermitian_clamp_psd(choi_from_ptm(p));
    return vec_colmajor(ptm_from_choi(clamped, dim).m);
  };
  auto fix_tp = [n](const Vec& x) {
    Vec y = x;
    y[0] = 1.0;
    for (int c = 1; c < n; ++c) y[size_t(c) * n] = 0.0;
    return y;
  };

  DykstraResult res = dykstra(clamp_cp, fix_tp, vec_colmajor(r.m), 1e-11, 5000);

  PhysicalEstimate out;
  out.r_phys = Ptm(dim, unvec_colmajor(res.x, n));
  out.choi_min_eig = choi_min_eigenvalue(out.r_phys);
  out.sweeps = res.sweeps;
  out.converged = res.converged;
  Mat moved = out.r_phys.m - r.m;
  out.distance = moved.frobenius_norm();
  return out;
}

ReconstructionReport qpt_pipeline(const std::vector<ExperimentRecord>& records,
                                  const ExperimentPlan& plan) {
  DesignMatrix design = design_from_records(plan.library, plan.rho0, plan.m0, records);
  Vec values(records.size());
  for (size_t c = 0; c < records.size(); ++c) values[c] = records[c].value;

  ReconstructionReport report;
  report.bare = bare_estimate(design, values);
  report.phys = project_cptp(report.bare.r_est);
  report.lsq_value = lsq_value(records, design, vec_colmajor(report.phys.r_phys.m));
  return report;
}

nlohmann::json json_from_reconstruction(const ReconstructionReport& report) {
  return nlohmann::json{{"R_bare", json_from_ptm(report.bare.r_est)},
                        {"R_phys", json_from_ptm(report.phys.r_phys)},
                        {"rank", report.bare.rank},
                        {"residual", report.bare.residual},
                        {"choi_min_eig", report.phys.choi_min_eig},
                        {"projection_distance", report.phys.distance},
                        {"lsq_value", report.lsq_value}};
}

}  // namespace gsf
