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

#include "gsf/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "gsf/rng.hpp"

namespace gsf {

Mat project_psd(const Mat& h) {
  EighResult e = jacobi_eigh(h);
  int n = h.rows();
  Mat out(n, n);
  for (int k = 0; k < n; ++k) {
    double lam = e.values[k];
    if (lam <= 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(i, j) += lam * e.vectors(i, k) * e.vectors(j, k);
  }
  return out;
}

Ptm project_tp(const Ptm& r) {
  Ptm out = r;
  for (int j = 0; j < out.size(); ++j) out.m(0, j) = (j == 0) ? 1.0 : 0.0;
  return out;
}

DykstraResult dykstra(const std::function<Vec(const Vec&)>& project_a,
                      const std::function<Vec(const Vec&)>& project_b, Vec x0,
                      double tol, int max_sweeps) {
  DykstraResult res;
  size_t n = x0.size();
  Vec x = std::move(x0);
  Vec p(n, 0.0), q(n, 0.0);
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    Vec prev = x;
    Vec ya(n);
    for (size_t i = 0; i < n; ++i) ya[i] = x[i] + p[i];
    Vec a = project_a(ya);
    for (size_t i = 0; i < n; ++i) p[i] = ya[i] - a[i];
    Vec yb(n);
    for (size_t i = 0; i < n; ++i) yb[i] = a[i] + q[i];
    x = project_b(yb);
    for (size_t i = 0; i < n; ++i) q[i] = yb[i] - x[i];
    res.sweeps = sweep;
    double moved = 0.0;
    for (size_t i = 0; i < n; ++i)
      moved = std::max(moved, std::abs(x[i] - prev[i]));
    if (moved < tol) {
      res.converged = true;
      break;
    }
  }
  res.x = std::move(x);
  return res;
}

namespace {

// Largest eigenvalue of a^T a by power iteration with a fixed starting
// vector, all callers get the same deterministic estimate.
double quadratic_lipschitz(const Mat& a) {
  int n = a.cols();
  Rng rng(0x517eb);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  double nv = std::sqrt(dot(v, v));
  if (nv == 0.0) return 0.0;
  for (double& c : v) c /= nv;
  double lam = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vec av = a * v;
    Vec w(n, 0.0);
    for (int r = 0; r < a.rows(); ++r)
      for (int c = 0; c < n; ++c) w[c] += a(r, c) * av[r];
    double nw = std::sqrt(dot(w, w));
    if (nw == 0.0) return 0.0;
    double next = dot(v, w);
    for (int c = 0; c < n; ++c) v[c] = w[c] / nw;
    if (it > 4 && std::abs(next - lam) <= 1e-12 * std::max(1.0, next)) {
      lam = next;
      break;
    }
    lam = next;
  }
  return lam;
}

}  // namespace

ApgResult accelerated_projected_gradient(
    const Mat& a, const Vec& b, const std::function<void(Vec&)>& project,
    Vec x0, double tol, int max_iter) {
  if (a.cols() != int(x0.size()) || a.rows() != int(b.size()))
    throw std::invalid_argument("quadratic objective shape mismatch");
  int n = a.cols();
  // Normal-equation form: f(x) = x^T G x / 2 - h^T x + ||b||^2 / 2.
  Mat g = a.transposed() * a;
  Vec h(n, 0.0);
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < n; ++c) h[c] += a(r, c) * b[r];
  // The value is computed from the residual, not the normal-equation form:
  // near a consistent optimum the latter cancels catastrophically and can no
  // longer certify monotone progress.
  auto value = [&](const Vec& x) {
    Vec r = a * x;
    for (int i = 0; i < a.rows(); ++i) r[i] -= b[i];
    return 0.5 * dot(r, r);
  };
  auto gradient = [&](const Vec& x) {
    Vec gx = g * x;
    for (int c = 0; c < n; ++c) gx[c] -= h[c];
    return gx;
  };

  ApgResult res;
  double lam = quadratic_lipschitz(a);
  Vec x = std::move(x0);
  project(x);
  if (lam <= 0.0) {
    res.objective = value(x);
    res.x = std::move(x);
    res.converged = true;
    return res;
  }
  double step = 1.0 / (lam * (1.0 + 1e-9));
  double fx = value(x);
  Vec y = x;
  double t = 1.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    res.iterations = iter;
    Vec gy = gradient(y);
    Vec xn(n);
    for (int c = 0; c < n; ++c) xn[c] = y[c] - step * gy[c];
    project(xn);
    double fn = value(xn);
    if (fn > fx) {
      // Momentum overshot; restart from the last accepted point with a plain
      // projected-gradient step, which cannot increase the objective at a
      // valid step size. Shrink the step if the Lipschitz estimate was low.
      t = 1.0;
      for (int halvings = 0; halvings < 60; ++halvings) {
        Vec gx = gradient(x);
        for (int c = 0; c < n; ++c) xn[c] = x[c] - step * gx[c];
        project(xn);
        fn = value(xn);
        if (fn <= fx) break;
        step /= 2.0;
      }
      if (fn > fx) {
        xn = x;
        fn = fx;
      }
    }
    double tn = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    for (int c = 0; c < n; ++c)
      y[c] = xn[c] + (t - 1.0) / tn * (xn[c] - x[c]);
    bool settled = std::abs(fx - fn) <= tol * std::max(1.0, std::abs(fx));
    x = std::move(xn);
    fx = fn;
    t = tn;
    if (settled) {
      res.converged = true;
      break;
    }
  }
  res.x = std::move(x);
  res.objective = fx;
  return res;
}

std::string sdp_status_name(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iter: return "max-iter";
    case SdpStatus::numerical_failure: return "numerical-failure";
  }
  throw std::logic_error("unreachable");
}

namespace {

using Blocks = std::vector<Mat>;

Mat symmetrized(const Mat& m) {
  Mat out = m;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out(i, j) = (m(i, j) + m(j, i)) / 2.0;
  return out;
}

Mat lower_tri_inverse(const Mat& l) {
  int n = l.rows();
  Mat inv(n, n);
  for (int c = 0; c < n; ++c) {
    inv(c, c) = 1.0 / l(c, c);
    for (int r = c + 1; r < n; ++r) {
      double s = 0.0;
      for (int k = c; k < r; ++k) s += l(r, k) * inv(k, c);
      inv(r, c) = -s / l(r, r);
    }
  }
  return inv;
}

double blocks_dot(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += frob_dot(a[k], b[k]);
  return s;
}

void blocks_axpy(Blocks& acc, double alpha, const Blocks& d) {
  for (size_t k = 0; k < acc.size(); ++k) {
    Mat scaled = d[k];
    scaled *= alpha;
    acc[k] += scaled;
  }
}

// Largest alpha with P + alpha D >= 0, via the smallest eigenvalue of
// L^-1 D L^-T where P = L L^T.
double step_to_boundary(const Blocks& p, const Blocks& d) {
  double alpha = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < p.size(); ++k) {
    auto l = cholesky(p[k]);
    if (!l) {
      // Rounding can leave an iterate marginally indefinite; a hair of
      // diagonal slack keeps the boundary estimate usable instead of
      // freezing the step at zero.
      Mat bumped = p[k];
      double tr = 0.0;
      for (int i = 0; i < bumped.rows(); ++i) tr += bumped(i, i);
      double bump = std::max(tr, 1.0) * 1e-14 / bumped.rows();
      for (int i = 0; i < bumped.rows(); ++i) bumped(i, i) += bump;
      l = cholesky(bumped);
      if (!l) return 0.0;
    }
    Mat linv = lower_tri_inverse(*l);
    Mat gmat = linv * d[k] * linv.transposed();
    EighResult e = jacobi_eigh(gmat);
    double lmin = e.values.front();
    if (lmin < -1e-14) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

struct Presolve {
  std::vector<int> kept;
  std::vector<int> dropped;
};

// Greedy Gram-Schmidt over flattened constraint rows; a row inside the span
// of earlier rows is dropped after checking its rhs entry matches the same
// linear combination.
Presolve presolve_rows(const std::vector<std::vector<Mat>>& cons,
                       const Vec& rhs) {
  Presolve out;
  std::vector<Vec> basis;
  Vec basis_rhs;
  double bscale = 1.0 + max_abs(rhs);
  for (size_t i = 0; i < cons.size(); ++i) {
    Vec row;
    for (const Mat& blk : cons[i])
      row.insert(row.end(), blk.data(), blk.data() + size_t(blk.rows()) * blk.cols());
    double r0 = std::sqrt(dot(row, row));
    double rb = rhs[i];
    for (size_t k = 0; k < basis.size(); ++k) {
      double c = dot(row, basis[k]);
      for (size_t j = 0; j < row.size(); ++j) row[j] -= c * basis[k][j];
      rb -= c * basis_rhs[k];
    }
    double rn = std::sqrt(dot(row, row));
    if (rn <= 1e-10 * std::max(1.0, r0)) {
      if (std::abs(rb) > 1e-8 * bscale)
        throw std::invalid_argument(
            "constraint row " + std::to_string(i) +
            " is linearly dependent with an inconsistent right-hand side");
      out.dropped.push_back(int(i));
      continue;
    }
    for (double& v : row) v /= rn;
    basis.push_back(std::move(row));
    basis_rhs.push_back(rb / rn);
    out.kept.push_back(int(i));
  }
  return out;
}

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts) {
  size_t nblocks = p.block_sizes.size();
  if (p.objective.size() != nblocks)
    throw std::invalid_argument("objective block count mismatch");
  if (p.constraints.size() != p.rhs.size())
    throw std::invalid_argument("constraint row count mismatch");
  for (const auto& row : p.constraints)
    if (row.size() != nblocks)
      throw std::invalid_argument("constraint block count mismatch");

  Blocks cmat;
  for (size_t k = 0; k < nblocks; ++k) {
    if (p.objective[k].rows() != p.block_sizes[k])
      throw std::invalid_argument("objective block size mismatch");
    cmat.push_back(symmetrized(p.objective[k]));
  }
  std::vector<Blocks> amats;
  for (const auto& row : p.constraints) {
    Blocks sym;
    for (size_t k = 0; k < nblocks; ++k) sym.push_back(symmetrized(row[k]));
    amats.push_back(std::move(sym));
  }

  SdpSolution sol;
  Presolve pre = presolve_rows(amats, p.rhs);
  sol.dropped_rows = pre.dropped;
  int m = int(pre.kept.size());
  if (m == 0) throw std::invalid_argument("no independent constraint rows");
  std::vector<Blocks> arows;
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    arows.push_back(amats[pre.kept[i]]);
    b[i] = p.rhs[pre.kept[i]];
  }

  int ntotal = 0;
  for (int s : p.block_sizes) ntotal += s;
  double cnorm = 0.0;
  for (const Mat& c : cmat) cnorm += c.frobenius_norm() * c.frobenius_norm();
  cnorm = std::sqrt(cnorm);
  double bnorm = std::sqrt(dot(b, b));

  auto apply_a = [&](const Blocks& x) {
    Vec out(m);
    for (int i = 0; i < m; ++i) out[i] = blocks_dot(arows[i], x);
    return out;
  };
  auto apply_at = [&](const Vec& y) {
    Blocks out;
    for (size_t k = 0; k < nblocks; ++k)
      out.emplace_back(p.block_sizes[k], p.block_sizes[k]);
    for (int i = 0; i < m; ++i) blocks_axpy(out, y[i], arows[i]);
    return out;
  };

  double eta = std::max({1.0, max_abs(b), [&] {
                           double v = 0.0;
                           for (const Mat& c : cmat)
                             v = std::max(v, c.max_abs());
                           return v;
                         }()});
  Blocks x, z;
  for (size_t k = 0; k < nblocks; ++k) {
    Mat ini = Mat::identity(p.block_sizes[k]);
    ini *= eta;
    x.push_back(ini);
    z.push_back(ini);
  }
  Vec y(m, 0.0);

  auto fill_solution = [&](SdpStatus status) {
    sol.status = status;
    sol.x = x;
    sol.z = z;
    sol.y.assign(p.rhs.size(), 0.0);
    for (int i = 0; i < m; ++i) sol.y[pre.kept[i]] = y[i];
    sol.primal = blocks_dot(cmat, x);
    sol.dual = dot(b, y);
    sol.gap = std::abs(sol.dual - sol.primal);
    return sol;
  };

  if (opts.trace)
    *opts.trace << "iter,mu,primal,dual,pinf,dinf,alpha_p,alpha_d,sigma\n";

  // Best iterate seen so far; a late-stage numerical breakdown then degrades
  // the answer to the best achieved accuracy instead of losing it.
  Blocks best_x = x, best_z = z;
  Vec best_y = y;
  double best_score = std::numeric_limits<double>::infinity();
  double best_relgap = best_score, best_pinf = best_score, best_dinf = best_score;
  auto finish = [&](SdpStatus status) {
    x = best_x;
    z = best_z;
    y = best_y;
    if (status != SdpStatus::optimal && best_relgap <= 10 * opts.gap_tol &&
        best_pinf <= 10 * opts.feas_tol && best_dinf <= 10 * opts.feas_tol)
      status = SdpStatus::optimal;
    return fill_solution(status);
  };

  // Cholesky with one retried tiny diagonal bump, for factorizations that sit
  // right at the positive-definite boundary in the final iterations.
  auto chol_bumped = [](Mat mat) -> std::optional<Mat> {
    auto l = cholesky(mat);
    if (l) return l;
    double tr = 0.0;
    for (int i = 0; i < mat.rows(); ++i) tr += mat(i, i);
    double bump = std::max(tr, 1.0) * 1e-14 / mat.rows();
    for (int i = 0; i < mat.rows(); ++i) mat(i, i) += bump;
    return cholesky(mat);
  };

  int stalled = 0;
  int slow = 0;
  double mu_prev = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    sol.iterations = iter;
    // Residuals and convergence measures.
    Vec ax = apply_a(x);
    Vec rp(m);
    for (int i = 0; i < m; ++i) rp[i] = b[i] - ax[i];
    Blocks aty = apply_at(y);
    Blocks rd;
    for (size_t k = 0; k < nblocks; ++k) {
      Mat r = cmat[k];
      r += z[k];
      r -= aty[k];
      rd.push_back(std::move(r));
    }
    double mu = blocks_dot(x, z) / ntotal;
    double primal = blocks_dot(cmat, x);
    double dualv = dot(b, y);
    double pinf = std::sqrt(dot(rp, rp)) / (1.0 + bnorm);
    double dinf = 0.0;
    for (const Mat& r : rd) dinf += r.frobenius_norm() * r.frobenius_norm();
    dinf = std::sqrt(dinf) / (1.0 + cnorm);
    double relgap =
        std::abs(primal - dualv) / (1.0 + std::abs(primal) + std::abs(dualv));
    if (!std::isfinite(mu) || !std::isfinite(primal) || !std::isfinite(dualv))
      return finish(SdpStatus::numerical_failure);
    if (std::max({relgap, pinf, dinf}) < best_score) {
      best_score = std::max({relgap, pinf, dinf});
      best_relgap = relgap;
      best_pinf = pinf;
      best_dinf = dinf;
      best_x = x;
      best_z = z;
      best_y = y;
    }
    if (relgap <= opts.gap_tol && pinf <= opts.feas_tol &&
        dinf <= opts.feas_tol)
      return finish(SdpStatus::optimal);
    // Barrier parameter frozen across several iterations means the working
    // precision floor was hit; stop rather than spin until max_iterations.
    slow = mu > 0.98 * mu_prev ? slow + 1 : 0;
    mu_prev = mu;
    if (slow >= 6) return finish(SdpStatus::max_iter);

    // Nesterov-Todd scaling point per block: W Z W = X.
    Blocks w, zinv, lx;
    bool factor_ok = true;
    for (size_t k = 0; k < nblocks; ++k) {
      auto lzk = chol_bumped(z[k]);
      auto lxk = chol_bumped(x[k]);
      if (!lzk || !lxk) {
        factor_ok = false;
        break;
      }
      lx.push_back(*lxk);
      Mat linv = lower_tri_inverse(*lzk);
      Mat inner = lzk->transposed() * x[k] * (*lzk);
      EighResult e = jacobi_eigh(inner);
      int nk = p.block_sizes[k];
      Mat root(nk, nk);
      for (int t = 0; t < nk; ++t) {
        double lam = std::sqrt(std::max(e.values[t], 0.0));
        for (int i = 0; i < nk; ++i)
          for (int j = 0; j < nk; ++j)
            root(i, j) += lam * e.vectors(i, t) * e.vectors(j, t);
      }
      w.push_back(linv.transposed() * root * linv);
      zinv.push_back(linv.transposed() * linv);
    }
    if (!factor_ok) return finish(SdpStatus::numerical_failure);

    // Schur complement M_ij = <A_i, W A_j W>, shared by both direction solves.
    std::vector<Blocks> waw(m);
    for (int j = 0; j < m; ++j) {
      Blocks u;
      for (size_t k = 0; k < nblocks; ++k)
        u.push_back(w[k] * arows[j][k] * w[k]);
      waw[j] = std::move(u);
    }
    Mat schur(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) {
        double v = blocks_dot(arows[i], waw[j]);
        schur(i, j) = v;
        schur(j, i) = v;
      }
    // The Schur system turns singular to working precision as mu shrinks, so
    // solve it through an eigendecomposition with floored eigenvalues; that
    // caps the condition number where a Cholesky would simply fail.
    EighResult se = jacobi_eigh(schur);
    double lmax = 0.0;
    for (double v : se.values) lmax = std::max(lmax, v);
    if (!(lmax > 0.0)) return finish(SdpStatus::numerical_failure);
    const double lfloor = 1e-16 * lmax;
    auto eig_solve = [&](const Vec& rhs) {
      Vec t(m, 0.0), out(m, 0.0);
      for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += se.vectors(i, j) * rhs[i];
        t[j] = acc / std::max(se.values[j], lfloor);
      }
      for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) acc += se.vectors(i, j) * t[j];
        out[i] = acc;
      }
      return out;
    };
    // Two rounds of iterative refinement keep the Newton residual small even
    // when the Schur matrix is nearly singular; without them the leftover
    // solve error accumulates as primal infeasibility near convergence.
    auto schur_solve = [&](const Vec& rhs) {
      Vec dyv = eig_solve(rhs);
      for (int pass = 0; pass < 3; ++pass) {
        Vec resid(m);
        for (int i = 0; i < m; ++i) {
          double acc = rhs[i];
          for (int j = 0; j < m; ++j) acc -= schur(i, j) * dyv[j];
          resid[i] = acc;
        }
        Vec corr = eig_solve(resid);
        for (int i = 0; i < m; ++i) dyv[i] += corr[i];
      }
      return dyv;
    };

    Blocks wrdw;
    for (size_t k = 0; k < nblocks; ++k) wrdw.push_back(w[k] * rd[k] * w[k]);
    Vec a_wrdw = apply_a(wrdw);

    auto direction = [&](const Blocks& rc, Vec& dy, Blocks& dz, Blocks& dx) {
      Vec rhs = apply_a(rc);
      for (int i = 0; i < m; ++i) rhs[i] += a_wrdw[i] - rp[i];
      dy = schur_solve(rhs);
      Blocks atdy = apply_at(dy);
      dz.clear();
      dx.clear();
      for (size_t k = 0; k < nblocks; ++k) {
        Mat dzk = atdy[k];
        dzk -= rd[k];
        Mat dxk = rc[k];
        dxk -= w[k] * dzk * w[k];
        dz.push_back(std::move(dzk));
        dx.push_back(symmetrized(dxk));
      }
    };

    // Predictor: pure Newton step toward mu = 0.
    Blocks rc_aff;
    for (size_t k = 0; k < nblocks; ++k) {
      Mat r = x[k];
      r *= -1.0;
      rc_aff.push_back(std::move(r));
    }
    Vec dy_aff;
    Blocks dz_aff, dx_aff;
    direction(rc_aff, dy_aff, dz_aff, dx_aff);
    double ap_aff = std::min(1.0, step_to_boundary(x, dx_aff));
    double ad_aff = std::min(1.0, step_to_boundary(z, dz_aff));
    Blocks x_aff = x, z_aff = z;
    blocks_axpy(x_aff, ap_aff, dx_aff);
    blocks_axpy(z_aff, ad_aff, dz_aff);
    double mu_aff = std::max(0.0, blocks_dot(x_aff, z_aff) / ntotal);
    double sigma = mu > 0.0 ? std::pow(mu_aff / mu, 3) : 0.0;
    sigma = std::clamp(sigma, 1e-8, 1.0);

    // Corrector with the Mehrotra second-order term.
    Blocks rc;
    for (size_t k = 0; k < nblocks; ++k) {
      Mat r = zinv[k];
      r *= sigma * mu;
      r -= x[k];
      Mat second = dx_aff[k] * dz_aff[k] * zinv[k];
      r -= symmetrized(second);
      rc.push_back(symmetrized(r));
    }
    Vec dy;
    Blocks dz, dx;
    direction(rc, dy, dz, dx);
    // Step almost to the boundary once the barrier is small; the cautious
    // fraction only matters while the iterate is far from the central path.
    double tau = mu < 1e-5 ? 0.995 : 0.98;
    double ap = std::min(1.0, tau * step_to_boundary(x, dx));
    double ad = std::min(1.0, tau * step_to_boundary(z, dz));
    blocks_axpy(x, ap, dx);
    blocks_axpy(z, ad, dz);
    for (int i = 0; i < m; ++i) y[i] += ad * dy[i];

    if (opts.trace) {
      *opts.trace << iter << ',' << mu << ',' << primal << ',' << dualv << ','
                  << pinf << ',' << dinf << ',' << ap << ',' << ad << ','
                  << sigma << '\n';
    }
    if (std::max(ap, ad) < 1e-10) {
      if (++stalled >= 3) return finish(SdpStatus::numerical_failure);
    } else {
      stalled = 0;
    }
  }
  return finish(SdpStatus::max_iter);
}

}  // namespace gsf
