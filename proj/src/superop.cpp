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

#include "gsf/superop.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gsf {

namespace {

std::vector<CMat> build_pauli_basis(int dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("pauli basis needs a power-of-two dimension");
  const cplx i1(0.0, 1.0);
  std::vector<CMat> one{
      CMat::from_rows({{1, 0}, {0, 1}}),
      CMat::from_rows({{0, 1}, {1, 0}}),
      CMat::from_rows({{0, -i1}, {i1, 0}}),
      CMat::from_rows({{1, 0}, {0, -1}}),
  };
  if (dim == 2) return one;
  int qubits = 0;
  for (int d = dim; d > 1; d >>= 1) ++qubits;
  int count = dim * dim;
  std::vector<CMat> basis;
  basis.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    // Base-4 digits of idx, most significant digit = leftmost tensor factor.
    CMat p = CMat::identity(1);
    p(0, 0) = 1.0;
    for (int q = qubits - 1; q >= 0; --q) {
      int digit = (idx >> (2 * q)) & 3;
      p = kron(p, one[digit]);
    }
    basis.push_back(std::move(p));
  }
  return basis;
}

}  // namespace

const std::vector<CMat>& pauli_basis(int dim) {
  static std::mutex mu;
  static std::map<int, std::vector<CMat>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dim);
  if (it == cache.end()) it = cache.emplace(dim, build_pauli_basis(dim)).first;
  return it->second;
}

Ptm Ptm::identity(int dim) { return Ptm(dim, Mat::identity(dim * dim)); }

Ptm ptm_from_kraus(const std::vector<CMat>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("empty kraus list");
  int dim = kraus[0].rows();
  const auto& paulis = pauli_basis(dim);
  int n = dim * dim;
  Ptm r(dim, Mat(n, n));
  for (int j = 0; j < n; ++j) {
    CMat image(dim, dim);
    for (const CMat& a : kraus) image += a * paulis[j] * a.adjoint();
    for (int i = 0; i < n; ++i) {
      cplx t = (paulis[i] * image).trace();
      r.m(i, j) = t.real() / dim;
    }
  }
  return r;
}

Ptm ptm_from_unitary(const CMat& u) { return ptm_from_kraus({u}); }

CMat choi_from_ptm(const Ptm& r) {
  int dim = r.dim, n = r.size();
  const auto& paulis = pauli_basis(dim);
  CMat choi(n, n);
  double scale = 1.0 / double(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      double w = r.m(k, j) * scale;
      if (w == 0.0) continue;
      CMat term = kron(paulis[j].transposed(), paulis[k]);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) choi(a, b) += w * term(a, b);
    }
  }
  return choi;
}

Ptm ptm_from_choi(const CMat& choi, int dim) {
  const auto& paulis = pauli_basis(dim);
  int n = dim * dim;
  if (choi.rows() != n) throw std::invalid_argument("choi size mismatch");
  Ptm r(dim, Mat(n, n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      CMat term = kron(paulis[j].transposed(), paulis[k]);
      cplx t = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t += choi(a, b) * term(b, a);
      r.m(k, j) = t.real();
    }
  return r;
}

CMat choi_output_first(const Ptm& r) {
  CMat c = choi_from_ptm(r);
  int d = r.dim, n = r.size();
  CMat out(n, n);
  // Index (i_in * d + i_out) -> (i_out * d + i_in) on both sides, times d.
  for (int a = 0; a < n; ++a) {
    int ain = a / d, aout = a % d;
    for (int b = 0; b < n; ++b) {
      int bin = b / d, bout = b % d;
      out(aout * d + ain, bout * d + bin) = double(d) * c(a, b);
    }
  }
  return out;
}

Vec vectorize_state(const CMat& rho) {
  int dim = rho.rows();
  const auto& paulis = pauli_basis(dim);
  Vec s(paulis.size());
  for (size_t j = 0; j < paulis.size(); ++j)
    s[j] = (paulis[j] * rho).trace().real() / dim;
  return s;
}

Vec vectorize_measurement(const CMat& m) {
  int dim = m.rows();
  const auto& paulis = pauli_basis(dim);
  Vec e(paulis.size());
  for (size_t j = 0; j < paulis.size(); ++j)
    e[j] = (m * paulis[j]).trace().real();
  return e;
}

CMat devectorize_state(const Vec& s, int dim) {
  const auto& paulis = pauli_basis(dim);
  CMat rho(dim, dim);
  for (size_t j = 0; j < paulis.size(); ++j)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) rho(a, b) += s[j] * paulis[j](a, b);
  return rho;
}

CMat devectorize_measurement(const Vec& e, int dim) {
  const auto& paulis = pauli_basis(dim);
  CMat m(dim, dim);
  double scale = 1.0 / dim;
  for (size_t j = 0; j < paulis.size(); ++j)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) m(a, b) += e[j] * scale * paulis[j](a, b);
  return m;
}

double expectation_value(const Vec& meas, const Ptm& r, const Vec& state) {
  Vec out = r.m * state;
  return dot(meas, out);
}

Ptm compose(const Ptm& after, const Ptm& before) {
  if (after.dim != before.dim) throw std::invalid_argument("compose dim mismatch");
  return Ptm(after.dim, after.m * before.m);
}

bool is_trace_preserving(const Ptm& r, double tol) {
  for (int j = 0; j < r.size(); ++j) {
    double want = j == 0 ? 1.0 : 0.0;
    if (std::abs(r.m(0, j) - want) > tol) return false;
  }
  return true;
}

bool is_unital(const Ptm& r, double tol) {
  for (int i = 0; i < r.size(); ++i) {
    double want = i == 0 ? 1.0 : 0.0;
    if (std::abs(r.m(i, 0) - want) > tol) return false;
  }
  return true;
}

bool is_orthogonal(const Ptm& r, double tol) {
  Mat g = r.m.transposed() * r.m;
  g -= Mat::identity(r.size());
  return g.max_abs() <= tol;
}

double choi_min_eigenvalue(const Ptm& r) {
  Vec eigs = hermitian_eigenvalues(choi_from_ptm(r));
  return eigs.empty() ? 0.0 : eigs.front();
}

bool is_cptp(const Ptm& r, double tol) {
  return is_trace_preserving(r, tol) && choi_min_eigenvalue(r) >= -tol;
}

CMat apply_ptm(const Ptm& r, const CMat& rho) {
  Vec s = vectorize_state(rho);
  Vec out = r.m * s;
  CMat result(r.dim, r.dim);
  const auto& paulis = pauli_basis(r.dim);
  for (int j = 0; j < r.size(); ++j)
    for (int a = 0; a < r.dim; ++a)
      for (int b = 0; b < r.dim; ++b) result(a, b) += out[j] * paulis[j](a, b);
  return result;
}

RandomChannel random_cptp(int dim, Rng& rng) {
  int env = dim * dim;
  CMat u = haar_unitary(dim * env, rng);
  RandomChannel ch;
  ch.kraus.reserve(env);
  // A_k = (I x <k|) U (I x |0>), carving d x d blocks out of the dilation.
  for (int k = 0; k < env; ++k) {
    CMat a(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) a(r, c) = u(r * env + k, c * env + 0);
    ch.kraus.push_back(std::move(a));
  }
  ch.ptm = ptm_from_kraus(ch.kraus);
  return ch;
}

}  // namespace gsf
