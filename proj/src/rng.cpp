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

#include "gsf/rng.hpp"

#include <cmath>

namespace gsf {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t combine_keys(std::initializer_list<uint64_t> keys) {
  uint64_t h = 0x243f6a8885a308d3ULL;
  for (uint64_t k : keys) h = mix64(h ^ mix64(k));
  return h;
}

uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  uint64_t x = state_;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::uniform() {
  // 53 significant bits, shifted off zero so log() below is always safe.
  return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

uint64_t Rng::uniform_int(uint64_t n) {
  // Rejection sampling to keep the draw exactly uniform.
  uint64_t limit = n * (UINT64_MAX / n);
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double keyed_normal(uint64_t seed, uint64_t tag, uint64_t i, uint64_t j, uint64_t k) {
  Rng rng(combine_keys({seed, tag, i, j, k}));
  return rng.normal();
}

std::array<double, 3> random_unit_axis(Rng& rng) {
  while (true) {
    double x = rng.normal(), y = rng.normal(), z = rng.normal();
    double n = std::sqrt(x * x + y * y + z * z);
    if (n > 1e-12) return {x / n, y / n, z / n};
  }
}

CMat haar_unitary(int n, Rng& rng) {
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  // Modified Gram-Schmidt on columns.
  for (int c = 0; c < n; ++c) {
    for (int p = 0; p < c; ++p) {
      cplx proj = 0.0;
      for (int r = 0; r < n; ++r) proj += std::conj(g(r, p)) * g(r, c);
      for (int r = 0; r < n; ++r) g(r, c) -= proj * g(r, p);
    }
    double nrm = 0.0;
    for (int r = 0; r < n; ++r) nrm += std::norm(g(r, c));
    nrm = std::sqrt(nrm);
    for (int r = 0; r < n; ++r) g(r, c) /= nrm;
  }
  return g;
}

}  // namespace gsf
