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

#ifndef GSF_RNG_HPP
#define GSF_RNG_HPP

#include <array>
#include <cstdint>

#include "gsf/linalg.hpp"

namespace gsf {

// splitmix64 finalizer; the mixing core for both streams and key derivation.
uint64_t mix64(uint64_t x);

// Collapse an arbitrary key tuple into one 64-bit seed. Order-sensitive.
uint64_t combine_keys(std::initializer_list<uint64_t> keys);

// Deterministic counter-based generator. std::random distributions are not
// pinned down by the standard, so uniforms and normals are produced here
// directly and behave identically on every platform and thread layout.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64();
  // Uniform on (0, 1).
  double uniform();
  // Standard normal via Box-Muller; generates in pairs, caches the second.
  double normal();
  // Uniform integer in [0, n).
  uint64_t uniform_int(uint64_t n);

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// One standard-normal draw keyed by record coordinates. Independent of call
// order and thread count: hash in, value out.
double keyed_normal(uint64_t seed, uint64_t tag, uint64_t i, uint64_t j, uint64_t k);

// Uniformly random unit vector on the 2-sphere.
std::array<double, 3> random_unit_axis(Rng& rng);

// Haar-distributed n x n unitary (Ginibre ensemble + modified Gram-Schmidt,
// which fixes the R-diagonal phases positive and so samples Haar measure).
CMat haar_unitary(int n, Rng& rng);

}  // namespace gsf

#endif
