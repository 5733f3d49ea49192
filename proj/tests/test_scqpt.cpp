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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"

#include "gsf/channels.hpp"
#include "gsf/linalg.hpp"
#include "gsf/metrics.hpp"
#include "gsf/qpt.hpp"
#include "gsf/rng.hpp"
#include "gsf/scqpt.hpp"
#include "gsf/sim.hpp"

namespace {

using namespace gsf;

double sq_misfit(const LinearizedSystem& sys, const Vec& x) {
  Vec r = sys.a * x;
  double total = 0.0;
  for (size_t t = 0; t < r.size(); ++t) {
    const double miss = r[t] - sys.b[t];
    total += miss * miss;
  }
  return total;
}

Vec identity_start(int n_gates) {
  Vec x(size_t(n_gates) * 16, 0.0);
  for (int g = 0; g < n_gates; ++g) {
    for (int r = 0; r < 4; ++r) x[size_t(g) * 16 + size_t(r) * 4 + r] = 1.0;
  }
  return x;
}

GateLibrary conjugated(const GateLibrary& lib, double phi) {
  Ptm ru = rotation_ptm({0.0, 0.0, 1.0}, phi);
  Ptm ru_inv(lib.dim, ru.m.transposed());
  GateLibrary out;
  out.dim = lib.dim;
  out.labels = lib.labels;
  for (const Ptm& g : lib.gates) out.gates.push_back(compose(ru_inv, compose(g, ru)));
  return out;
}

// Standard single-gate tomography fed from the same triples: the runs with
// gate g in the middle slot become pair records whose prep and measure
// indices are taken at face value, SPAM errors and all.
GateLibrary qpt_per_gate(const std::vector<ExperimentRecord>& triples,
                         const ExperimentPlan& plan) {
  GateLibrary out;
  out.dim = plan.library.dim;
  out.labels = plan.library.labels;
  for (int g = 0; g < plan.library.size(); ++g) {
    std::vector<ExperimentRecord> pairs;
    for (const ExperimentRecord& rec : triples) {
      if (rec.j == g) pairs.push_back({rec.i, rec.k, -1, rec.value, rec.noise_power});
    }
    out.gates.push_back(qpt_pipeline(pairs, plan).phys.r_phys);
  }
  return out;
}

}  // namespace

TEST_CASE("linearized system is exact at the identity expansion point") {
  for (const char* name : {"tetrahedral", "cardinal-six"}) {
    ExperimentPlan plan;
    plan.library = standard_library(name);
    plan.noise_power = 0.0;
    auto triples = simulate_triples(plan);
    LinearizedSystem sys = build_linearized_system(triples, plan.library, plan.rho0, plan.m0);

    const int n_gates = plan.library.size();
    CHECK(sys.a.rows() == n_gates * n_gates * n_gates);
    CHECK(sys.a.cols() == n_gates * 16);
    CHECK(int(sys.records.size()) == sys.a.rows());

    Vec x = identity_start(n_gates);
    Vec pred = sys.a * x;
    double worst = 0.0;
    for (size_t t = 0; t < pred.size(); ++t) {
      worst = std::max(worst, std::abs(pred[t] - sys.b[t]));
    }
    CHECK(worst < 1e-12);
  }

  SUBCASE("bad inputs are rejected") {
    GateLibrary lib = standard_library("tetrahedral");
    ExperimentRecord bad{0, 4, 0, 0.5, 0.0};
    CHECK_THROWS_AS(build_linearized_system({bad}, lib, {0.5, 0, 0, 0.5}, {1, 0, 0, 1}),
                    std::invalid_argument);
    ExperimentRecord ok{0, 0, 0, 1.0, 0.0};
    CHECK_THROWS_AS(build_linearized_system({ok}, lib, {0.5, 0, 0.5}, {1, 0, 0, 1}),
                    std::invalid_argument);
  }
}

TEST_CASE("single identity gate stacks its coefficient block three times") {
  GateLibrary lib;
  lib.dim = 2;
  lib.labels = {"I"};
  lib.gates = {Ptm::identity(2)};
  const Vec s0{0.5, 0.0, 0.0, 0.5};
  const Vec m0{1.0, 0.0, 0.0, 1.0};

  ExperimentPlan plan;
  plan.library = lib;
  plan.noise_power = 0.0;
  auto triples = simulate_triples(plan);
  REQUIRE(triples.size() == 1);
  CHECK(triples[0].value == doctest::Approx(1.0).epsilon(1e-12));

  LinearizedSystem sys = build_linearized_system(triples, lib, s0, m0);
  REQUIRE(sys.a.rows() == 1);
  REQUIRE(sys.a.cols() == 16);
  // All three placements of the lone error map collapse onto the same block,
  // so every coefficient is three times the rank-one SPAM outer product.
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      CHECK(sys.a(0, r * 4 + c) == doctest::Approx(3.0 * m0[r] * s0[c]).epsilon(1e-14));
    }
  }
  CHECK(sys.b[0] == doctest::Approx(triples[0].value + 2.0).epsilon(1e-14));
}

TEST_CASE("clean-data systems are rank-deficient by the unobservable frame directions") {
  for (const char* name : {"tetrahedral", "cardinal-six"}) {
    ExperimentPlan plan;
    plan.library = standard_library(name);
    plan.noise_power = 0.0;
    auto triples = simulate_triples(plan);
    LinearizedSystem sys = build_linearized_system(triples, plan.library, plan.rho0, plan.m0);

    Mat ata = sys.a.transposed() * sys.a;
    EighResult eig = jacobi_eigh(ata);
    const int cols = sys.a.cols();
    const double top = eig.values[cols - 1];
    int rank = 0;
    for (double v : eig.values) {
      if (v > 1e-10 * top) ++rank;
    }
    CHECK(rank < cols);
    CHECK(cols - rank >= 1);
    // Both libraries leave a ten-dimensional blind spot, the frame rotation
    // among them, separated from the seen directions by thirteen decades.
    CHECK(cols - rank == 10);
    CHECK(eig.values[9] < 1e-12);
    CHECK(eig.values[10] > 1e-3);
  }
}

TEST_CASE("solver returns identity maps on clean data") {
  ExperimentPlan plan;
  plan.library = standard_library("cardinal-six");
  plan.noise_power = 0.0;
  auto triples = simulate_triples(plan);
  LinearizedSystem sys = build_linearized_system(triples, plan.library, plan.rho0, plan.m0);
  GateSetEstimate est = solve_constrained(sys);

  CHECK(est.converged);
  CHECK(est.lsq_linear < 1e-18);
  CHECK(est.lsq_exact < 1e-20);
  REQUIRE(int(est.error_maps.size()) == plan.library.size());
  double worst = 0.0;
  for (const Ptm& e : est.error_maps) {
    Mat dev = e.m - Mat::identity(4);
    worst = std::max(worst, dev.max_abs());
    CHECK(is_cptp(e, 1e-9));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("frame-rotated clean data is indistinguishable and solves to the same point") {
  const double phi = 1.234;
  ExperimentPlan plan;
  plan.library = standard_library("cardinal-six");
  plan.noise_power = 0.0;
  auto reference = simulate_triples(plan);

  ExperimentPlan rotated = plan;
  rotated.library = conjugated(plan.library, phi);
  auto transformed = simulate_triples(rotated);

  REQUIRE(reference.size() == transformed.size());
  double worst = 0.0;
  for (size_t t = 0; t < reference.size(); ++t) {
    worst = std::max(worst, std::abs(reference[t].value - transformed[t].value));
  }
  CHECK(worst < 1e-12);

  LinearizedSystem sys =
      build_linearized_system(transformed, plan.library, plan.rho0, plan.m0);
  GateSetEstimate est = solve_constrained(sys);
  CHECK(est.lsq_linear < 1e-18);
  for (const Ptm& e : est.error_maps) {
    CHECK((e.m - Mat::identity(4)).max_abs() < 1e-9);
  }
}

TEST_CASE("joint estimation beats per-gate tomography on coherent errors") {
  ExperimentPlan plan;
  plan.library = standard_library("cardinal-six");
  plan.errors = {{ErrorKind::random_unitary, 1e-2, ErrorPlacement::post, 42}};
  plan.noise_power = 0.0;
  plan.seed = 7;
  auto triples = simulate_triples(plan);
  GateLibrary truth = faulty_library(plan);

  LinearizedSystem sys = build_linearized_system(triples, plan.library, plan.rho0, plan.m0);
  GateSetEstimate est = solve_constrained(sys);
  CHECK(est.converged);
  CHECK(est.iterations > 0);
  for (const Ptm& e : est.error_maps) CHECK(is_cptp(e, 1e-9));

  GateSetEstimate gauged =
      gauge_optimize(est, truth, Metric::fidelity_error, plan.rho0, plan.m0);
  for (const Ptm& e : gauged.error_maps) CHECK(is_cptp(e, 1e-9));

  GateLibrary qpt_lib = qpt_per_gate(triples, plan);
  const double sc_err = library_distance(gauged.estimated, truth, Metric::fidelity_error);
  const double qpt_err = library_distance(qpt_lib, truth, Metric::fidelity_error);
  CHECK(sc_err < qpt_err);
  CHECK(sc_err < 1e-4);

  SUBCASE("full misfit agrees with an independent evaluation") {
    CHECK(exact_lsq(truth, triples, plan.rho0, plan.m0) < 1e-22);

    double by_hand = 0.0;
    for (const ExperimentRecord& rec : triples) {
      Vec w = est.estimated.gates[rec.i].m * plan.rho0;
      w = est.estimated.gates[rec.j].m * w;
      w = est.estimated.gates[rec.k].m * w;
      const double miss = rec.value - dot(plan.m0, w);
      by_hand += miss * miss;
    }
    CHECK(est.lsq_exact == doctest::Approx(by_hand).epsilon(1e-12));

    // Same data, same ideal-gates denominator, so the misfit ratios compare
    // directly: the joint estimate explains the records far better.
    const double sc_lsq = exact_lsq(gauged.estimated, triples, plan.rho0, plan.m0);
    const double qpt_lsq = exact_lsq(qpt_lib, triples, plan.rho0, plan.m0);
    CHECK(sc_lsq <= qpt_lsq);
  }

  SUBCASE("solution objective never exceeds the identity start") {
    CHECK(est.lsq_linear <= sq_misfit(sys, identity_start(plan.library.size())) + 1e-18);
  }
}

TEST_CASE("objective gradient matches central finite differences") {
  ExperimentPlan plan;
  plan.library = standard_library("cardinal-six");
  plan.errors = {{ErrorKind::random_unitary, 1e-2, ErrorPlacement::post, 9}};
  plan.noise_power = 0.0;
  auto triples = simulate_triples(plan);
  LinearizedSystem sys = build_linearized_system(triples, plan.library, plan.rho0, plan.m0);

  Rng rng(321);
  Vec x = identity_start(plan.library.size());
  for (double& v : x) v += 0.05 * rng.normal();
  for (int g = 0; g < plan.library.size(); ++g) {
    Ptm block(2, Mat(4, 4));
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) block.m(r, c) = x[size_t(g) * 16 + size_t(r) * 4 + c];
    }
    Ptm phys = project_cptp(block).r_phys;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) x[size_t(g) * 16 + size_t(r) * 4 + c] = phys.m(r, c);
    }
  }

  Vec resid = sys.a * x;
  for (size_t t = 0; t < resid.size(); ++t) resid[t] -= sys.b[t];
  Vec grad = sys.a.transposed() * resid;
  for (double& v : grad) v *= 2.0;

  const double h = 1e-6;
  for (int probe = 0; probe < 12; ++probe) {
    const size_t c = rng.uniform_int(x.size());
    Vec xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const double fd = (sq_misfit(sys, xp) - sq_misfit(sys, xm)) / (2.0 * h);
    CHECK(grad[c] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("gauge scan recovers a planted frame and rejects skew SPAM") {
  GateLibrary ideal = standard_library("cardinal-six");
  const Vec s0{0.5, 0.0, 0.0, 0.5};
  const Vec m0{1.0, 0.0, 0.0, 1.0};

  GateSetEstimate base;
  base.ideal = ideal;
  base.estimated = ideal;
  base.error_maps.assign(ideal.size(), Ptm::identity(2));

  SUBCASE("already aligned estimate stays aligned") {
    GateSetEstimate out = gauge_optimize(base, ideal, Metric::fidelity_error, s0, m0);
    CHECK(library_distance(out.estimated, ideal, Metric::fidelity_error) < 1e-12);
    for (const Ptm& e : out.error_maps) {
      CHECK((e.m - Mat::identity(4)).max_abs() < 1e-9);
    }
  }

  SUBCASE("planted frame is recovered to the scan resolution") {
    const double phi0 = 2.0;
    GateSetEstimate skew = base;
    skew.estimated = conjugated(ideal, phi0);
    for (int g = 0; g < ideal.size(); ++g) {
      skew.error_maps[g] =
          compose(skew.estimated.gates[g], Ptm(2, ideal.gates[g].m.transposed()));
    }
    const double before = library_distance(skew.estimated, ideal, Metric::fidelity_error);
    CHECK(before > 1e-3);

    GateSetEstimate out = gauge_optimize(skew, ideal, Metric::fidelity_error, s0, m0);
    CHECK(library_distance(out.estimated, ideal, Metric::fidelity_error) < 1e-10);
    const double two_pi = 2.0 * std::acos(-1.0);
    CHECK(std::abs(out.gauge_phi - (two_pi - phi0)) < 1e-6);
    for (const Ptm& e : out.error_maps) CHECK(is_cptp(e, 1e-8));
  }

  SUBCASE("off-diagonal SPAM is refused") {
    CHECK_THROWS_AS(
        gauge_optimize(base, ideal, Metric::fidelity_error, {0.5, 0.3, 0.0, 0.5}, m0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        gauge_optimize(base, ideal, Metric::fidelity_error, s0, {1.0, 0.0, 0.2, 1.0}),
        std::invalid_argument);
  }
}

TEST_CASE("estimate report carries the agreed keys") {
  ExperimentPlan plan;
  plan.library = standard_library("tetrahedral");
  plan.errors = {{ErrorKind::depolarizing, 0.02, ErrorPlacement::post, 3}};
  plan.noise_power = 0.0;
  auto triples = simulate_triples(plan);
  LinearizedSystem sys = build_linearized_system(triples, plan.library, plan.rho0, plan.m0);
  GateSetEstimate est = solve_constrained(sys);

  nlohmann::json j = json_from_gateset_estimate(est, plan.library);
  REQUIRE(j.contains("per_gate"));
  REQUIRE(j["per_gate"].is_array());
  REQUIRE(j["per_gate"].size() == size_t(plan.library.size()));
  for (const auto& entry : j["per_gate"]) {
    CHECK(entry.contains("label"));
    CHECK(entry.contains("R_error"));
    CHECK(entry.contains("R_estimated"));
    CHECK(entry.contains("fidelity_error"));
    CHECK(entry.contains("diamond_distance"));
    CHECK(entry["fidelity_error"].get<double>() >= 0.0);
    CHECK(entry["diamond_distance"].get<double>() >= 0.0);
  }
  CHECK(j["per_gate"][0]["label"] == plan.library.labels[0]);
  CHECK(j.contains("gauge_phi"));
  CHECK(j.contains("lsq_linear"));
  CHECK(j.contains("lsq_exact"));
  CHECK(j.contains("iterations"));
  CHECK(j["lsq_linear"].get<double>() >= 0.0);
}

TEST_CASE("joint estimation improves on tomography across error strengths") {
  const int draws = 50;
  std::vector<double> ratios;
  for (double strength : {1e-2, 1e-3, 1e-4}) {
    std::vector<double> sc, qp;
    for (int trial = 0; trial < draws; ++trial) {
      ExperimentPlan plan;
      plan.library = standard_library("cardinal-six");
      plan.errors = {{ErrorKind::random_unitary, strength, ErrorPlacement::post,
                      uint64_t(1000 * strength * 1e6) + uint64_t(trial)}};
      plan.noise_power = 0.0;
      plan.seed = 99 + uint64_t(trial);
      auto triples = simulate_triples(plan);
      GateLibrary truth = faulty_library(plan);

      LinearizedSystem sys =
          build_linearized_system(triples, plan.library, plan.rho0, plan.m0);
      GateSetEstimate est = solve_constrained(sys);
      for (const Ptm& e : est.error_maps) CHECK(is_cptp(e, 1e-9));
      GateSetEstimate gauged =
          gauge_optimize(est, truth, Metric::fidelity_error, plan.rho0, plan.m0);
      sc.push_back(library_distance(gauged.estimated, truth, Metric::fidelity_error));

      GateLibrary qpt_lib = qpt_per_gate(triples, plan);
      qp.push_back(library_distance(qpt_lib, truth, Metric::fidelity_error));
    }
    std::sort(sc.begin(), sc.end());
    std::sort(qp.begin(), qp.end());
    const double med_sc = sc[draws / 2];
    const double med_qp = qp[draws / 2];
    CHECK(med_sc < med_qp);
    ratios.push_back(med_sc / med_qp);
  }
  REQUIRE(ratios.size() == 3);
  CHECK(ratios[1] < ratios[0]);
  CHECK(ratios[2] < ratios[1]);
}
