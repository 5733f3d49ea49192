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

#include "gsf/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "gsf/channels.hpp"
#include "gsf/metrics.hpp"
#include "gsf/serialize.hpp"

using namespace gsf;

namespace {

double realized_mean_error(const std::string& lib_name, ErrorKind kind, double strength,
                           std::uint64_t seed = 0) {
  GateLibrary ideal = standard_library(lib_name);
  ErrorModel e;
  e.kind = kind;
  e.strength = strength;
  e.seed = seed;
  return library_distance(apply_error_model(ideal, e), ideal,
                          metric_from_name("fidelity-error"));
}

}  // namespace

TEST_CASE("calibrate_strength hits the requested mean gate error") {
  GateLibrary tetra = standard_library("tetrahedral");
  for (double target : {1e-2, 1e-3, 1e-5}) {
    double p = calibrate_strength(tetra, ErrorKind::depolarizing, target);
    CHECK(realized_mean_error("tetrahedral", ErrorKind::depolarizing, p) ==
          doctest::Approx(target).epsilon(1e-9));
  }
  double p = calibrate_strength(tetra, ErrorKind::amplitude_damping, 1e-3);
  CHECK(realized_mean_error("tetrahedral", ErrorKind::amplitude_damping, p) ==
        doctest::Approx(1e-3).epsilon(1e-9));

  // A rotation by angle a has mean gate error (1 - cos a) / 3 about any axis,
  // so the calibrated angle is known in closed form.
  double angle = calibrate_strength(tetra, ErrorKind::random_unitary, 1e-3);
  CHECK(angle == doctest::Approx(std::acos(1.0 - 3e-3)).epsilon(1e-9));
  // The axis draw does not move the realized error, only the angle does.
  CHECK(realized_mean_error("tetrahedral", ErrorKind::random_unitary, angle, 17) ==
        doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("calibrate_strength rejects unreachable or degenerate targets") {
  GateLibrary tetra = standard_library("tetrahedral");
  // Dephasing tops out at strength 1 with mean error 1/3.
  CHECK_THROWS_AS(calibrate_strength(tetra, ErrorKind::dephasing, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_strength(tetra, ErrorKind::depolarizing, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_strength(tetra, ErrorKind::depolarizing, -1e-3),
                  std::invalid_argument);
}

TEST_CASE("resolve_template fills only empty axes") {
  CampaignSpec spec;
  spec.figure = "fig2";
  CampaignSpec r = resolve_template(spec);
  CHECK(r.libraries == std::vector<std::string>{"tetrahedral"});
  CHECK(r.models.size() == 7);
  CHECK(r.strengths.empty());  // per-model grid is resolved at run time
  CHECK(r.noise_powers == std::vector<double>{0.0});
  CHECK(r.estimators == std::vector<std::string>{"qpt"});
  CHECK(r.metrics == std::vector<std::string>{"fidelity-error"});
  CHECK(r.trials == 50);

  spec.libraries = {"cardinal-six"};
  spec.strengths = {1e-2, 1e-4};
  r = resolve_template(spec);
  CHECK(r.libraries == std::vector<std::string>{"cardinal-six"});
  CHECK(r.strengths == std::vector<double>{1e-2, 1e-4});

  CampaignSpec f4;
  f4.figure = "fig4";
  r = resolve_template(f4);
  CHECK(r.libraries == std::vector<std::string>{"cardinal-six"});
  CHECK(r.models == std::vector<std::string>{"random-unitary"});
  CHECK(r.strengths == std::vector<double>{1e-2, 1e-3, 1e-4});
  CHECK(r.estimators == std::vector<std::string>{"qpt", "scqpt"});
  CHECK(r.metrics == std::vector<std::string>{"fidelity-error", "diamond"});

  CampaignSpec f5;
  f5.figure = "fig5";
  r = resolve_template(f5);
  CHECK(r.metrics == std::vector<std::string>{"exact-lsq-ratio"});
}

TEST_CASE("resolve_template validates the spec") {
  auto with = [](auto&& mod) {
    CampaignSpec s;
    s.figure = "custom";
    s.libraries = {"tetrahedral"};
    s.models = {"depolarizing"};
    s.strengths = {1e-3};
    mod(s);
    return s;
  };
  CHECK_THROWS_AS(resolve_template(with([](CampaignSpec& s) { s.figure = "fig7"; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      resolve_template(with([](CampaignSpec& s) { s.libraries = {"octahedral"}; })),
      std::invalid_argument);
  CHECK_THROWS_AS(resolve_template(with([](CampaignSpec& s) { s.models = {"t1"}; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_template(with([](CampaignSpec& s) { s.trials = 0; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_template(with([](CampaignSpec& s) { s.strengths = {}; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_template(with([](CampaignSpec& s) { s.strengths = {-1e-3}; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_template(with([](CampaignSpec& s) { s.strengths = {1.5}; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_template(with([](CampaignSpec& s) {
                    s.models = {"random-unitary"};
                    s.strengths = {3.5};  // above pi
                  })),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      resolve_template(with([](CampaignSpec& s) { s.noise_powers = {-1e-6}; })),
      std::invalid_argument);
  CHECK_THROWS_AS(
      resolve_template(with([](CampaignSpec& s) { s.estimators = {"mle"}; })),
      std::invalid_argument);
  CHECK_THROWS_AS(resolve_template(with([](CampaignSpec& s) { s.metrics = {"trace"}; })),
                  std::invalid_argument);
  // exact-lsq-ratio is a gate-set statistic, identity figures reject it.
  {
    CampaignSpec s;
    s.figure = "fig2";
    s.strengths = {1e-3};
    s.metrics = {"exact-lsq-ratio"};
    CHECK_THROWS_AS(resolve_template(s), std::invalid_argument);
  }
  // Identity figures run the single-channel pipeline only.
  {
    CampaignSpec s;
    s.figure = "fig1a";
    s.estimators = {"scqpt"};
    CHECK_THROWS_AS(resolve_template(s), std::invalid_argument);
  }
  // The bare-inversion figures need an invertible depolarizing factor.
  {
    CampaignSpec s;
    s.figure = "fig1a";
    s.strengths = {1.0};
    CHECK_THROWS_AS(resolve_template(s), std::invalid_argument);
  }
}

TEST_CASE("exact-lsq-ratio on the custom figure is rejected only for identity figures") {
  CampaignSpec s;
  s.figure = "custom";
  s.libraries = {"cardinal-six"};
  s.models = {"depolarizing"};
  s.strengths = {1e-3};
  s.metrics = {"exact-lsq-ratio"};
  CHECK_NOTHROW(resolve_template(s));
}

TEST_CASE("row order is point-major then trial, estimator, metric") {
  CampaignSpec spec;
  spec.figure = "fig2";  // identity pipeline keeps this test cheap
  spec.libraries = {"tetrahedral"};
  spec.models = {"depolarizing", "detuning"};
  spec.strengths = {1e-3};
  spec.noise_powers = {1e-6};
  spec.trials = 3;

  auto result = run_campaign(spec, 1);
  REQUIRE(result.rows.size() == 2 * 3);  // points x trials x 1 estimator x 1 metric
  int idx = 0;
  for (const auto& model : {"depolarizing", "detuning"})
    for (int trial = 0; trial < 3; ++trial) {
      CHECK(result.rows[idx].model == model);
      CHECK(result.rows[idx].trial == trial);
      CHECK(result.rows[idx].estimator == "qpt");
      ++idx;
    }
}

TEST_CASE("campaign output is byte-identical across worker counts") {
  CampaignSpec ident;
  ident.figure = "fig2";
  ident.libraries = {"tetrahedral"};
  ident.models = {"depolarizing", "random-unitary"};
  ident.strengths = {1e-3};
  ident.noise_powers = {1e-6};
  ident.trials = 4;
  ident.base_seed = 99;

  std::string csv1 = campaign_csv(run_campaign(ident, 1));
  std::string csv4 = campaign_csv(run_campaign(ident, 4));
  std::string csv8 = campaign_csv(run_campaign(ident, 8));
  CHECK(csv1 == csv4);
  CHECK(csv1 == csv8);

  CampaignSpec gate;
  gate.figure = "custom";
  gate.libraries = {"cardinal-six"};
  gate.models = {"random-unitary"};
  gate.strengths = {1e-2};
  gate.noise_powers = {1e-5};
  gate.trials = 3;
  gate.base_seed = 7;
  gate.metrics = {"fidelity-error"};

  std::string g1 = campaign_csv(run_campaign(gate, 1));
  std::string g3 = campaign_csv(run_campaign(gate, 3));
  CHECK(g1 == g3);
}

TEST_CASE("fig1a noise sweep shows square-root scaling then a floor") {
  CampaignSpec spec;
  spec.figure = "fig1a";
  spec.strengths = {1e-3};
  spec.noise_powers = {1e-8, std::pow(10.0, -7.5), 1e-5, 1e-3};
  spec.trials = 6;
  spec.base_seed = 5;

  auto med = summarize(run_campaign(spec, 2), "median");
  std::map<double, double> curve;
  for (const auto& r : med) curve[r.noise_power] = r.value;
  REQUIRE(curve.size() == 4);

  // Shot-noise regime: value tracks the square root of the noise power, so
  // two decades of noise move the error by about one decade.
  double shot_ratio = curve[1e-3] / curve[1e-5];
  CHECK(shot_ratio > 3.0);
  CHECK(shot_ratio < 30.0);
  // Floor regime: half a decade of noise moves the error barely at all.
  double floor_ratio = curve[std::pow(10.0, -7.5)] / curve[1e-8];
  CHECK(floor_ratio < 1.5);
  // The whole curve is monotone in the noise power.
  CHECK(curve[1e-8] <= curve[std::pow(10.0, -7.5)]);
  CHECK(curve[std::pow(10.0, -7.5)] <= curve[1e-5]);
  CHECK(curve[1e-5] <= curve[1e-3]);
  // And the floor sits near the systematic SPAM level, far above zero.
  CHECK(curve[1e-8] > 1e-4);
}

TEST_CASE("identity reconstruction error splits coherent from incoherent models") {
  CampaignSpec spec;
  spec.figure = "fig2";
  spec.libraries = {"cardinal-six"};
  spec.models = {"depolarizing", "detuning", "over-rotation"};
  spec.strengths = {1e-2, 1e-4};
  spec.trials = 1;
  spec.base_seed = 1;

  auto med = summarize(run_campaign(spec, 1), "median");
  std::map<std::string, std::map<double, double>> ratio;
  for (const auto& r : med) ratio[r.model][r.strength] = r.value / r.realized_error;

  double dep_growth = ratio["depolarizing"][1e-4] / ratio["depolarizing"][1e-2];
  CHECK(dep_growth > 0.75);
  CHECK(dep_growth < 1.5);
  CHECK(ratio["detuning"][1e-4] / ratio["detuning"][1e-2] > 10.0);
  CHECK(ratio["over-rotation"][1e-4] / ratio["over-rotation"][1e-2] > 10.0);
}

TEST_CASE("gate-set estimation beats per-gate tomography on its own data") {
  CampaignSpec spec;
  spec.figure = "fig4";
  spec.strengths = {1e-2};
  spec.trials = 2;
  spec.base_seed = 11;
  spec.metrics = {"fidelity-error", "exact-lsq-ratio"};

  auto result = run_campaign(spec, 1);
  auto med = summarize(result, "median");
  std::map<std::string, std::map<std::string, double>> by_est;
  for (const auto& r : med) by_est[r.metric][r.estimator] = r.value;

  CHECK(by_est["fidelity-error"]["scqpt"] < by_est["fidelity-error"]["qpt"]);
  CHECK(by_est["exact-lsq-ratio"]["scqpt"] <= by_est["exact-lsq-ratio"]["qpt"]);
  for (const auto& r : result.rows) CHECK(r.converged);

  // The joint estimate explains the very data both estimators saw at least
  // as well as the generating gates do, so its misfit ratio stays near one
  // or below; per-gate tomography carries the SPAM errors into its estimate.
  CHECK(by_est["exact-lsq-ratio"]["scqpt"] < 1.1);
}

TEST_CASE("empty fig2 strengths expand into per-model realized-error grids") {
  CampaignSpec spec;
  spec.figure = "fig2";
  spec.models = {"over-rotation"};
  spec.trials = 1;
  auto result = run_campaign(spec, 1);
  REQUIRE(result.rows.size() == 9);
  std::vector<double> strengths;
  std::vector<double> realized;
  for (const auto& r : result.rows) {
    strengths.push_back(r.strength);
    realized.push_back(r.realized_error);
  }
  CHECK(std::is_sorted(strengths.begin(), strengths.end()));
  CHECK(std::is_sorted(realized.begin(), realized.end()));
  // The grid anchors the realized mean gate error at 1e-5 and 1e-1.
  CHECK(realized.front() == doctest::Approx(1e-5).epsilon(1e-6));
  CHECK(realized.back() == doctest::Approx(1e-1).epsilon(1e-6));
  // Resolved spec still reports the axis as empty: the grid is per model.
  CHECK(result.spec.strengths.empty());
}

TEST_CASE("summarize computes grouped quantiles and keeps group order") {
  CampaignResult result;
  result.spec.figure = "custom";
  auto make = [](double value, int trial, const std::string& model, bool ok) {
    CampaignRow r;
    r.figure = "custom";
    r.library = "cardinal-six";
    r.model = model;
    r.strength = 1e-3;
    r.noise_power = 0.0;
    r.trial = trial;
    r.estimator = "qpt";
    r.metric = "fidelity-error";
    r.value = value;
    r.realized_error = 2.0 * value;
    r.converged = ok;
    return r;
  };
  // Deliberately interleave two groups; "b" appears first.
  for (int t = 0; t < 5; ++t) {
    double v[] = {5, 1, 3, 2, 4};
    result.rows.push_back(make(v[t], t, "b", true));
    result.rows.push_back(make(7.0, t, "a", t != 2));
  }

  auto med = summarize(result, "median");
  REQUIRE(med.size() == 2);
  CHECK(med[0].model == "b");
  CHECK(med[0].value == doctest::Approx(3.0));
  CHECK(med[0].realized_error == doctest::Approx(6.0));
  CHECK(med[0].trial == -1);
  CHECK(med[0].metric == "fidelity-error");
  CHECK(med[0].converged);
  CHECK(med[1].model == "a");
  CHECK(med[1].value == doctest::Approx(7.0));  // constant column stays put
  CHECK_FALSE(med[1].converged);                // one failed trial taints the group

  auto mean = summarize(result, "mean");
  CHECK(mean[0].value == doctest::Approx(3.0));

  auto quart = summarize(result, "quantiles");
  REQUIRE(quart.size() == 6);
  CHECK(quart[0].metric == "fidelity-error:q25");
  CHECK(quart[0].value == doctest::Approx(2.0));
  CHECK(quart[1].metric == "fidelity-error:q50");
  CHECK(quart[1].value == doctest::Approx(3.0));
  CHECK(quart[2].metric == "fidelity-error:q75");
  CHECK(quart[2].value == doctest::Approx(4.0));

  CHECK_THROWS_AS(summarize(result, "mode"), std::invalid_argument);
}

TEST_CASE("campaign csv carries provenance comments and one line per row") {
  CampaignSpec spec;
  spec.figure = "fig2";
  spec.libraries = {"tetrahedral"};
  spec.models = {"dephasing"};
  spec.strengths = {1e-3};
  spec.trials = 2;
  spec.base_seed = 21;
  auto result = run_campaign(spec, 1);
  std::string csv = campaign_csv(result);

  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t nl = csv.find('\n', pos);
    REQUIRE(nl != std::string::npos);  // every line is terminated
    lines.push_back(csv.substr(pos, nl - pos));
    pos = nl + 1;
  }
  REQUIRE(lines.size() == 6 + 1 + result.rows.size());
  CHECK(lines[0] == "# gateset-forge campaign");
  CHECK(lines[1] == std::string("# version: ") + kGatesetForgeVersion);
  CHECK(lines[2] == "# figure: fig2");
  CHECK(lines[3].rfind("# spec_hash: ", 0) == 0);
  CHECK(lines[3].size() == std::string("# spec_hash: ").size() + 16);
  CHECK(lines[4] == "# base_seed: 21");
  CHECK(lines[5] == "# rows: 2");
  CHECK(lines[6] ==
        "figure,library,model,strength,noise_power,trial,estimator,metric,"
        "realized_error,value,converged");
  for (std::size_t i = 7; i < lines.size(); ++i)
    CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 10);
  CHECK(lines[7].rfind("fig2,tetrahedral,dephasing,0.001,0,0,qpt,fidelity-error,", 0) ==
        0);

  auto meta = campaign_meta(result);
  CHECK(meta["tool"] == "gateset-forge");
  CHECK(meta["version"] == kGatesetForgeVersion);
  CHECK(meta["rows"] == result.rows.size());
  CHECK(meta["spec"]["base_seed"] == 21);
  CHECK(meta["columns"].size() == 11);
}

TEST_CASE("campaign spec json round-trips and hashes on content") {
  CampaignSpec spec;
  spec.figure = "fig4";
  spec.libraries = {"cardinal-six"};
  spec.models = {"random-unitary"};
  spec.strengths = {1e-2, 1e-3};
  spec.noise_powers = {0.0};
  spec.trials = 5;
  spec.base_seed = 123;
  spec.estimators = {"qpt", "scqpt"};
  spec.metrics = {"fidelity-error"};

  CampaignSpec back = campaign_spec_from_json(json_from_campaign_spec(spec));
  CHECK(json_from_campaign_spec(back).dump() == json_from_campaign_spec(spec).dump());
  CHECK(campaign_spec_hash(back) == campaign_spec_hash(spec));

  CampaignSpec other = spec;
  other.base_seed = 124;
  CHECK(campaign_spec_hash(other) != campaign_spec_hash(spec));

  // Partial documents fill from defaults.
  CampaignSpec partial = campaign_spec_from_json(nlohmann::json{{"figure", "fig1a"}});
  CHECK(partial.figure == "fig1a");
  CHECK(partial.trials == 50);
  CHECK(partial.libraries.empty());
}
