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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsf/channels.hpp"

namespace gsf {

inline constexpr const char* kGatesetForgeVersion = "0.1.0";

// A campaign is a cross product of libraries, error models, strengths and
// stochastic noise powers, repeated over independent trials. The `figure`
// field names a preset that fills any axis left empty and fixes the pipeline:
//
//   fig1a  identity-channel tomography, tetrahedral frame, depolarizing SPAM
//          at three raw parameters, noise-power sweep, bare estimate, diamond
//          distance to the identity.
//   fig1b  same sweep at one depolarizing parameter across all four frames.
//   fig2   identity-channel tomography, tetrahedral frame, all seven error
//          models, no stochastic noise, physical estimate, average gate
//          fidelity error.
//   fig3   identity-channel tomography, four frames, the two unitary SPAM
//          models, both metrics.
//   fig4   full gate-set estimation versus per-gate tomography on the
//          cardinal-six frame under per-gate random unitary errors.
//   fig5   same data as fig4 scored by the exact least-squares misfit of the
//          estimate relative to the misfit of the assumed ideal gates.
//   custom every axis supplied by the caller, gate-set pipeline.
//
// A strength is always the raw model parameter (depolarizing probability,
// rotation angle, relative detuning, ...). The error the faulty library
// actually carries is measured after the fact and emitted per row, so plots
// can use either axis. fig2 and fig3 may leave `strengths` empty: each
// (library, model) pair then gets its own log-spaced parameter grid whose
// realized mean gate errors span 1e-5 through 1e-1.
struct CampaignSpec {
  std::string figure = "custom";
  std::vector<std::string> libraries;
  std::vector<std::string> models;
  std::vector<double> strengths;
  std::vector<double> noise_powers;
  int trials = 50;
  std::uint64_t base_seed = 0;
  std::vector<std::string> estimators;  // "qpt", "scqpt"
  std::vector<std::string> metrics;     // "fidelity-error", "diamond", "exact-lsq-ratio"
};

// One scored quantity of one trial. `strength` is the raw model parameter of
// the point and `realized_error` is the error of the faulty library measured
// after the fact, in the same metric as the row where that makes sense. Rows
// of trials that failed to converge are kept and flagged, never dropped.
struct CampaignRow {
  std::string figure;
  std::string library;
  std::string model;
  double strength = 0.0;
  double noise_power = 0.0;
  int trial = 0;
  std::string estimator;
  std::string metric;
  double realized_error = 0.0;
  double value = 0.0;
  bool converged = true;
};

struct CampaignResult {
  CampaignSpec spec;
  std::vector<CampaignRow> rows;
  std::uint64_t spec_hash = 0;
};

// Fills empty axes from the figure preset and validates the result. Throws
// std::invalid_argument on unknown figures, libraries, models, estimators or
// metrics, non-positive trials, negative noise powers, or strengths outside
// the model's parameter range.
CampaignSpec resolve_template(const CampaignSpec& spec);

// Finds the model parameter whose error factors have mean gate fidelity
// error `target` against the given library, by bisection. Used to anchor the
// default strength grids; the map is monotone for every supported model, and
// over-rotation scales each gate's own angle so its reachable range depends
// on the library.
double calibrate_strength(const GateLibrary& ideal, ErrorKind kind, double target);

// Runs every (point, trial) task and gathers rows in deterministic point,
// trial, estimator, metric order. `jobs` threads share the task list; the
// output is byte-for-byte independent of the thread count because every task
// derives its randomness from combine_keys of the base seed and its indices.
CampaignResult run_campaign(const CampaignSpec& spec, int jobs = 1);

// Collapses the trial axis per (library, model, strength, noise, estimator,
// metric) group. stat is "mean", "median" or "quantiles"; the last emits
// three rows per group with ":q25", ":q50", ":q75" appended to the metric.
// Summary rows carry trial = -1.
std::vector<CampaignRow> summarize(const CampaignResult& result, const std::string& stat);

// FNV-1a over the canonical JSON dump of the spec; stamped into the CSV
// header so re-runs can be matched to their configuration.
std::uint64_t campaign_spec_hash(const CampaignSpec& spec);

nlohmann::json json_from_campaign_spec(const CampaignSpec& spec);
CampaignSpec campaign_spec_from_json(const nlohmann::json& j);

// Long-format CSV with '#' provenance comments (tool version, spec hash,
// base seed) ahead of the header row. Doubles are shortest round-trip
// formatted so identical results are identical bytes.
std::string campaign_csv(const CampaignResult& result);
std::string campaign_csv(const std::vector<CampaignRow>& rows);

// Companion metadata document: spec echo, hash, version, row count.
nlohmann::json campaign_meta(const CampaignResult& result);

}  // namespace gsf
