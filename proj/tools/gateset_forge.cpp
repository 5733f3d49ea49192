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

// Command-line surface of the toolkit. One static binary, six subcommands:
//
//   simulate     draw a synthetic gate-set data set under systematic errors
//   campaign     sweep libraries x error models x strengths x noise powers
//   reconstruct  estimate gates from a record file, per gate or jointly
//   metrics      score two serialized maps or libraries against each other
//   validate     physicality battery for a serialized or named library
//   ingest       parse and sanity-check a record file
//
// Every subcommand accepts --config FILE with JSON keys mirroring its long
// flags; explicit flags win over config values. Exit codes: 0 success, 2
// validation failure (bad flags, bad files, unphysical input), 3 solver
// non-convergence.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsf/campaign.hpp"
#include "gsf/channels.hpp"
#include "gsf/linalg.hpp"
#include "gsf/metrics.hpp"
#include "gsf/qpt.hpp"
#include "gsf/rng.hpp"
#include "gsf/scqpt.hpp"
#include "gsf/serialize.hpp"
#include "gsf/sim.hpp"
#include "gsf/superop.hpp"

using namespace gsf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;

// Everything a handler needs beyond its own axis flags.
struct CliConfig {
  std::string subcommand;
  std::string config_path;
  std::string records_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  double noise_power = 1.7e-4;
  std::string library;
  std::string estimator;  // "qpt", "scqpt" or empty for both
  int jobs = 1;
  int verbosity = 0;
};

// GATESET_FORGE_SEED fills in when neither flag nor config names a seed.
bool seed_from_env(std::uint64_t& out) {
  const char* text = std::getenv("GATESET_FORGE_SEED");
  if (text == nullptr || *text == '\0') return false;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (errno != 0 || end == text || *end != '\0') {
    throw std::invalid_argument("GATESET_FORGE_SEED must be an unsigned integer, got '" +
                                std::string(text) + "'");
  }
  out = v;
  return true;
}

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  nlohmann::json j = read_json_file(path);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object: " + path);
  return j;
}

// Flags win; config fills the rest.
template <typename T>
void merge_option(const CLI::App* cmd, const std::string& flag, const nlohmann::json& cfg,
                  const std::string& key, T& value) {
  if (cmd->count(flag) == 0 && cfg.contains(key)) cfg.at(key).get_to(value);
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::invalid_argument("cannot create output directory '" + dir + "': " + ec.message());
}

bool looks_like_path(const std::string& s) {
  return s.find('/') != std::string::npos ||
         (s.size() > 5 && s.substr(s.size() - 5) == ".json");
}

// A library argument is either a JSON file or a standard-library name.
GateLibrary load_library_arg(const std::string& arg) {
  if (std::filesystem::exists(arg)) return library_from_json(read_json_file(arg));
  if (looks_like_path(arg)) throw std::invalid_argument("no such file: " + arg);
  return standard_library(arg);
}

// "kind:strength" with an optional ":pre" / ":post" placement suffix.
ErrorModel parse_error_spec(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) {
    throw std::invalid_argument("--error wants kind:strength[:pre|post], got '" + text + "'");
  }
  ErrorModel model;
  model.kind = error_kind_from_name(text.substr(0, first));
  const auto second = text.find(':', first + 1);
  const std::string number =
      text.substr(first + 1, second == std::string::npos ? std::string::npos : second - first - 1);
  std::size_t used = 0;
  try {
    model.strength = std::stod(number, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != number.size() || number.empty()) {
    throw std::invalid_argument("--error strength is not a number: '" + number + "'");
  }
  if (second != std::string::npos) {
    model.placement = error_placement_from_name(text.substr(second + 1));
  }
  return model;
}

nlohmann::json json_from_plan(const ExperimentPlan& plan) {
  nlohmann::json errors = nlohmann::json::array();
  for (const ErrorModel& e : plan.errors) {
    errors.push_back({{"kind", error_kind_name(e.kind)},
                      {"strength", e.strength},
                      {"placement", error_placement_name(e.placement)},
                      {"seed", e.seed}});
  }
  return {{"library", {{"dim", plan.library.dim}, {"labels", plan.library.labels}}},
          {"errors", std::move(errors)},
          {"rho0", plan.rho0},
          {"m0", plan.m0},
          {"noise_power", plan.noise_power},
          {"seed", plan.seed}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

int cmd_simulate(const CLI::App* cmd, CliConfig cli, std::vector<std::string> error_specs) {
  const nlohmann::json cfg = load_config(cli.config_path);
  merge_option(cmd, "--library", cfg, "library", cli.library);
  merge_option(cmd, "--error", cfg, "errors", error_specs);
  merge_option(cmd, "--noise", cfg, "noise_power", cli.noise_power);
  merge_option(cmd, "--out", cfg, "out", cli.out_dir);
  merge_option(cmd, "--seed", cfg, "seed", cli.seed);
  if (cmd->count("--seed") == 0 && !cfg.contains("seed")) seed_from_env(cli.seed);

  if (cli.library.empty()) {
    throw std::invalid_argument("simulate needs a library (--library NAME|FILE or config)");
  }
  if (cli.noise_power < 0.0) throw std::invalid_argument("noise power must be nonnegative");

  ExperimentPlan plan;
  plan.library = load_library_arg(cli.library);
  plan.noise_power = cli.noise_power;
  plan.seed = cli.seed;
  for (std::size_t i = 0; i < error_specs.size(); ++i) {
    ErrorModel model = parse_error_spec(error_specs[i]);
    // Random-axis models need their own stream; key it to the plan seed and
    // the model's position so reruns and reorderings stay reproducible.
    model.seed = combine_keys({plan.seed, 0x6572726f72ull, std::uint64_t(i)});
    plan.errors.push_back(model);
  }

  const auto records = simulate_triples(plan);
  ensure_out_dir(cli.out_dir);
  const std::string path = cli.out_dir + "/records.csv";
  write_records(path, records, plan.library);

  nlohmann::json echo = json_from_plan(plan);
  echo["records"] = records.size();
  echo["output"] = path;
  std::cout << echo.dump(2) << "\n";
  return kExitOk;
}

int cmd_campaign(const CLI::App* cmd, CliConfig cli, CampaignSpec flags, std::string summary) {
  const nlohmann::json cfg = load_config(cli.config_path);
  CampaignSpec spec = campaign_spec_from_json(cfg);
  if (cmd->count("--figure") > 0) spec.figure = flags.figure;
  if (cmd->count("--library") > 0) spec.libraries = flags.libraries;
  if (cmd->count("--model") > 0) spec.models = flags.models;
  if (cmd->count("--strength") > 0) spec.strengths = flags.strengths;
  if (cmd->count("--noise") > 0) spec.noise_powers = flags.noise_powers;
  if (cmd->count("--trials") > 0) spec.trials = flags.trials;
  if (cmd->count("--seed") > 0) {
    spec.base_seed = flags.base_seed;
  } else if (!cfg.contains("base_seed")) {
    seed_from_env(spec.base_seed);
  }
  if (cmd->count("--estimator") > 0) spec.estimators = flags.estimators;
  if (cmd->count("--metric") > 0) spec.metrics = flags.metrics;
  merge_option(cmd, "--jobs", cfg, "jobs", cli.jobs);
  merge_option(cmd, "--out", cfg, "out", cli.out_dir);
  merge_option(cmd, "--summary", cfg, "summary", summary);
  if (cli.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");

  const CampaignResult result = run_campaign(spec, cli.jobs);

  ensure_out_dir(cli.out_dir);
  const std::string csv_path = cli.out_dir + "/campaign.csv";
  write_text_file(csv_path, campaign_csv(result));
  write_json_file(cli.out_dir + "/campaign.meta.json", campaign_meta(result));
  if (!summary.empty()) {
    write_text_file(cli.out_dir + "/campaign.summary.csv", campaign_csv(summarize(result, summary)));
  }

  std::size_t stuck = 0;
  for (const CampaignRow& row : result.rows) stuck += row.converged ? 0 : 1;
  std::cout << "campaign " << result.spec.figure << ": " << result.rows.size() << " rows -> "
            << csv_path << "\n";
  if (stuck > 0) {
    std::cerr << "warning: " << stuck << " rows did not converge\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

// Per-gate tomography of gate g reads the triples with g in the middle slot
// as preparation/measurement pairs around it.
std::vector<ExperimentRecord> pairs_around(const std::vector<ExperimentRecord>& triples, int g) {
  std::vector<ExperimentRecord> pairs;
  for (const ExperimentRecord& rec : triples) {
    if (rec.j == g) pairs.push_back({rec.i, rec.k, -1, rec.value, rec.noise_power});
  }
  return pairs;
}

std::string estimate_table(const std::vector<std::string>& labels, const MetricReport* qpt,
                           const MetricReport* sc) {
  std::ostringstream out;
  if (qpt != nullptr && sc != nullptr) {
    out << "gate_label, qpt_fidelity_error, sc_fidelity_error, qpt_diamond_distance, "
           "sc_diamond_distance\n";
    for (std::size_t g = 0; g < labels.size(); ++g) {
      out << labels[g] << ", " << csv_double(qpt->per_gate[g].fidelity_error) << ", "
          << csv_double(sc->per_gate[g].fidelity_error) << ", "
          << csv_double(qpt->per_gate[g].diamond_distance) << ", "
          << csv_double(sc->per_gate[g].diamond_distance) << '\n';
    }
    out << "average, " << csv_double(qpt->mean_fidelity_error) << ", "
        << csv_double(sc->mean_fidelity_error) << ", " << csv_double(qpt->mean_diamond_distance)
        << ", " << csv_double(sc->mean_diamond_distance) << '\n';
  } else {
    write_metric_csv(out, qpt != nullptr ? *qpt : *sc);
  }
  return out.str();
}

int cmd_reconstruct(const CLI::App* cmd, CliConfig cli, bool no_gauge) {
  const nlohmann::json cfg = load_config(cli.config_path);
  merge_option(cmd, "--records", cfg, "records", cli.records_path);
  merge_option(cmd, "--out", cfg, "out", cli.out_dir);
  if (cli.estimator.empty() && cfg.contains("estimator")) {
    cfg.at("estimator").get_to(cli.estimator);
    if (cli.estimator == "both") cli.estimator.clear();
  }
  if (cli.records_path.empty()) {
    throw std::invalid_argument("reconstruct needs a record file (--records FILE or config)");
  }

  IngestResult in = ingest_records(cli.records_path);
  for (const std::string& w : in.warnings) std::cerr << "warning: " << w << "\n";
  std::vector<ExperimentRecord> triples;
  for (const ExperimentRecord& rec : in.records) {
    if (rec.is_triple()) triples.push_back(rec);
  }
  if (triples.empty()) {
    throw std::invalid_argument(
        "record file has no triple experiments; reconstruction needs (prep, gate, measure) "
        "records over the sidecar library");
  }

  ExperimentPlan plan;
  plan.library = in.library;

  const bool want_qpt = cli.estimator != "scqpt";
  const bool want_sc = cli.estimator != "qpt";

  nlohmann::json report;
  GateLibrary qpt_lib;
  bool qpt_converged = true;
  if (want_qpt) {
    qpt_lib.dim = plan.library.dim;
    qpt_lib.labels = plan.library.labels;
    nlohmann::json per_gate = nlohmann::json::array();
    for (int g = 0; g < plan.library.size(); ++g) {
      const auto pairs = pairs_around(triples, g);
      if (pairs.empty()) {
        throw std::invalid_argument("no triples have gate '" + plan.library.labels[g] +
                                    "' in the middle slot; cannot run per-gate tomography");
      }
      if (cli.verbosity > 0) {
        std::cerr << "qpt " << plan.library.labels[g] << ": " << pairs.size() << " records\n";
      }
      const ReconstructionReport gate_report = qpt_pipeline(pairs, plan);
      qpt_lib.gates.push_back(gate_report.phys.r_phys);
      qpt_converged = qpt_converged && gate_report.phys.converged;
      nlohmann::json entry = json_from_reconstruction(gate_report);
      entry["label"] = plan.library.labels[g];
      entry["records"] = pairs.size();
      entry["converged"] = gate_report.phys.converged;
      per_gate.push_back(std::move(entry));
    }
    report["qpt"] = {{"per_gate", std::move(per_gate)}, {"converged", qpt_converged}};
  }

  GateSetEstimate sc;
  if (want_sc) {
    const LinearizedSystem sys = build_linearized_system(triples, plan.library, plan.rho0, plan.m0);
    sc = solve_constrained(sys);
    if (!no_gauge) {
      // The frame scan maximizes gate-by-gate fidelity; cheap and monotone
      // with the diamond column for the small errors this tool targets.
      sc = gauge_optimize(sc, plan.library, Metric::fidelity_error, plan.rho0, plan.m0);
    }
    report["scqpt"] = json_from_gateset_estimate(sc, plan.library);
  }

  MetricReport qpt_metrics;
  MetricReport sc_metrics;
  if (want_qpt) qpt_metrics = compare_libraries(qpt_lib, in.library);
  if (want_sc) sc_metrics = compare_libraries(sc.estimated, in.library);
  const std::string table = estimate_table(in.library.labels, want_qpt ? &qpt_metrics : nullptr,
                                           want_sc ? &sc_metrics : nullptr);

  ensure_out_dir(cli.out_dir);
  write_json_file(cli.out_dir + "/report.json", report);
  write_text_file(cli.out_dir + "/table.csv", table);
  std::cout << table;

  const bool stuck = (want_qpt && !qpt_converged) || (want_sc && !sc.converged);
  return stuck ? kExitNoConvergence : kExitOk;
}

// Accepts a standard-library name, a library file, or a single-map file.
nlohmann::json load_map_or_library(const std::string& arg) {
  if (std::filesystem::exists(arg)) return read_json_file(arg);
  if (looks_like_path(arg)) throw std::invalid_argument("no such file: " + arg);
  return json_from_library(standard_library(arg));
}

int cmd_metrics(CliConfig cli, const std::string& first, const std::string& second, bool gauge) {
  const nlohmann::json a = load_map_or_library(first);
  const nlohmann::json b = load_map_or_library(second);
  const bool a_is_library = a.contains("labels");
  const bool b_is_library = b.contains("labels");
  if (a_is_library != b_is_library) {
    throw std::invalid_argument("cannot compare a gate library with a single map");
  }

  if (!a_is_library) {
    const Ptm estimate = ptm_from_json(a);
    const Ptm target = ptm_from_json(b);
    nlohmann::json out;
    out["diamond_distance"] = diamond_distance(estimate, target);
    // The fidelity column is defined against unitary targets only.
    if (is_orthogonal(target, 1e-9)) {
      out["fidelity_error"] = avg_gate_fidelity_error(estimate, target);
    } else {
      out["fidelity_error"] = nullptr;
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  GateLibrary estimate = library_from_json(a);
  const GateLibrary target = library_from_json(b);
  if (estimate.size() != target.size()) {
    throw std::invalid_argument("libraries differ in size: " + std::to_string(estimate.size()) +
                                " vs " + std::to_string(target.size()));
  }
  double gauge_phi = 0.0;
  if (gauge) {
    GateSetEstimate frame;
    frame.ideal = target;
    frame.estimated = estimate;
    frame.error_maps.reserve(target.size());
    for (int g = 0; g < target.size(); ++g) {
      Ptm inverse(target.dim, target.gates[g].m.transposed());
      frame.error_maps.push_back(compose(estimate.gates[g], inverse));
    }
    frame = gauge_optimize(frame, target, Metric::fidelity_error, Vec{0.5, 0.0, 0.0, 0.5},
                           Vec{1.0, 0.0, 0.0, 1.0});
    estimate = frame.estimated;
    gauge_phi = frame.gauge_phi;
  }
  const MetricReport report = compare_libraries(estimate, target);
  if (gauge) std::cout << "# gauge_phi, " << csv_double(gauge_phi) << "\n";
  write_metric_csv(std::cout, report);
  if (!cli.out_dir.empty() && cli.out_dir != ".") {
    ensure_out_dir(cli.out_dir);
    std::ostringstream text;
    write_metric_csv(text, report);
    write_text_file(cli.out_dir + "/metrics.csv", text.str());
  }
  return kExitOk;
}

int cmd_validate(const std::string& arg) {
  const GateLibrary lib = load_library_arg(arg);
  if (lib.size() == 0) throw std::invalid_argument("library has no gates");

  const double tol = 1e-9;
  bool all_ok = true;
  for (int g = 0; g < lib.size(); ++g) {
    const bool tp = is_trace_preserving(lib.gates[g], tol);
    const double min_eig = choi_min_eigenvalue(lib.gates[g]);
    const bool cp = min_eig >= -tol;
    all_ok = all_ok && tp && cp;
    const std::string label =
        g < int(lib.labels.size()) ? lib.labels[g] : "gate-" + std::to_string(g);
    std::cout << label << ": TP " << (tp ? "pass" : "FAIL") << ", CP " << (cp ? "pass" : "FAIL")
              << " (choi_min_eig=" << csv_double(min_eig) << ")\n";
  }
  std::cout << "2-design: " << (is_two_design(lib) ? "yes" : "no") << "\n";
  std::cout << "library: " << (all_ok ? "physical" : "NOT physical") << "\n";
  return all_ok ? kExitOk : kExitValidation;
}

int cmd_ingest(CliConfig cli) {
  if (cli.records_path.empty()) {
    throw std::invalid_argument("ingest needs a record file (--records FILE)");
  }
  const IngestResult in = ingest_records(cli.records_path);
  std::size_t triples = 0;
  for (const ExperimentRecord& rec : in.records) triples += rec.is_triple() ? 1 : 0;
  for (const std::string& w : in.warnings) std::cerr << "warning: " << w << "\n";
  nlohmann::json out = {{"records", in.records.size()},
                        {"triples", triples},
                        {"pairs", in.records.size() - triples},
                        {"dim", in.library.dim},
                        {"labels", in.library.labels},
                        {"warnings", in.warnings}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gateset-forge: tomography experiments, estimators and error sweeps"};
  app.require_subcommand(1);
  CliConfig cli;
  app.add_flag("-v,--verbose", cli.verbosity, "More progress detail on stderr");

  auto* sim = app.add_subcommand("simulate", "Simulate a gate-set experiment to a record file");
  std::vector<std::string> error_specs;
  sim->add_option("--config", cli.config_path, "JSON config; flags win");
  sim->add_option("--library", cli.library, "Standard library name or library JSON file");
  sim->add_option("--error", error_specs, "Systematic error, kind:strength[:pre|post]; repeatable")
      ->expected(1)
      ->allow_extra_args(false);
  sim->add_option("--noise", cli.noise_power, "Additive Gaussian noise power per record");
  sim->add_option("--seed", cli.seed, "Seed for error draws and the noise stream");
  sim->add_option("--out", cli.out_dir, "Output directory");

  auto* camp = app.add_subcommand("campaign", "Run a sweep and write campaign.csv + metadata");
  CampaignSpec flags;
  std::string summary;
  camp->add_option("--config", cli.config_path, "Campaign spec JSON; flags win");
  camp->add_option("--figure", flags.figure, "Preset: fig1a|fig1b|fig2|fig3|fig4|fig5|custom");
  camp->add_option("--library", flags.libraries, "Library axis; repeatable")
      ->expected(1)
      ->allow_extra_args(false);
  camp->add_option("--model", flags.models, "Error model axis; repeatable")
      ->expected(1)
      ->allow_extra_args(false);
  camp->add_option("--strength", flags.strengths, "Raw model parameter axis; repeatable")
      ->expected(1)
      ->allow_extra_args(false);
  camp->add_option("--noise", flags.noise_powers, "Noise power axis; repeatable")
      ->expected(1)
      ->allow_extra_args(false);
  camp->add_option("--trials", flags.trials, "Trials per point");
  camp->add_option("--seed", flags.base_seed, "Base seed");
  camp->add_option("--estimator", flags.estimators, "qpt|scqpt; repeatable")
      ->expected(1)
      ->allow_extra_args(false);
  camp->add_option("--metric", flags.metrics,
                   "fidelity-error|diamond|exact-lsq-ratio; repeatable")
      ->expected(1)
      ->allow_extra_args(false);
  camp->add_option("--jobs", cli.jobs, "Worker threads; output is thread-count independent");
  camp->add_option("--out", cli.out_dir, "Output directory");
  camp->add_option("--summary", summary, "Also write campaign.summary.csv: mean|median|quantiles");

  auto* rec = app.add_subcommand("reconstruct", "Estimate gates from a record file");
  bool no_gauge = false;
  rec->add_option("--config", cli.config_path, "JSON config; flags win");
  rec->add_option("--records", cli.records_path, "Record CSV (sidecar JSON alongside)");
  rec->add_option("--out", cli.out_dir, "Output directory");
  auto* qpt_flag = rec->add_flag_callback(
      "--qpt", [&cli] { cli.estimator = "qpt"; }, "Per-gate tomography only");
  auto* sc_flag = rec->add_flag_callback(
      "--scqpt", [&cli] { cli.estimator = "scqpt"; }, "Joint gate-set estimation only");
  qpt_flag->excludes(sc_flag);
  sc_flag->excludes(qpt_flag);
  rec->add_flag("--no-gauge", no_gauge, "Skip the frame scan on the joint estimate");

  auto* met = app.add_subcommand("metrics", "Score two serialized maps or libraries");
  std::string first;
  std::string second;
  bool gauge = false;
  met->add_option("estimate", first, "Map/library JSON file or standard library name")
      ->required();
  met->add_option("target", second, "Map/library JSON file or standard library name")->required();
  met->add_flag("--gauge", gauge, "Scan the diagonal frame family before scoring libraries");
  met->add_option("--out", cli.out_dir, "Also write metrics.csv to this directory");

  auto* val = app.add_subcommand("validate", "Physicality battery for a library");
  std::string val_arg;
  val->add_option("library", val_arg, "Library JSON file or standard library name")->required();

  auto* ing = app.add_subcommand("ingest", "Parse and sanity-check a record file");
  ing->add_option("--records", cli.records_path, "Record CSV (sidecar JSON alongside)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    cli.subcommand = app.get_subcommands().front()->get_name();
    if (*sim) return cmd_simulate(sim, cli, error_specs);
    if (*camp) return cmd_campaign(camp, cli, flags, summary);
    if (*rec) return cmd_reconstruct(rec, cli, no_gauge);
    if (*met) return cmd_metrics(cli, first, second, gauge);
    if (*val) return cmd_validate(val_arg);
    if (*ing) return cmd_ingest(cli);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
