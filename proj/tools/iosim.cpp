// SPDX-License-Identifier: Apache-2.0
//
// iosim: joint digital/analog beamforming for dual-polarized omni-surfaces
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "iosim/config_io.hpp"
#include "iosim/experiments.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace iosim;

void print_summary(const std::vector<Aggregate>& aggs) {
  for (const auto& a : aggs)
    std::cout << to_string(a.scheme) << "  " << to_string(a.param) << "=" << a.value << "  mean=" << a.mean
              << "  se=" << a.std_error << "  n=" << a.n << (a.excluded ? "  excluded=" : "")
              << (a.excluded ? std::to_string(a.excluded) : "") << '\n';
}

SweepSpec spec_from(const ExperimentConfig& cfg) {
  SweepSpec spec;
  spec.base = cfg.scenario;
  spec.trials = cfg.trials;
  spec.schemes = cfg.schemes;
  spec.options = cfg.options;
  spec.execution = cfg.execution;
  return spec;
}

int run_and_emit(const SweepSpec& spec, const std::string& out_dir) {
  const auto rows = run_sweep(spec);
  const auto aggs = aggregate(rows);
  emit(rows, aggs, out_dir);
  print_summary(aggs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iosim: dual-polarized omni-surface beamforming simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;

  auto* run = app.add_subcommand("run", "Monte-Carlo trials of the configured schemes");
  run->add_option("--config", config_path, "scenario JSON")->required();
  run->add_option("--seed", seed, "override the base seed");
  run->add_option("--trials", trials, "override the trial count");
  run->add_option("--out", out_path, "output directory")->default_val("out");

  std::string param;
  std::vector<double> values;
  std::vector<std::string> schemes;
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
  sweep->add_option("--param", param, "user_ratio | xpd_bi | power")
      ->required()
      ->check(CLI::IsMember({"user_ratio", "xpd_bi", "power"}));
  sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
  sweep->add_option("--schemes", schemes, "comma-separated scheme ids")->delimiter(',');
  sweep->add_option("--config", config_path, "scenario JSON")->required();
  sweep->add_option("--out", out_path, "output directory")->required();
  sweep->add_option("--trials", trials, "override the trial count");
  sweep->add_option("--seed", seed, "override the base seed");

  auto* trace = app.add_subcommand("trace", "per-iteration trace of one dual-polarized IOS run");
  trace->add_option("--config", config_path, "scenario JSON")->required();
  trace->add_option("--out", out_path, "JSON-lines output file")->required();
  trace->add_option("--seed", seed, "override the base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.scenario.seed = *seed;
    if (trials) {
      if (*trials < 1) throw ConfigError("--trials must be >= 1");
      cfg.trials = *trials;
    }

    if (*run) return run_and_emit(spec_from(cfg), out_path);

    if (*sweep) {
      SweepSpec spec = spec_from(cfg);
      spec.parameter = parse_sweep_param(param);
      spec.values = values;
      if (!schemes.empty()) {
        spec.schemes.clear();
        for (const auto& id : schemes) spec.schemes.push_back(parse_scheme(id));
      }
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      return run_and_emit(spec, out_path);
    }

    if (*trace) {
      const ChannelSet channels = trial_channels(cfg.scenario, trial_seed(cfg.scenario.seed, 0, 0));
      const RunResult res = iosim::run(cfg.scenario, channels, cfg.options.run);
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
      out << to_json_lines(res.trace);
      if (!out) throw std::runtime_error("write failed for " + out_path);
      std::cout << "iterations=" << res.trace.iterations << " converged=" << (res.trace.converged ? "true" : "false")
                << " sum_rate=" << res.sum_rate << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
