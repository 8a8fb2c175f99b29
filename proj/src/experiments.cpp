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

#include "iosim/experiments.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace iosim {

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::none: return "none";
    case SweepParam::user_ratio: return "user_ratio";
    case SweepParam::xpd_bi: return "xpd_bi";
    case SweepParam::power: return "power";
  }
  return "unknown";
}

SweepParam parse_sweep_param(const std::string& id) {
  for (SweepParam p : {SweepParam::none, SweepParam::user_ratio, SweepParam::xpd_bi, SweepParam::power})
    if (to_string(p) == id) return p;
  throw std::invalid_argument("unknown sweep parameter '" + id + "'");
}

void SweepSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (schemes.empty()) throw std::invalid_argument("sweep: no schemes");
  for (double v : values) apply_parameter(base, parameter, v).validate();
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base, std::size_t value_index, std::size_t trial) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ static_cast<std::uint64_t>(value_index));
  return splitmix64(s ^ (static_cast<std::uint64_t>(trial) << 20));
}

ScenarioConfig apply_parameter(const ScenarioConfig& base, SweepParam param, double value) {
  ScenarioConfig c = base;
  switch (param) {
    case SweepParam::none:
      break;
    case SweepParam::user_ratio: {
      if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("user_ratio must lie in [0, 1]");
      const int total = base.users();
      c.k_r = static_cast<int>(std::lround(value * total));
      c.k_t = total - c.k_r;
      break;
    }
    case SweepParam::xpd_bi:
      if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("xpd_bi must lie in [0, 1]");
      c.beta_bi = value;
      break;
    case SweepParam::power:
      if (!(value > 0.0)) throw std::invalid_argument("power must be positive");
      c.p_bs = value;
      break;
  }
  return c;
}

ChannelSet trial_channels(const ScenarioConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return synthesize_channels(config, build_geometry(config), rng);
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n_values = spec.values.size();
  const auto n_trials = static_cast<std::size_t>(spec.trials);
  const std::size_t tasks = n_values * n_trials;
  std::vector<std::vector<ResultRow>> per_task(tasks);

  auto run_task = [&](std::size_t t) {
    const std::size_t vi = t / n_trials, trial = t % n_trials;
    const double value = spec.values[vi];
    const ScenarioConfig config = apply_parameter(spec.base, spec.parameter, value);
    const std::uint64_t seed = trial_seed(spec.base.seed, vi, trial);
    const ChannelSet channels = trial_channels(config, seed);
    [[maybe_unused]] const std::uint64_t sum = channels.checksum();
    auto& out = per_task[t];
    for (Scheme s : spec.schemes) {
      ResultRow row;
      row.scheme = s;
      row.param = spec.parameter;
      row.value = value;
      row.trial = static_cast<int>(trial);
      row.seed = seed;
      try {
        const SchemeResult r = run_scheme(s, config, channels, spec.options);
        row.sum_rate = r.sum_rate;
        row.iterations = r.trace.iterations;
        row.converged = r.trace.converged;
        std::tie(row.p_v, row.p_h) = polarization_power(r.w, config.n_t);
        row.epsilon = r.epsilon;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      assert(channels.checksum() == sum && "schemes must share one channel draw");
      out.push_back(std::move(row));
    }
  };

  if (spec.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(tasks); ++t) run_task(static_cast<std::size_t>(t));
  } else {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  }

  std::vector<ResultRow> rows;
  rows.reserve(tasks * spec.schemes.size());
  for (auto& v : per_task)
    for (auto& r : v) rows.push_back(std::move(r));
  return rows;
}

std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows) {
  struct Acc {
    Aggregate agg;
    std::vector<double> xs;
  };
  std::vector<Acc> groups;
  std::map<std::pair<double, int>, std::size_t> index;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.value, static_cast<int>(r.scheme));
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      Acc a;
      a.agg.scheme = r.scheme;
      a.agg.param = r.param;
      a.agg.value = r.value;
      groups.push_back(std::move(a));
    }
    auto& g = groups[it->second];
    if (r.ok())
      g.xs.push_back(r.sum_rate);
    else
      ++g.agg.excluded;
  }

  std::vector<Aggregate> out;
  for (auto& g : groups) {
    const auto n = g.xs.size();
    if (n == 0)
      throw std::domain_error("aggregate: no valid rows for " + to_string(g.agg.scheme) + " at " + fmt(g.agg.value));
    double mean = 0.0;
    for (double x : g.xs) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : g.xs) ss += (x - mean) * (x - mean);
    g.agg.mean = mean;
    g.agg.n = static_cast<int>(n);
    g.agg.std_error = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
    out.push_back(g.agg);
  }
  return out;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "scheme,param,value,trial,seed,sum_rate,iterations,converged,p_v,p_h,epsilon\n";
  for (const auto& r : rows) {
    os << to_string(r.scheme) << ',' << to_string(r.param) << ',' << fmt(r.value) << ',' << r.trial << ','
       << r.seed << ',';
    if (r.ok())
      os << fmt(r.sum_rate) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << fmt(r.p_v) << ','
         << fmt(r.p_h) << ',' << (r.epsilon ? fmt(*r.epsilon) : "");
    else
      os << "nan,0,error,nan,nan,";
    os << '\n';
  }
  return os.str();
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "scheme,param,value,trial,seed,sum_rate,iterations,converged,p_v,p_h,epsilon")
    throw std::invalid_argument("results csv: unexpected header");
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 11) throw std::invalid_argument("results csv: expected 11 fields in '" + line + "'");
    ResultRow r;
    r.scheme = parse_scheme(f[0]);
    r.param = parse_sweep_param(f[1]);
    r.value = std::stod(f[2]);
    r.trial = std::stoi(f[3]);
    r.seed = std::stoull(f[4]);
    if (f[7] == "error") {
      r.error = "error";
    } else {
      r.sum_rate = std::stod(f[5]);
      r.iterations = std::stoi(f[6]);
      r.converged = f[7] == "1";
      r.p_v = std::stod(f[8]);
      r.p_h = std::stod(f[9]);
      if (!f[10].empty()) r.epsilon = std::stod(f[10]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string summary_csv(const std::vector<Aggregate>& aggregates) {
  std::ostringstream os;
  os << "scheme,param,value,mean,stderr,n\n";
  for (const auto& a : aggregates)
    os << to_string(a.scheme) << ',' << to_string(a.param) << ',' << fmt(a.value) << ',' << fmt(a.mean) << ','
       << fmt(a.std_error) << ',' << a.n << '\n';
  return os.str();
}

std::string plot_data(const std::vector<Aggregate>& aggregates) {
  std::vector<Scheme> schemes;
  std::vector<double> xs;
  for (const auto& a : aggregates) {
    if (std::find(schemes.begin(), schemes.end(), a.scheme) == schemes.end()) schemes.push_back(a.scheme);
    if (std::find(xs.begin(), xs.end(), a.value) == xs.end()) xs.push_back(a.value);
  }
  std::ostringstream os;
  os << "# " << (aggregates.empty() ? std::string("value") : to_string(aggregates.front().param));
  for (Scheme s : schemes) os << ' ' << to_string(s);
  os << '\n';
  for (double x : xs) {
    os << fmt(x);
    for (Scheme s : schemes) {
      const auto it = std::find_if(aggregates.begin(), aggregates.end(),
                                   [&](const Aggregate& a) { return a.value == x && a.scheme == s; });
      os << ' ' << (it == aggregates.end() ? std::string("nan") : fmt(it->mean));
    }
    os << '\n';
  }
  return os.str();
}

void emit(const std::vector<ResultRow>& rows, const std::vector<Aggregate>& aggregates,
          const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  const SweepParam param = rows.empty() ? SweepParam::none : rows.front().param;
  auto write = [&](const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << body;
    if (!out) throw std::runtime_error("write failed for " + path.string());
  };
  write(dir / "results.csv", results_csv(rows));
  write(dir / "summary.csv", summary_csv(aggregates));
  write(dir / ("plot_" + to_string(param) + ".dat"), plot_data(aggregates));
}

}  // namespace iosim
