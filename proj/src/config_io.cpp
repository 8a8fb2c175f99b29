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

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace iosim {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string to_string(DiscreteMethod m) {
  switch (m) {
    case DiscreteMethod::automatic: return "automatic";
    case DiscreteMethod::exhaustive: return "exhaustive";
    case DiscreteMethod::branch_and_bound: return "branch_and_bound";
    case DiscreteMethod::naive_rounding: return "naive_rounding";
  }
  return "unknown";
}

DiscreteMethod parse_discrete_method(const std::string& id) {
  for (auto m : {DiscreteMethod::automatic, DiscreteMethod::exhaustive, DiscreteMethod::branch_and_bound,
                 DiscreteMethod::naive_rounding})
    if (to_string(m) == id) return m;
  throw ConfigError("unknown discrete method '" + id + "'");
}

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

void read_vec3(const json& obj, const char* key, Vec3& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) throw ConfigError(where + "." + key + ": expected [x, y, z]");
  for (int i = 0; i < 3; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) throw ConfigError(where + "." + key + ": non-numeric entry");
    out(i) = v[static_cast<std::size_t>(i)].get<double>();
  }
}

json vec3(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

std::string to_string(PolarizationModel m) {
  return m == PolarizationModel::independent ? "independent" : "shared_spatial";
}

PolarizationModel parse_polarization(const std::string& id) {
  if (id == "independent") return PolarizationModel::independent;
  if (id == "shared_spatial") return PolarizationModel::shared_spatial;
  throw ConfigError("unknown polarization model '" + id + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc, "config",
             {"n_t", "m_elems", "k_r", "k_t", "beta_bi", "beta_iu", "beta_bu", "p_bs", "sigma2", "n_bits", "seed",
              "polarization", "gain_model", "geometry", "path_loss", "experiment"});
  ExperimentConfig out;
  ScenarioConfig& s = out.scenario;
  read(doc, "n_t", s.n_t, "config");
  read(doc, "m_elems", s.m_elems, "config");
  read(doc, "k_r", s.k_r, "config");
  read(doc, "k_t", s.k_t, "config");
  read(doc, "beta_bi", s.beta_bi, "config");
  read(doc, "beta_iu", s.beta_iu, "config");
  read(doc, "beta_bu", s.beta_bu, "config");
  read(doc, "p_bs", s.p_bs, "config");
  read(doc, "sigma2", s.sigma2, "config");
  read(doc, "n_bits", s.n_bits, "config");
  read(doc, "seed", s.seed, "config");
  if (doc.contains("polarization")) {
    std::string p;
    read(doc, "polarization", p, "config");
    s.polarization = parse_polarization(p);
  }
  if (doc.contains("gain_model")) {
    const auto& g = doc.at("gain_model");
    check_keys(g, "gain_model", {"power_gain", "area", "pattern_exponent"});
    read(g, "power_gain", s.gain_model.power_gain, "gain_model");
    read(g, "area", s.gain_model.area, "gain_model");
    read(g, "pattern_exponent", s.gain_model.pattern_exponent, "gain_model");
  }
  if (doc.contains("geometry")) {
    const auto& g = doc.at("geometry");
    check_keys(g, "geometry",
               {"bs_position", "ios_center", "ios_normal", "reflect_anchor", "user_radius", "element_spacing"});
    read_vec3(g, "bs_position", s.layout.bs_position, "geometry");
    read_vec3(g, "ios_center", s.layout.ios_center, "geometry");
    read_vec3(g, "ios_normal", s.layout.ios_normal, "geometry");
    read_vec3(g, "reflect_anchor", s.layout.reflect_anchor, "geometry");
    read(g, "user_radius", s.layout.user_radius, "geometry");
    read(g, "element_spacing", s.layout.element_spacing, "geometry");
  }
  if (doc.contains("path_loss")) {
    const auto& p = doc.at("path_loss");
    check_keys(p, "path_loss", {"c0_db", "alpha_bi", "alpha_iu", "alpha_bu", "direct_extra_db"});
    read(p, "c0_db", s.path_loss.c0_db, "path_loss");
    read(p, "alpha_bi", s.path_loss.alpha_bi, "path_loss");
    read(p, "alpha_iu", s.path_loss.alpha_iu, "path_loss");
    read(p, "alpha_bu", s.path_loss.alpha_bu, "path_loss");
    read(p, "direct_extra_db", s.path_loss.direct_extra_db, "path_loss");
  }
  if (doc.contains("experiment")) {
    const auto& e = doc.at("experiment");
    check_keys(e, "experiment",
               {"trials", "schemes", "epsilon", "coupled_phases", "max_iterations", "tolerance", "discrete_method",
                "parallel"});
    read(e, "trials", out.trials, "experiment");
    read(e, "epsilon", out.options.epsilon, "experiment");
    read(e, "coupled_phases", out.options.coupled_phases, "experiment");
    read(e, "max_iterations", out.options.run.max_iterations, "experiment");
    read(e, "tolerance", out.options.run.tolerance, "experiment");
    if (e.contains("schemes")) {
      std::vector<std::string> ids;
      read(e, "schemes", ids, "experiment");
      out.schemes.clear();
      try {
        for (const auto& id : ids) out.schemes.push_back(parse_scheme(id));
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("experiment.schemes: ") + ex.what());
      }
    }
    if (e.contains("discrete_method")) {
      std::string m;
      read(e, "discrete_method", m, "experiment");
      out.options.run.discrete = parse_discrete_method(m);
    }
    bool parallel = false;
    read(e, "parallel", parallel, "experiment");
    out.execution = parallel ? Execution::parallel : Execution::serial;
  }

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (out.trials < 1) throw ConfigError("experiment.trials must be >= 1");
  if (out.schemes.empty()) throw ConfigError("experiment.schemes must not be empty");
  if (!(out.options.epsilon > 0.0)) throw ConfigError("experiment.epsilon must be positive");
  if (out.options.run.max_iterations < 1) throw ConfigError("experiment.max_iterations must be >= 1");
  if (!(out.options.run.tolerance > 0.0)) throw ConfigError("experiment.tolerance must be positive");
  return out;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string to_json(const ExperimentConfig& config) {
  const ScenarioConfig& s = config.scenario;
  ojson doc;
  doc["n_t"] = s.n_t;
  doc["m_elems"] = s.m_elems;
  doc["k_r"] = s.k_r;
  doc["k_t"] = s.k_t;
  doc["beta_bi"] = s.beta_bi;
  doc["beta_iu"] = s.beta_iu;
  doc["beta_bu"] = s.beta_bu;
  doc["p_bs"] = s.p_bs;
  doc["sigma2"] = s.sigma2;
  doc["n_bits"] = s.n_bits;
  doc["seed"] = s.seed;
  doc["polarization"] = to_string(s.polarization);
  doc["gain_model"] = {{"power_gain", s.gain_model.power_gain},
                       {"area", s.gain_model.area},
                       {"pattern_exponent", s.gain_model.pattern_exponent}};
  ojson geo;
  geo["bs_position"] = vec3(s.layout.bs_position);
  geo["ios_center"] = vec3(s.layout.ios_center);
  geo["ios_normal"] = vec3(s.layout.ios_normal);
  geo["reflect_anchor"] = vec3(s.layout.reflect_anchor);
  geo["user_radius"] = s.layout.user_radius;
  geo["element_spacing"] = s.layout.element_spacing;
  doc["geometry"] = geo;
  ojson pl;
  pl["c0_db"] = s.path_loss.c0_db;
  pl["alpha_bi"] = s.path_loss.alpha_bi;
  pl["alpha_iu"] = s.path_loss.alpha_iu;
  pl["alpha_bu"] = s.path_loss.alpha_bu;
  pl["direct_extra_db"] = s.path_loss.direct_extra_db;
  doc["path_loss"] = pl;
  ojson ex;
  ex["trials"] = config.trials;
  std::vector<std::string> ids;
  for (Scheme sc : config.schemes) ids.push_back(to_string(sc));
  ex["schemes"] = ids;
  ex["epsilon"] = config.options.epsilon;
  ex["coupled_phases"] = config.options.coupled_phases;
  ex["max_iterations"] = config.options.run.max_iterations;
  ex["tolerance"] = config.options.run.tolerance;
  ex["discrete_method"] = to_string(config.options.run.discrete);
  ex["parallel"] = config.execution == Execution::parallel;
  doc["experiment"] = ex;
  return doc.dump(2) + "\n";
}

std::string to_json(const DualPolIosState& state) {
  const PhaseCodebook book(state.n_bits);
  ojson doc;
  doc["n_bits"] = state.n_bits;
  std::vector<int> vv, hh;
  for (double p : state.psi_vv) vv.push_back(book.index_of(p));
  for (double p : state.psi_hh) hh.push_back(book.index_of(p));
  doc["phase_index_vv"] = vv;
  doc["phase_index_hh"] = hh;
  doc["amp_vv"] = state.amp_vv;
  doc["amp_hh"] = state.amp_hh;
  return doc.dump();
}

std::string to_json(const PowerDomainIosState& state) {
  const PhaseCodebook book(state.n_bits);
  ojson doc;
  doc["n_bits"] = state.n_bits;
  doc["epsilon"] = state.epsilon;
  doc["coupled_phases"] = state.coupled_phases;
  std::vector<int> r, t;
  for (double p : state.psi_r) r.push_back(book.index_of(p));
  for (double p : state.psi_t) t.push_back(book.index_of(p));
  doc["phase_index_r"] = r;
  doc["phase_index_t"] = t;
  doc["amp"] = state.amp;
  return doc.dump();
}

}  // namespace iosim
