// Copyright 2026 The cachemimo Authors
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


#include "cachemimo/config_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cachemimo/errors.hpp"
#include "json.hpp"

namespace cachemimo::sim {

namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys = {"B",   "K",     "M",   "L_s",  "L_u",       "F_mbytes",
                                        "tau", "pilot_power", "E0", "gamma", "eta", "mode",
                                        "placement", "experiment"};
const std::set<std::string> kExperimentKeys = {
    "preset", "sweep", "schemes", "precoders", "trials_topology", "trials_fading_per_topology",
    "seed", "alpha", "closed_form_topologies", "workers"};

template <typename T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

int get_int(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() && !(v.is_number_float() && v.get<double>() == static_cast<long long>(v.get<double>()))) {
    throw ConfigError(std::string("key '") + key + "' must be an integer");
  }
  if (std::fabs(v.get<double>()) > 2147483647.0) {
    throw ConfigError(std::string("key '") + key + "' is out of range");
  }
  return static_cast<int>(v.get<double>());
}

cache::CacheMode parse_mode(const std::string& s) {
  if (s == "uncoded") return cache::CacheMode::kUncoded;
  if (s == "coded") return cache::CacheMode::kCoded;
  if (s == "none") return cache::CacheMode::kNone;
  throw ConfigError("mode must be \"uncoded\", \"coded\" or \"none\"");
}

}  // namespace

ExperimentPlan plan_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : root.items()) {
    if (!kTopKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  ExperimentPlan plan;
  auto& s = plan.system;
  for (const char* key : {"B", "K", "M", "L_s", "L_u", "tau"}) {
    if (!root.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  }
  s.B = get_int(root, "B");
  s.K = get_int(root, "K");
  s.M = get_int(root, "M");
  s.L_s = get_int(root, "L_s");
  s.L_u = get_int(root, "L_u");
  s.tau = get_int(root, "tau");
  s.F_mbytes = get<double>(root, "F_mbytes");
  s.pilot_power = get<double>(root, "pilot_power");
  s.E0 = get<double>(root, "E0");
  s.gamma = get<double>(root, "gamma");
  s.eta = get<std::vector<double>>(root, "eta");

  plan.mode = root.contains("mode") ? parse_mode(get<std::string>(root, "mode"))
                                    : cache::CacheMode::kUncoded;
  if (root.contains("placement")) {
    const auto& p = root.at("placement");
    if (p.is_string()) {
      const auto name = p.get<std::string>();
      if (name == "uniform") {
        plan.placement.kind = PlacementKind::kUniform;
      } else if (name == "deterministic") {
        plan.placement.kind = PlacementKind::kDeterministic;
      } else {
        throw ConfigError("placement must be \"uniform\", \"deterministic\" or a q_c table");
      }
    } else if (p.is_array()) {
      plan.placement.kind = PlacementKind::kExplicit;
      try {
        plan.placement.table = p.get<cache::PlacementTable>();
      } catch (const json::exception&) {
        throw ConfigError("placement table must be an array of numeric rows");
      }
    } else {
      throw ConfigError("placement must be a string or a q_c table");
    }
  }

  bool schemes_given = false;
  if (root.contains("experiment")) {
    const auto& e = root.at("experiment");
    if (!e.is_object()) throw ConfigError("experiment must be an object");
    for (const auto& [key, value] : e.items()) {
      if (!kExperimentKeys.count(key)) throw ConfigError("unknown experiment key '" + key + "'");
    }
    if (e.contains("sweep")) {
      const auto& sw = e.at("sweep");
      plan.sweep_param = parse_sweep_param(get<std::string>(sw, "param"));
      plan.sweep_values = get<std::vector<double>>(sw, "values");
    }
    if (e.contains("schemes")) {
      schemes_given = true;
      for (const auto& name : get<std::vector<std::string>>(e, "schemes")) {
        plan.schemes.push_back(rates::parse_scheme(name));
      }
    }
    if (e.contains("precoders")) {
      for (const auto& name : get<std::vector<std::string>>(e, "precoders")) {
        plan.precoders.push_back(precoding::parse_precoder(name));
      }
    } else {
      plan.precoders = {precoding::PrecoderKind::kMRT, precoding::PrecoderKind::kZF,
                        precoding::PrecoderKind::kRZF};
    }
    if (e.contains("trials_topology")) plan.trials_topology = get_int(e, "trials_topology");
    if (e.contains("trials_fading_per_topology")) {
      plan.trials_fading_per_topology = get_int(e, "trials_fading_per_topology");
    }
    if (e.contains("seed")) {
      if (!e.at("seed").is_number_unsigned()) {
        throw ConfigError("key 'seed' must be a non-negative integer");
      }
      plan.seed = e.at("seed").get<std::uint64_t>();
    }
    if (e.contains("alpha")) {
      const auto& a = e.at("alpha");
      if (a.is_string()) {
        if (a.get<std::string>() != "optimize") throw ConfigError("alpha must be \"optimize\" or a number");
        plan.optimize_alpha = true;
      } else if (a.is_number()) {
        plan.optimize_alpha = false;
        plan.alpha = a.get<double>();
      } else {
        throw ConfigError("alpha must be \"optimize\" or a number");
      }
    }
    if (e.contains("closed_form_topologies")) {
      plan.closed_form_topologies = get_int(e, "closed_form_topologies");
    }
    if (e.contains("workers")) plan.workers = get_int(e, "workers");
    if (e.contains("preset")) {
      const auto name = get<std::string>(e, "preset");
      if (name != "custom") {
        apply_preset(plan, name);
        schemes_given = true;
      }
    }
  } else {
    plan.precoders = {precoding::PrecoderKind::kMRT, precoding::PrecoderKind::kZF,
                      precoding::PrecoderKind::kRZF};
  }
  if (!schemes_given) plan.schemes = default_schemes(plan.mode);
  if (plan.sweep_values.empty()) {
    plan.sweep_param = SweepParam::kRho0;
    plan.sweep_values = {static_cast<double>(s.M) / s.K};
  }
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return plan_from_json(os.str());
}

}  // namespace cachemimo::sim
