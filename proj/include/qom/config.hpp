#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qom/errors.hpp"
#include "qom/params.hpp"

namespace qom {

// Flat JSON parameter file, all values numbers:
//   g_hz, f_m_hz, q_m, gamma_c_hz, temperature_k   required
//   omega_hz | drive_offset_over_gamma_m          optional, at most one (default Ω = 0)
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"g_hz",       "f_m_hz",   "q_m",
                                             "gamma_c_hz", "omega_hz", "drive_offset_over_gamma_m",
                                             "temperature_k"};
  return keys;
}

struct ParamOverride {
  std::string key;
  double value;
};

struct LoadedConfig {
  ExperimentParams experiment;
  std::vector<ParamOverride> overrides;
  std::string source;  // file path, empty for built-in sets

  SystemParams params() const { return params_from_experiment(experiment); }
};

namespace detail {

inline bool is_config_key(std::string_view k) {
  for (const auto& key : config_keys())
    if (key == k) return true;
  return false;
}

inline void assign_key(ExperimentParams& e, const std::string& key, double v) {
  if (key == "g_hz") e.g_hz = v;
  else if (key == "f_m_hz") e.f_m_hz = v;
  else if (key == "q_m") e.q_m = v;
  else if (key == "gamma_c_hz") e.gamma_c_hz = v;
  else if (key == "temperature_k") e.temperature_k = v;
  else if (key == "omega_hz") {
    e.omega_hz = v;
    e.drive_offset_over_gamma_m.reset();
  } else if (key == "drive_offset_over_gamma_m") {
    e.drive_offset_over_gamma_m = v;
    e.omega_hz.reset();
  } else {
    throw ValidationError(key, "unknown parameter key");
  }
}

}  // namespace detail

inline ExperimentParams experiment_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("params", "parameter file must hold a JSON object");
  for (const auto& [k, v] : j.items())
    if (!detail::is_config_key(k)) throw ValidationError(k, "unknown parameter key");
  if (j.contains("omega_hz") && j.contains("drive_offset_over_gamma_m"))
    throw ValidationError("omega_hz", "give either omega_hz or drive_offset_over_gamma_m, not both");
  ExperimentParams e;
  for (const char* req : {"g_hz", "f_m_hz", "q_m", "gamma_c_hz", "temperature_k"})
    if (!j.contains(req)) throw ValidationError(req, "missing required key");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw ValidationError(k, "must be a number");
    detail::assign_key(e, k, v.get<double>());
  }
  return e;
}

inline nlohmann::json experiment_to_json(const ExperimentParams& e) {
  nlohmann::json j;
  j["g_hz"] = e.g_hz;
  j["f_m_hz"] = e.f_m_hz;
  j["q_m"] = e.q_m;
  j["gamma_c_hz"] = e.gamma_c_hz;
  if (e.omega_hz) j["omega_hz"] = *e.omega_hz;
  if (e.drive_offset_over_gamma_m) j["drive_offset_over_gamma_m"] = *e.drive_offset_over_gamma_m;
  j["temperature_k"] = e.temperature_k;
  return j;
}

// "key=value" with a numeric value.
inline ParamOverride parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ValidationError(std::string(text), "override must look like key=value");
  std::string key(text.substr(0, eq));
  if (!detail::is_config_key(key)) throw ValidationError(key, "unknown parameter key");
  const std::string val(text.substr(eq + 1));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(val, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != val.size()) throw ValidationError(key, "value '" + val + "' is not a number");
  return {std::move(key), v};
}

inline LoadedConfig apply_overrides(LoadedConfig cfg, const std::vector<ParamOverride>& overrides) {
  for (const auto& o : overrides) {
    detail::assign_key(cfg.experiment, o.key, o.value);
    cfg.overrides.push_back(o);
  }
  return cfg;
}

inline LoadedConfig load_config(const std::filesystem::path& file,
                                const std::vector<ParamOverride>& overrides = {}) {
  std::ifstream in(file);
  if (!in) throw ValidationError("params", "cannot open " + file.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("params", std::string("malformed JSON: ") + e.what());
  }
  LoadedConfig cfg{experiment_from_json(j), {}, file.string()};
  return apply_overrides(std::move(cfg), overrides);
}

}  // namespace qom
