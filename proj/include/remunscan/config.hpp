/*
 * Copyright 2026 The remunscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "remunscan/error.hpp"
#include "remunscan/model.hpp"

namespace remunscan {

// Config documents hold optional `h1`, `h2` and `phase` sections. Missing
// keys keep their defaults; unknown keys are an error.

inline nlohmann::ordered_json config_to_json(const DetectConfig& cfg) {
  nlohmann::ordered_json j;
  j["h1"]["rho"] = cfg.h1.rho;
  j["h1"]["min_interval_days"] = cfg.h1.min_interval_days;
  j["h1"]["max_interval_days"] = cfg.h1.max_interval_days;
  j["h1"]["max_interval_cv"] = cfg.h1.max_interval_cv;
  j["h1"]["min_inband_fraction"] = cfg.h1.min_inband_fraction;
  j["h1"]["min_payments_per_stream"] = cfg.h1.min_payments_per_stream;
  j["h1"]["min_qualifying_streams"] = cfg.h1.min_qualifying_streams;
  j["h2"]["theta_abs"] = cfg.h2.theta_abs;
  j["h2"]["theta_rel"] = cfg.h2.theta_rel;
  j["h2"]["min_payments"] = cfg.h2.min_payments;
  j["phase"]["window_days"] = cfg.phase.window_days;
  return j;
}

namespace detail {

template <typename T>
void read_field(const nlohmann::json& section, const std::string& path, T& out) {
  try {
    if constexpr (std::is_floating_point_v<T>) {
      if (!section.is_number()) throw Error(ErrorKind::config, path + " must be a number");
      out = section.get<T>();
    } else {
      if (!section.is_number_integer() || section.get<std::int64_t>() < 0) {
        throw Error(ErrorKind::config, path + " must be a non-negative integer");
      }
      out = section.get<T>();
    }
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::config, path + " has the wrong type");
  }
}

}  // namespace detail

inline DetectConfig config_from_json(const nlohmann::json& doc) {
  DetectConfig cfg;
  if (!doc.is_object()) throw Error(ErrorKind::config, "config must be a JSON object");
  for (const auto& [name, section] : doc.items()) {
    if (!section.is_object()) throw Error(ErrorKind::config, name + " must be an object");
    for (const auto& [key, value] : section.items()) {
      const std::string path = name + "." + key;
      if (name == "h1") {
        if (key == "rho") detail::read_field(value, path, cfg.h1.rho);
        else if (key == "min_interval_days") detail::read_field(value, path, cfg.h1.min_interval_days);
        else if (key == "max_interval_days") detail::read_field(value, path, cfg.h1.max_interval_days);
        else if (key == "max_interval_cv") detail::read_field(value, path, cfg.h1.max_interval_cv);
        else if (key == "min_inband_fraction") detail::read_field(value, path, cfg.h1.min_inband_fraction);
        else if (key == "min_payments_per_stream") detail::read_field(value, path, cfg.h1.min_payments_per_stream);
        else if (key == "min_qualifying_streams") detail::read_field(value, path, cfg.h1.min_qualifying_streams);
        else throw Error(ErrorKind::config, "unknown config key " + path);
      } else if (name == "h2") {
        if (key == "theta_abs") detail::read_field(value, path, cfg.h2.theta_abs);
        else if (key == "theta_rel") detail::read_field(value, path, cfg.h2.theta_rel);
        else if (key == "min_payments") detail::read_field(value, path, cfg.h2.min_payments);
        else throw Error(ErrorKind::config, "unknown config key " + path);
      } else if (name == "phase") {
        if (key == "window_days") detail::read_field(value, path, cfg.phase.window_days);
        else throw Error(ErrorKind::config, "unknown config key " + path);
      } else {
        throw Error(ErrorKind::config, "unknown config section " + name);
      }
    }
  }
  cfg.validate();
  return cfg;
}

inline DetectConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::config, path + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace remunscan
