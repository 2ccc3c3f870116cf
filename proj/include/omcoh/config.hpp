#pragma once

// JSON configuration loading for single points and sweeps. Strict: every
// key is validated, unknown keys are rejected by name.

#include <fstream>
#include <set>
#include <string>
#include <variant>

#include <json.hpp>

#include "omcoh/errors.hpp"
#include "omcoh/model.hpp"
#include "omcoh/sweep.hpp"

namespace omcoh {

using Config = std::variant<SystemParams, SweepSpec>;

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("config: missing key '" + key + "'");
    if (!j[key].is_number()) throw ConfigError("config: key '" + key + "' must be a number");
    return j[key].get<double>();
}

inline SystemParams parse_params(const nlohmann::json& j) {
    static const std::set<std::string> known = {"gamma_m", "kappa", "delta0",
                                                "g0",      "drive_e", "n_th"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
    }
    SystemParams p;
    p.gamma_m = require_number(j, "gamma_m");
    p.kappa = require_number(j, "kappa");
    p.delta0 = require_number(j, "delta0");
    p.g0 = require_number(j, "g0");
    p.drive_e = require_number(j, "drive_e");
    p.n_th = require_number(j, "n_th");
    try {
        p.validate();
    } catch (const InputError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return p;
}

inline SweepAxis parse_axis(const nlohmann::json& j, const std::string& which) {
    static const std::set<std::string> known = {"param", "from", "to", "points", "scale"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError("config: unknown key '" + which + "." + key + "'");
        }
    }
    SweepAxis axis;
    if (!j.contains("param") || !j["param"].is_string()) {
        throw ConfigError("config: missing or non-string key '" + which + ".param'");
    }
    axis.param = j["param"].get<std::string>();
    axis.from = require_number(j, "from");
    axis.to = require_number(j, "to");
    if (!j.contains("points") || !j["points"].is_number_integer()) {
        throw ConfigError("config: missing or non-integer key '" + which + ".points'");
    }
    axis.points = j["points"].get<int>();
    std::string scale = "linear";
    if (j.contains("scale")) {
        if (!j["scale"].is_string()) {
            throw ConfigError("config: key '" + which + ".scale' must be a string");
        }
        scale = j["scale"].get<std::string>();
    }
    if (scale == "log") axis.log_scale = true;
    else if (scale == "linear") axis.log_scale = false;
    else throw ConfigError("config: key '" + which + ".scale' must be 'linear' or 'log'");
    axis.validate();
    return axis;
}

inline SweepSpec parse_sweep(const nlohmann::json& j) {
    static const std::set<std::string> known = {"base", "axis1", "axis2", "outputs"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
    }
    if (!j.contains("base") || !j["base"].is_object()) {
        throw ConfigError("config: sweep requires an object key 'base'");
    }
    if (!j.contains("axis1") || !j["axis1"].is_object()) {
        throw ConfigError("config: sweep requires an object key 'axis1'");
    }
    SweepSpec spec;
    spec.base = parse_params(j["base"]);
    spec.axis1 = parse_axis(j["axis1"], "axis1");
    if (j.contains("axis2")) {
        if (!j["axis2"].is_object()) throw ConfigError("config: key 'axis2' must be an object");
        spec.axis2 = parse_axis(j["axis2"], "axis2");
    }
    if (j.contains("outputs")) {
        if (!j["outputs"].is_array()) throw ConfigError("config: key 'outputs' must be an array");
        for (const auto& item : j["outputs"]) {
            if (!item.is_string()) throw ConfigError("config: 'outputs' entries must be strings");
            spec.outputs.push_back(item.get<std::string>());
        }
    }
    spec.validate();
    return spec;
}

}  // namespace detail

/// Parses a configuration document: a bare SystemParams object, or a sweep
/// object with 'base' and 'axis1'.
inline Config parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    if (j.contains("axis1") || j.contains("base")) return detail::parse_sweep(j);
    return detail::parse_params(j);
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: parse failure in '" + path + "': " + e.what());
    }
    return parse_config(j);
}

}  // namespace omcoh
