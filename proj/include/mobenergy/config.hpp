// SPDX-License-Identifier: Apache-2.0
//
// mobenergy: energy consumption statistics of multi-user MIMO downlinks with mobile users
// Copyright (C) 2026 The mobenergy authors
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

#ifndef MOBENERGY_CONFIG_HPP
#define MOBENERGY_CONFIG_HPP

#include "mobenergy/simkit.hpp"
#include "mobenergy/units.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobenergy
{

/// Configuration error tied to one key of the scenario file.
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(const std::string &field, const std::string &what)
        : std::runtime_error("config field '" + field + "': " + what), field_(field)
    {
    }
    const std::string &field() const { return field_; }

  private:
    std::string field_;
};

/// Per-user value given as a scalar, an explicit list, or an evenly spaced {min, max} range.
struct PerUserSpec
{
    std::optional<double> uniform;
    std::vector<double> list;
    std::optional<std::pair<double, double>> range;

    std::vector<double> expand(std::size_t k, const std::string &field) const
    {
        if (uniform)
            return std::vector<double>(k, *uniform);
        if (range)
        {
            if (k == 1)
                return {range->first};
            std::vector<double> v(k);
            for (std::size_t i = 0; i < k; ++i)
                v[i] = range->first + (range->second - range->first) * static_cast<double>(i) / static_cast<double>(k - 1);
            return v;
        }
        if (list.size() != k)
            throw ConfigError(field, "list has " + std::to_string(list.size()) + " entries for " + std::to_string(k) +
                                         " users");
        return list;
    }

    double mean(std::size_t k, const std::string &field) const
    {
        const auto v = expand(k, field);
        double s = 0.0;
        for (double x : v)
            s += x;
        return s / static_cast<double>(v.size());
    }
};

/// Scenario file contents in user-facing units (dB, dBm, hours); SI accessors convert.
struct ScenarioConfig
{
    double radius_m = 500.0;
    double pathloss_exponent = 4.0;
    double cutoff_m = 25.0;
    double attenuation_at_cutoff_db = -93.0;
    double noise_dbm = -97.8;
    double bandwidth_hz = 20e6;
    double carrier_hz = 2.4e9;
    double step_m = 50.0;
    double interval_s = 30.0;
    double diffusion_factor = 1.0;
    std::size_t users = 32;
    std::size_t antennas = 64;
    PerUserSpec rates_bps_hz{1.5, {}, std::nullopt};
    std::string scheme = "olp";
    PerUserSpec csi_tau{0.0, {}, std::nullopt};
    double horizon_h = 12.0;
    double slot_s = 30.0;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::string mode = "fast";
    unsigned threads = 0;
    std::size_t theta_terms = 100;
    double outage_target = 0.01;
    double overhead_w = 18.0;
    std::vector<double> plan_rates_bps_hz{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::vector<std::size_t> plan_users{8, 16, 32, 64};

    double noise_w() const { return units::dbm_to_watts(noise_dbm); }
    double horizon_s() const { return units::hours_to_seconds(horizon_h); }
    PathlossModel model() const { return PathlossModel::from_db(pathloss_exponent, cutoff_m, attenuation_at_cutoff_db); }
    CellGeometry geometry() const { return CellGeometry(radius_m); }
    WalkParams walk() const { return WalkParams(step_m, interval_s, diffusion_factor); }

    ExperimentConfig experiment() const
    {
        ExperimentConfig e;
        e.geometry = geometry();
        e.walk = walk();
        e.model = model();
        e.k = users;
        e.n = antennas;
        e.rates = rates_bps_hz.expand(users, "rates_bps_hz");
        e.noise_w = noise_w();
        e.scheme = scheme_from_string(scheme);
        e.tau = csi_tau.expand(users, "csi_tau");
        e.horizon_s = horizon_s();
        e.slot_s = slot_s;
        e.trials = trials;
        e.seed = seed;
        e.mode = mode_from_string(mode);
        e.threads = threads;
        e.theta.terms = theta_terms;
        return e;
    }
};

namespace detail
{

inline const std::set<std::string> &known_keys()
{
    static const std::set<std::string> keys{
        "radius_m",      "pathloss_exponent", "cutoff_m",     "attenuation_at_cutoff_db", "noise_dbm",
        "bandwidth_hz",  "carrier_hz",        "step_m",       "interval_s",               "diffusion_factor",
        "users",         "antennas",          "rates_bps_hz", "scheme",                   "csi_tau",
        "horizon_h",     "slot_s",            "trials",       "seed",                     "mode",
        "threads",       "theta_terms",       "outage_target", "overhead_w",              "plan_rates_bps_hz",
        "plan_users"};
    return keys;
}

inline double get_number(const nlohmann::json &j, const std::string &key, double fallback)
{
    if (!j.contains(key))
        return fallback;
    const auto &v = j.at(key);
    if (!v.is_number())
        throw ConfigError(key, "expected a number");
    return v.get<double>();
}

inline std::uint64_t get_count(const nlohmann::json &j, const std::string &key, std::uint64_t fallback)
{
    if (!j.contains(key))
        return fallback;
    const auto &v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigError(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

inline std::string get_string(const nlohmann::json &j, const std::string &key, const std::string &fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_string())
        throw ConfigError(key, "expected a string");
    return j.at(key).get<std::string>();
}

inline PerUserSpec get_per_user(const nlohmann::json &j, const std::string &key, const PerUserSpec &fallback)
{
    if (!j.contains(key))
        return fallback;
    const auto &v = j.at(key);
    PerUserSpec s;
    if (v.is_number())
        s.uniform = v.get<double>();
    else if (v.is_array())
    {
        for (const auto &x : v)
        {
            if (!x.is_number())
                throw ConfigError(key, "list entries must be numbers");
            s.list.push_back(x.get<double>());
        }
        if (s.list.empty())
            throw ConfigError(key, "list must not be empty");
    }
    else if (v.is_object())
    {
        if (!v.contains("min") || !v.contains("max") || v.size() != 2 || !v.at("min").is_number() ||
            !v.at("max").is_number())
            throw ConfigError(key, "range must be {\"min\": number, \"max\": number}");
        s.range = std::make_pair(v.at("min").get<double>(), v.at("max").get<double>());
    }
    else
        throw ConfigError(key, "expected a number, a list or a {min, max} range");
    return s;
}

inline nlohmann::json per_user_to_json(const PerUserSpec &s)
{
    if (s.uniform)
        return *s.uniform;
    if (s.range)
        return nlohmann::json{{"min", s.range->first}, {"max", s.range->second}};
    return s.list;
}

} // namespace detail

inline void validate(const ScenarioConfig &c)
{
    auto positive = [](double v, const char *key) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(key, "must be positive and finite");
    };
    positive(c.radius_m, "radius_m");
    positive(c.pathloss_exponent, "pathloss_exponent");
    positive(c.cutoff_m, "cutoff_m");
    positive(c.bandwidth_hz, "bandwidth_hz");
    positive(c.carrier_hz, "carrier_hz");
    positive(c.interval_s, "interval_s");
    positive(c.diffusion_factor, "diffusion_factor");
    positive(c.slot_s, "slot_s");
    if (!(c.step_m >= 0.0))
        throw ConfigError("step_m", "must be non-negative");
    if (!(c.horizon_h >= 0.0))
        throw ConfigError("horizon_h", "must be non-negative");
    if (!std::isfinite(c.attenuation_at_cutoff_db))
        throw ConfigError("attenuation_at_cutoff_db", "must be finite");
    if (!std::isfinite(c.noise_dbm))
        throw ConfigError("noise_dbm", "must be finite");
    if (c.users < 1)
        throw ConfigError("users", "must be >= 1");
    if (c.antennas < c.users)
        throw ConfigError("antennas", "must be >= users (K/N <= 1)");
    if (c.trials < 1)
        throw ConfigError("trials", "must be >= 1");
    if (c.theta_terms < 1)
        throw ConfigError("theta_terms", "must be >= 1");
    if (!(c.outage_target > 0.0 && c.outage_target < 1.0))
        throw ConfigError("outage_target", "must lie in (0, 1)");
    if (!(c.overhead_w >= 0.0))
        throw ConfigError("overhead_w", "must be non-negative");
    for (double r : c.rates_bps_hz.expand(c.users, "rates_bps_hz"))
        if (!(r > 0.0))
            throw ConfigError("rates_bps_hz", "rates must be positive");
    for (double t : c.csi_tau.expand(c.users, "csi_tau"))
        if (!(t >= 0.0 && t < 1.0))
            throw ConfigError("csi_tau", "must lie in [0, 1)");
    for (double r : c.plan_rates_bps_hz)
        if (!(r > 0.0))
            throw ConfigError("plan_rates_bps_hz", "rates must be positive");
    for (std::size_t k : c.plan_users)
        if (k < 1)
            throw ConfigError("plan_users", "entries must be >= 1");
    try
    {
        (void)scheme_from_string(c.scheme);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError("scheme", e.what());
    }
    try
    {
        (void)mode_from_string(c.mode);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError("mode", e.what());
    }
    try
    {
        c.experiment().validate();
    }
    catch (const ConfigError &)
    {
        throw;
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError("scenario", e.what());
    }
}

inline ScenarioConfig config_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        throw ConfigError("<root>", "expected a JSON object");
    for (const auto &item : j.items())
        if (!detail::known_keys().count(item.key()))
            throw ConfigError(item.key(), "unknown key");
    ScenarioConfig c;
    c.radius_m = detail::get_number(j, "radius_m", c.radius_m);
    c.pathloss_exponent = detail::get_number(j, "pathloss_exponent", c.pathloss_exponent);
    c.cutoff_m = detail::get_number(j, "cutoff_m", c.cutoff_m);
    c.attenuation_at_cutoff_db = detail::get_number(j, "attenuation_at_cutoff_db", c.attenuation_at_cutoff_db);
    c.noise_dbm = detail::get_number(j, "noise_dbm", c.noise_dbm);
    c.bandwidth_hz = detail::get_number(j, "bandwidth_hz", c.bandwidth_hz);
    c.carrier_hz = detail::get_number(j, "carrier_hz", c.carrier_hz);
    c.step_m = detail::get_number(j, "step_m", c.step_m);
    c.interval_s = detail::get_number(j, "interval_s", c.interval_s);
    c.diffusion_factor = detail::get_number(j, "diffusion_factor", c.diffusion_factor);
    c.users = detail::get_count(j, "users", c.users);
    c.antennas = detail::get_count(j, "antennas", c.antennas);
    c.rates_bps_hz = detail::get_per_user(j, "rates_bps_hz", c.rates_bps_hz);
    c.scheme = detail::get_string(j, "scheme", c.scheme);
    c.csi_tau = detail::get_per_user(j, "csi_tau", c.csi_tau);
    c.horizon_h = detail::get_number(j, "horizon_h", c.horizon_h);
    c.slot_s = detail::get_number(j, "slot_s", c.slot_s);
    c.trials = detail::get_count(j, "trials", c.trials);
    c.seed = detail::get_count(j, "seed", c.seed);
    c.mode = detail::get_string(j, "mode", c.mode);
    c.threads = static_cast<unsigned>(detail::get_count(j, "threads", c.threads));
    c.theta_terms = detail::get_count(j, "theta_terms", c.theta_terms);
    c.outage_target = detail::get_number(j, "outage_target", c.outage_target);
    c.overhead_w = detail::get_number(j, "overhead_w", c.overhead_w);
    if (j.contains("plan_rates_bps_hz"))
    {
        const auto &v = j.at("plan_rates_bps_hz");
        if (!v.is_array())
            throw ConfigError("plan_rates_bps_hz", "expected a list of numbers");
        c.plan_rates_bps_hz.clear();
        for (const auto &x : v)
        {
            if (!x.is_number())
                throw ConfigError("plan_rates_bps_hz", "expected a list of numbers");
            c.plan_rates_bps_hz.push_back(x.get<double>());
        }
    }
    if (j.contains("plan_users"))
    {
        const auto &v = j.at("plan_users");
        if (!v.is_array())
            throw ConfigError("plan_users", "expected a list of integers");
        c.plan_users.clear();
        for (const auto &x : v)
        {
            if (!x.is_number_integer() || x.get<std::int64_t>() < 0)
                throw ConfigError("plan_users", "expected a list of positive integers");
            c.plan_users.push_back(x.get<std::size_t>());
        }
    }
    validate(c);
    return c;
}

inline nlohmann::json config_to_json(const ScenarioConfig &c)
{
    return nlohmann::json{{"radius_m", c.radius_m},
                          {"pathloss_exponent", c.pathloss_exponent},
                          {"cutoff_m", c.cutoff_m},
                          {"attenuation_at_cutoff_db", c.attenuation_at_cutoff_db},
                          {"noise_dbm", c.noise_dbm},
                          {"bandwidth_hz", c.bandwidth_hz},
                          {"carrier_hz", c.carrier_hz},
                          {"step_m", c.step_m},
                          {"interval_s", c.interval_s},
                          {"diffusion_factor", c.diffusion_factor},
                          {"users", c.users},
                          {"antennas", c.antennas},
                          {"rates_bps_hz", detail::per_user_to_json(c.rates_bps_hz)},
                          {"scheme", c.scheme},
                          {"csi_tau", detail::per_user_to_json(c.csi_tau)},
                          {"horizon_h", c.horizon_h},
                          {"slot_s", c.slot_s},
                          {"trials", c.trials},
                          {"seed", c.seed},
                          {"mode", c.mode},
                          {"threads", c.threads},
                          {"theta_terms", c.theta_terms},
                          {"outage_target", c.outage_target},
                          {"overhead_w", c.overhead_w},
                          {"plan_rates_bps_hz", c.plan_rates_bps_hz},
                          {"plan_users", c.plan_users}};
}

inline ScenarioConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("<file>", "cannot open '" + path + "'");
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

} // namespace mobenergy

#endif // MOBENERGY_CONFIG_HPP
