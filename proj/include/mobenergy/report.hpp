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

#ifndef MOBENERGY_REPORT_HPP
#define MOBENERGY_REPORT_HPP

#include "mobenergy/config.hpp"
#include "mobenergy/energy.hpp"
#include "mobenergy/simkit.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#ifndef MOBENERGY_VERSION
#define MOBENERGY_VERSION "0.0.0"
#endif

namespace mobenergy
{

inline std::uint64_t fnv1a64(const std::string &text)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text)
    {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Digest of the canonical (sorted-key) serialisation of a configuration.
inline std::string config_digest(const ScenarioConfig &c)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(config_to_json(c).dump());
    return os.str();
}

inline std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

struct RunManifest
{
    std::string digest;
    std::string version = MOBENERGY_VERSION;
    std::string subcommand;
    std::string started_utc;
    std::string finished_utc;
    std::vector<std::string> outputs;
    nlohmann::json metadata = nlohmann::json::object();

    nlohmann::json to_json() const
    {
        return nlohmann::json{{"config_digest", digest},  {"tool_version", version},
                              {"subcommand", subcommand}, {"started_utc", started_utc},
                              {"finished_utc", finished_utc}, {"outputs", outputs},
                              {"metadata", metadata}};
    }
};

/// First line of every CSV output.
inline void write_digest_line(std::ostream &os, const std::string &digest)
{
    os << "# manifest_digest=" << digest << '\n';
}

inline nlohmann::json theory_to_json(const SchemeTheory &t, double horizon_s)
{
    return nlohmann::json{{"scheme", std::string(to_string(t.scheme))},
                          {"eta", t.eta},
                          {"epsilon_j", t.law.epsilon_j},
                          {"epsilon_wh", units::joules_to_watt_hours(t.law.epsilon_j)},
                          {"mean_power_w", horizon_s > 0.0 ? t.law.epsilon_j / horizon_s : 0.0},
                          {"sigma_var", t.law.sigma_var},
                          {"var_energy_j2", t.law.variance()},
                          {"theta", t.theta},
                          {"terms_used", t.theta_terms}};
}

inline nlohmann::json summary_to_json(const AsymptoticSummary &s)
{
    nlohmann::json j{{"scheme", std::string(to_string(s.scheme))},
                     {"eta", std::isnan(s.eta) ? nlohmann::json(nullptr) : nlohmann::json(s.eta)},
                     {"a_of_t", s.a_of_t},
                     {"pbar_w", s.pbar_w},
                     {"mu", s.mu ? nlohmann::json(*s.mu) : nlohmann::json(nullptr)},
                     {"rho", s.rho ? nlohmann::json(*s.rho) : nlohmann::json(nullptr)}};
    nlohmann::json users = nlohmann::json::array();
    for (std::size_t i = 0; i < s.user_pbar_w.size(); ++i)
    {
        nlohmann::json u{{"user", i}, {"pbar_w", s.user_pbar_w[i]}};
        if (i < s.user_lambda.size())
            u["lambda"] = s.user_lambda[i];
        users.push_back(u);
    }
    j["per_user"] = users;
    return j;
}

inline nlohmann::json ensemble_to_json(const EnsembleStats &st, const std::string &digest)
{
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json j{{"config_digest", digest},
                     {"mode", std::string(to_string(st.mode))},
                     {"scheme", std::string(to_string(st.scheme))},
                     {"trials", st.trials},
                     {"mean_j", st.mean_j},
                     {"variance_j2", st.variance_j2},
                     {"ratio_mean", num(st.ratio_mean)},
                     {"ratio_var", num(st.ratio_var)},
                     {"ks_stat", num(st.ks_stat)},
                     {"ks_pvalue", num(st.ks_pvalue)}};
    if (st.theory)
    {
        j["epsilon"] = st.theory->law.epsilon_j;
        j["sigma"] = st.theory->law.sigma_var;
        j["eta"] = st.theory->eta;
        j["theta"] = st.theory->theta;
    }
    else
    {
        j["epsilon"] = nullptr;
        j["sigma"] = nullptr;
    }
    return j;
}

} // namespace mobenergy

#endif // MOBENERGY_REPORT_HPP
