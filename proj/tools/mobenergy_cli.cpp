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

// mobenergy command-line front end.
//
//   mobenergy theory       --config FILE [--out-dir DIR] [--scheme S] [--terms N] [--tau T]
//   mobenergy simulate     --config FILE [--out-dir DIR] [--seed S] [--trials N] [--mode exact|fast] ...
//   mobenergy plan         --config FILE [--out-dir DIR]
//   mobenergy validate     [--only 1,7] [--trials N] [--seed S]
//   mobenergy trajectories --config FILE [--out-dir DIR] [--trials N]
//
// Exit codes: 0 success, 1 failure (validation or runtime), 2 configuration error.

#include "mobenergy/mobenergy.hpp"
#include "mobenergy/validation.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mobenergy;

namespace
{

struct Overrides
{
    std::string config_path;
    std::string out_dir = "mobenergy-out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> mode;
    std::optional<std::string> scheme;
    std::optional<std::size_t> terms;
    std::optional<double> tau;
    bool dump_slots = false;
};

void add_common(CLI::App *cmd, Overrides &o, bool needs_config)
{
    auto *cfg = cmd->add_option("--config", o.config_path, "scenario file (JSON)");
    if (needs_config)
        cfg->required()->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--trials", o.trials, "number of Monte-Carlo trials");
    cmd->add_option("--mode", o.mode, "simulation mode")->check(CLI::IsMember({"exact", "fast"}));
    cmd->add_option("--scheme", o.scheme, "precoding scheme")
        ->check(CLI::IsMember({"olp", "mrt", "zf", "rzf", "rzf-classical"}));
    cmd->add_option("--terms", o.terms, "Theta series terms")->check(CLI::PositiveNumber);
    cmd->add_option("--tau", o.tau, "uniform CSI error tau in [0, 1)");
}

ScenarioConfig load_with_overrides(const Overrides &o)
{
    ScenarioConfig c = load_config(o.config_path);
    if (o.seed)
        c.seed = *o.seed;
    if (o.trials)
        c.trials = *o.trials;
    if (o.mode)
        c.mode = *o.mode;
    if (o.scheme)
        c.scheme = *o.scheme;
    if (o.terms)
        c.theta_terms = *o.terms;
    if (o.tau)
        c.csi_tau = PerUserSpec{*o.tau, {}, std::nullopt};
    validate(c);
    return c;
}

class Output
{
  public:
    Output(const std::string &dir, const std::string &subcommand, const std::string &digest) : dir_(dir)
    {
        fs::create_directories(dir_);
        manifest_.subcommand = subcommand;
        manifest_.digest = digest;
        manifest_.started_utc = utc_timestamp();
    }

    std::ofstream open(const std::string &name)
    {
        manifest_.outputs.push_back(name);
        std::ofstream os(dir_ / name);
        if (!os)
            throw std::runtime_error("cannot write " + (dir_ / name).string());
        return os;
    }

    std::ofstream open_csv(const std::string &name)
    {
        std::ofstream os = open(name);
        write_digest_line(os, manifest_.digest);
        os.precision(17);
        return os;
    }

    void json(const std::string &name, nlohmann::json j)
    {
        j["config_digest"] = manifest_.digest;
        std::ofstream os = open(name);
        os << j.dump(2) << '\n';
    }

    nlohmann::json &metadata() { return manifest_.metadata; }

    void finish()
    {
        manifest_.finished_utc = utc_timestamp();
        std::ofstream os(dir_ / "manifest.json");
        os << manifest_.to_json().dump(2) << '\n';
    }

  private:
    fs::path dir_;
    RunManifest manifest_;
};

std::vector<Scheme> theory_schemes(const ScenarioConfig &c, bool explicit_scheme)
{
    if (explicit_scheme)
        return {scheme_from_string(c.scheme)};
    return {unified_schemes.begin(), unified_schemes.end()};
}

int cmd_theory(const Overrides &o)
{
    const ScenarioConfig c = load_with_overrides(o);
    const ExperimentConfig e = c.experiment();
    Output out(o.out_dir, "theory", config_digest(c));
    TheoryInputs in = theory_inputs(e);

    nlohmann::json report{{"horizon_s", e.horizon_s}, {"users", e.k}, {"antennas", e.n},
                          {"diffusion_m2_per_s", in.diffusion_m2_per_s}, {"schemes", nlohmann::json::array()}};
    std::ofstream csv = out.open_csv("theory.csv");
    csv << "scheme,eta,epsilon_j,epsilon_wh,sigma_var,var_energy_j2,theta,terms_used\n";

    // Deterministic-equivalent snapshot at one draw of initial positions.
    Rng rng = make_rng(c.seed, 0);
    const auto positions = sample_initial_positions(e.k, e.geometry, rng);
    const auto att = attenuations(positions, e.model);
    nlohmann::json snapshot = nlohmann::json::array();
    int infeasible = 0;

    for (Scheme s : theory_schemes(c, o.scheme.has_value()))
    {
        if (s == Scheme::RzfClassical)
        {
            snapshot.push_back(summary_to_json(summarize(s, e.load(), e.targets().gamma, att, e.noise_w)));
            continue;
        }
        SchemeTheory t;
        try
        {
            t = scheme_theory(s, in);
        }
        catch (const InfeasibleError &err)
        {
            std::cerr << "error: " << err.what() << '\n';
            report["schemes"].push_back({{"scheme", std::string(to_string(s))}, {"infeasible", err.what()}});
            csv << to_string(s) << ",,,,,,,\n";
            ++infeasible;
            continue;
        }
        report["schemes"].push_back(theory_to_json(t, e.horizon_s));
        csv << to_string(s) << ',' << t.eta << ',' << t.law.epsilon_j << ','
            << units::joules_to_watt_hours(t.law.epsilon_j) << ',' << t.law.sigma_var << ',' << t.law.variance()
            << ',' << t.theta << ',' << t.theta_terms << '\n';
        if (e.perfect_csi())
            snapshot.push_back(summary_to_json(summarize(s, e.load(), e.targets().gamma, att, e.noise_w)));
        std::cout << display_name(s) << ": eta=" << t.eta << " epsilon=" << t.law.epsilon_j << " J ("
                  << units::joules_to_watt_hours(t.law.epsilon_j) << " Wh) Sigma=" << t.law.sigma_var
                  << " Theta=" << t.theta << '\n';
    }
    out.json("theory.json", report);
    out.json("asymptotics.json", nlohmann::json{{"positions_seed", c.seed}, {"schemes", snapshot}});
    out.metadata()["diffusion_factor"] = c.diffusion_factor;
    out.finish();
    return infeasible == 0 ? 0 : 1;
}

int cmd_simulate(const Overrides &o)
{
    const ScenarioConfig c = load_with_overrides(o);
    ExperimentConfig e = c.experiment();
    const std::string digest = config_digest(c);
    Output out(o.out_dir, "simulate", digest);
    const EnsembleStats st = run_ensemble(e);

    std::ofstream trials = out.open_csv("trials.csv");
    trials << "trial,energy_j\n";
    for (std::size_t i = 0; i < st.energies_j.size(); ++i)
        trials << i << ',' << st.energies_j[i] << '\n';

    if (st.theory)
    {
        const OutageComparison cmp = compare_outage(st, e.horizon_s);
        std::ofstream ccdf = out.open_csv("ccdf.csv");
        ccdf << "alpha_w,empirical,theoretical\n";
        for (const auto &r : cmp.rows)
            ccdf << r.alpha_w << ',' << r.empirical << ',' << r.theoretical << '\n';
    }
    if (o.dump_slots)
    {
        e.record_slots = true;
        const TrialResult tr = run_trial(e, 0);
        std::ofstream slots = out.open_csv("slots_trial0.csv");
        write_slot_csv(slots, tr.slots, e.scheme);
    }
    nlohmann::json summary = ensemble_to_json(st, digest);
    summary["power_allocation"] = e.mode == Mode::Exact ? (e.perfect_csi() ? "exact" : "exact-on-true-channel")
                                                        : "deterministic-equivalent";
    out.json("summary.json", summary);
    out.metadata()["mode"] = std::string(to_string(e.mode));
    out.metadata()["diffusion_factor"] = c.diffusion_factor;
    out.finish();
    std::cout << "mode=" << to_string(st.mode) << " scheme=" << to_string(st.scheme) << " trials=" << st.trials
              << " mean=" << st.mean_j << " J var=" << st.variance_j2 << " J^2";
    if (st.theory)
        std::cout << " ratio_mean=" << st.ratio_mean << " ratio_var=" << st.ratio_var << " ks_p=" << st.ks_pvalue;
    std::cout << '\n';
    return 0;
}

int cmd_plan(const Overrides &o)
{
    const ScenarioConfig c = load_with_overrides(o);
    const ExperimentConfig e = c.experiment();
    Output out(o.out_dir, "plan", config_digest(c));

    std::ofstream bat = out.open_csv("battery.csv");
    bat << "scheme,users,antennas,rate_bps_hz,epsilon_j,sigma_var,battery_j,battery_wh,status\n";
    std::ofstream rad = out.open_csv("radius.csv");
    rad << "scheme,users,antennas,rate_bps_hz,radius_closed_form_m,radius_numeric_m,numeric_fallback,status\n";

    for (Scheme s : unified_schemes)
        for (std::size_t k : c.plan_users)
        {
            if (k > e.n)
                continue;
            for (double rate : c.plan_rates_bps_hz)
            {
                ExperimentConfig x = e;
                x.k = k;
                x.rates.assign(k, rate);
                x.tau.clear();
                TheoryInputs in = theory_inputs(x);
                bat << to_string(s) << ',' << k << ',' << x.n << ',' << rate << ',';
                rad << to_string(s) << ',' << k << ',' << x.n << ',' << rate << ',';
                try
                {
                    const SchemeTheory t = scheme_theory(s, in);
                    const double b = battery_level(t.law, c.outage_target);
                    bat << t.law.epsilon_j << ',' << t.law.sigma_var << ',' << b << ','
                        << units::joules_to_watt_hours(b) << ",ok\n";
                    RadiusProblem p{x.model, x.load(), mean_of(x.targets().gamma), x.noise_w, t.eta, x.horizon_s,
                                    c.overhead_w};
                    const RadiusPlan plan = optimal_cell_radius(p);
                    if (plan.closed_form_m)
                        rad << *plan.closed_form_m;
                    rad << ',' << plan.numeric_m << ',' << (plan.numeric_fallback ? 1 : 0) << ",ok\n";
                }
                catch (const InfeasibleError &err)
                {
                    bat << ",,,,infeasible\n";
                    rad << ",,,infeasible\n";
                }
            }
        }
    out.metadata()["outage_target"] = c.outage_target;
    out.metadata()["overhead_w"] = c.overhead_w;
    out.finish();
    std::cout << "wrote battery.csv and radius.csv to " << o.out_dir << '\n';
    return 0;
}

int cmd_trajectories(const Overrides &o)
{
    const ScenarioConfig c = load_with_overrides(o);
    const ExperimentConfig e = c.experiment();
    Output out(o.out_dir, "trajectories", config_digest(c));
    const std::size_t trials = o.trials.value_or(1);
    // Replays the mobility stream of run_trial, so trial t here is trial t of `simulate`.
    const std::size_t steps = e.steps_per_slot();
    const std::size_t slots = slot_count(e.horizon_s, e.slot_s);
    std::vector<std::vector<Trajectory>> all;
    for (std::size_t t = 0; t < trials; ++t)
    {
        Rng mobility(derive_seed(e.seed, 2 * t));
        std::vector<Point> pos = sample_initial_positions(e.k, e.geometry, mobility);
        std::vector<Trajectory> users(e.k);
        for (std::size_t u = 0; u < e.k; ++u)
        {
            users[u].slot_duration_s = e.slot_s;
            users[u].user_index = static_cast<int>(u);
            users[u].positions.push_back(pos[u]);
        }
        for (std::size_t s = 0; s < slots; ++s)
            for (std::size_t u = 0; u < e.k; ++u)
            {
                for (std::size_t j = 0; j < steps; ++j)
                    pos[u] = step_walk(pos[u], e.walk, e.geometry, mobility);
                users[u].positions.push_back(pos[u]);
            }
        all.push_back(std::move(users));
    }
    std::ofstream os = out.open_csv("trajectories.csv");
    write_trajectories_csv(os, all);
    out.finish();
    return 0;
}

int cmd_validate(const std::vector<int> &only, std::optional<std::size_t> trials, std::optional<std::uint64_t> seed)
{
    validation::Options opt;
    if (trials)
        opt.trials = *trials;
    if (seed)
        opt.seed = *seed;
    const int failed = validation::run_all(std::cout, opt, only);
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << '\n';
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mobenergy: energy consumption statistics of multi-user MIMO downlinks with mobile users"};
    app.set_version_flag("--version", MOBENERGY_VERSION);
    app.require_subcommand(1);

    Overrides theory_o, sim_o, plan_o, traj_o;
    auto *theory = app.add_subcommand("theory", "per-scheme eta, epsilon, Sigma and Theta");
    add_common(theory, theory_o, true);
    auto *simulate = app.add_subcommand("simulate", "Monte-Carlo ensemble of E_T");
    add_common(simulate, sim_o, true);
    simulate->add_flag("--dump-slots", sim_o.dump_slots, "write per-slot powers of trial 0");
    auto *plan = app.add_subcommand("plan", "battery levels and optimal cell radius");
    add_common(plan, plan_o, true);
    auto *traj = app.add_subcommand("trajectories", "export random-walk trajectories");
    add_common(traj, traj_o, true);
    auto *validate_cmd = app.add_subcommand("validate", "run the acceptance suite");
    std::vector<int> only;
    std::optional<std::size_t> v_trials;
    std::optional<std::uint64_t> v_seed;
    validate_cmd->add_option("--only", only, "criterion ids to run (e.g. 1,7)")->delimiter(',');
    validate_cmd->add_option("--trials", v_trials, "FAST-mode trials per ensemble");
    validate_cmd->add_option("--seed", v_seed, "master seed");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        if (*theory)
            return cmd_theory(theory_o);
        if (*simulate)
            return cmd_simulate(sim_o);
        if (*plan)
            return cmd_plan(plan_o);
        if (*traj)
            return cmd_trajectories(traj_o);
        if (*validate_cmd)
            return cmd_validate(only, v_trials, v_seed);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const InfeasibleError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
