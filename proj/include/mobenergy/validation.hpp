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

#ifndef MOBENERGY_VALIDATION_HPP
#define MOBENERGY_VALIDATION_HPP

#include "mobenergy/asymptotics.hpp"
#include "mobenergy/energy.hpp"
#include "mobenergy/pathloss_covariance.hpp"
#include "mobenergy/planner.hpp"
#include "mobenergy/precoding.hpp"
#include "mobenergy/simkit.hpp"
#include "mobenergy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace mobenergy::validation
{

// Acceptance suite: one result per criterion, each made of pinned-tolerance checks.

struct Check
{
    std::string label;
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool gated = true; // informational checks are reported but never fail the criterion

    bool passed() const { return value >= lo && value <= hi; }
};

struct CriterionResult
{
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    bool passed() const
    {
        for (const auto &c : checks)
            if (c.gated && !c.passed())
                return false;
        return true;
    }

    void within(const std::string &label, double value, double centre, double tol, bool gated = true)
    {
        checks.push_back({label, value, centre - tol, centre + tol, gated});
    }
    void below(const std::string &label, double value, double bound, bool gated = true)
    {
        checks.push_back({label, value, -std::numeric_limits<double>::infinity(), bound, gated});
    }
    void above(const std::string &label, double value, double bound, bool gated = true)
    {
        checks.push_back({label, value, bound, std::numeric_limits<double>::infinity(), gated});
    }
    void note(const std::string &text) { notes.push_back(text); }
};

struct Options
{
    std::uint64_t seed = 20260417;
    unsigned threads = 0;
    std::size_t trials = 1000;       // FAST ensembles
    std::size_t exact_trials = 100;  // informational EXACT ensemble in criterion 1
    bool exact_reference = true;
};

inline std::string fmt(double v, int prec = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

/// Table-I scenario: R = 500 m, beta = 4, xbar = 25 m, L = -93 dB, sigma^2 = -97.8 dBm,
/// step 50 m every 30 s, r = 1.5 bit/s/Hz, c = 0.5, OLP.
inline ExperimentConfig table_one(std::size_t k, double horizon_h, const Options &opt)
{
    ExperimentConfig c;
    c.k = k;
    c.n = 2 * k;
    c.rates.assign(k, 1.5);
    c.horizon_s = units::hours_to_seconds(horizon_h);
    c.slot_s = c.walk.interval_s;
    c.trials = opt.trials;
    c.seed = opt.seed;
    c.threads = opt.threads;
    c.mode = Mode::Fast;
    c.scheme = Scheme::Olp;
    return c;
}

inline CriterionResult energy_table(const Options &opt)
{
    CriterionResult r{1, "Energy moment table (FAST, 1000 trials, OLP, r=1.5, c=0.5)", {}, {}};
    struct Cell
    {
        std::size_t k;
        double hours, mean, mean_tol, var, var_tol;
    };
    const Cell cells[] = {{16, 3.0, 1.030, 0.02, 1.19, 0.15},
                          {32, 24.0, 1.000, 0.01, 1.02, 0.12},
                          {64, 3.0, 1.019, 0.015, 1.07, 0.12}};
    for (const auto &cell : cells)
    {
        ExperimentConfig c = table_one(cell.k, cell.hours, opt);
        c.seed = derive_seed(opt.seed, 100 + cell.k);
        const EnsembleStats st = run_ensemble(c);
        const std::string tag = "K=" + std::to_string(cell.k) + " T=" + fmt(cell.hours) + "h";
        r.within(tag + " ratio_mean", st.ratio_mean, cell.mean, cell.mean_tol);
        r.within(tag + " ratio_var", st.ratio_var, cell.var, cell.var_tol);
        const double se_mean = std::sqrt(st.variance_j2 / static_cast<double>(st.trials)) / st.theory->law.epsilon_j;
        r.note(tag + ": standard error of ratio_mean = " + fmt(se_mean, 3));
    }
    if (opt.exact_reference && opt.exact_trials >= 2)
    {
        ExperimentConfig c = table_one(16, 3.0, opt);
        c.mode = Mode::Exact;
        c.trials = opt.exact_trials;
        c.seed = derive_seed(opt.seed, 116);
        const EnsembleStats st = run_ensemble(c);
        r.within("EXACT reference K=16 T=3h ratio_mean (" + std::to_string(c.trials) + " trials)", st.ratio_mean, 1.030,
                 0.02, false);
        r.within("EXACT reference K=16 T=3h ratio_var", st.ratio_var, 1.19, 0.15, false);
    }
    return r;
}

inline CriterionResult mrt_olp_ratio(const Options &opt)
{
    CriterionResult r{2, "MRT/OLP mean-energy ratio at r=1.5, c=0.5", {}, {}};
    const double gamma = units::rate_to_sinr(1.5);
    // Independent arithmetic: eta_OLP = 1 - c gamma/(1+gamma), eta_MRT = 1 - c gamma.
    const double analytic = (1.0 - 0.5 * gamma / (1.0 + gamma)) / (1.0 - 0.5 * gamma);
    ExperimentConfig base = table_one(32, 12.0, opt);
    TheoryInputs in = theory_inputs(base);
    const double eps_olp = scheme_theory(Scheme::Olp, in).law.epsilon_j;
    const double eps_mrt = scheme_theory(Scheme::Mrt, in).law.epsilon_j;
    const double theory_ratio = eps_mrt / eps_olp;
    r.within("theory ratio / analytic eta ratio", theory_ratio / analytic, 1.0, 0.005);
    r.within("theory ratio / 7.89", theory_ratio / 7.89, 1.0, 0.005);
    ExperimentConfig olp = base, mrt = base;
    olp.seed = derive_seed(opt.seed, 201);
    mrt.seed = derive_seed(opt.seed, 202);
    mrt.scheme = Scheme::Mrt;
    const double sim_ratio = run_ensemble(mrt).mean_j / run_ensemble(olp).mean_j;
    r.within("FAST ratio / analytic eta ratio", sim_ratio / analytic, 1.0, 0.03);
    r.within("theory ratio / 7.92 (reported value)", theory_ratio / 7.92, 1.0, 0.01, false);
    r.note("analytic eta_OLP/eta_MRT = " + fmt(analytic, 8) + ", theory = " + fmt(theory_ratio, 8) +
           ", FAST = " + fmt(sim_ratio, 6));
    return r;
}

inline CriterionResult finite_n_convergence(const Options &opt)
{
    CriterionResult r{3, "Finite-N convergence of OLP multipliers (EXACT, c=0.5, 50 instances)", {}, {}};
    const CellGeometry geom(500.0);
    const PathlossModel model = PathlossModel::from_db(4.0, 25.0, -93.0);
    const double noise = units::dbm_to_watts(-97.8);
    std::vector<double> err;
    double worst_sinr = 0.0;
    for (std::size_t n : {32u, 64u, 128u})
    {
        const std::size_t k = n / 2;
        const SinrTargets t = SinrTargets::uniform(k, 1.5);
        const double eta = eta_for(Scheme::Olp, 0.5, t.gamma);
        std::vector<double> per_instance(50);
        std::vector<double> sinr_err(50);
        parallel_for(50, opt.threads, [&](std::size_t i) {
            Rng rng = make_rng(opt.seed, 3000 + 100 * n + i);
            const auto pos = sample_initial_positions(k, geom, rng);
            const ChannelMatrix h = assemble_channels(pos, draw_fading(static_cast<Eigen::Index>(n),
                                                                        static_cast<Eigen::Index>(k), rng),
                                                      model);
            const PrecoderSolution s = solve_olp(h, t, noise);
            std::vector<double> rel(k);
            double se = 0.0;
            for (std::size_t u = 0; u < k; ++u)
            {
                const double bar = asymptotic_lambda(t.gamma[u], h.attenuation[u], eta);
                rel[u] = std::abs((*s.multipliers)[u] - bar) / bar;
                se = std::max(se, std::abs(s.achieved_sinr[u] - t.gamma[u]) / t.gamma[u]);
            }
            per_instance[i] = stats::median(rel);
            sinr_err[i] = se;
        });
        err.push_back(stats::mean(per_instance));
        for (double e : sinr_err)
            worst_sinr = std::max(worst_sinr, e);
        r.note("N=" + std::to_string(n) + ": mean median |lambda* - lambda_bar|/lambda_bar = " + fmt(err.back(), 4));
    }
    r.below("error(N=64) - error(N=32)", err[1] - err[0], 0.0);
    r.below("error(N=128) - error(N=64)", err[2] - err[1], 0.0);
    r.below("error at N=128", err[2], 0.05);
    r.below("max relative SINR error", worst_sinr, 1e-6);
    return r;
}

inline CriterionResult zf_user_power(const Options &opt)
{
    CriterionResult r{4, "ZF per-user powers approach gamma sigma^2 (c=0.5)", {}, {}};
    const CellGeometry geom(500.0);
    const PathlossModel model = PathlossModel::from_db(4.0, 25.0, -93.0);
    const double noise = units::dbm_to_watts(-97.8);
    std::vector<double> err;
    for (std::size_t n : {32u, 64u, 128u})
    {
        const std::size_t k = n / 2;
        const SinrTargets t = SinrTargets::uniform(k, 1.5);
        std::vector<double> e(20), total_ratio(20);
        parallel_for(20, opt.threads, [&](std::size_t i) {
            Rng rng = make_rng(opt.seed, 4000 + 100 * n + i);
            const auto pos = sample_initial_positions(k, geom, rng);
            const ChannelMatrix h = assemble_channels(pos, draw_fading(static_cast<Eigen::Index>(n),
                                                                        static_cast<Eigen::Index>(k), rng),
                                                      model);
            const PrecoderSolution s = exact_slot_solution(h, h, t, Scheme::Zf, noise, 0.5);
            double acc = 0.0;
            for (std::size_t u = 0; u < k; ++u)
                acc += std::abs(s.canonical_powers[u] - t.gamma[u] * noise) / (t.gamma[u] * noise);
            e[i] = acc / static_cast<double>(k);
            total_ratio[i] = s.total_power / asymptotic_power(Scheme::Zf, 0.5, t.gamma, h.attenuation, noise);
        });
        err.push_back(stats::mean(e));
        r.note("N=" + std::to_string(n) + ": mean |p_k - gamma sigma^2|/(gamma sigma^2) = " + fmt(err.back(), 3) +
               " (canonical H(H^H H)^{-1} scaling); total power / deterministic equivalent = " +
               fmt(stats::mean(total_ratio), 5));
    }
    r.below("error at N=128", err[2], 0.10);
    r.below("error(N=64) - error(N=32)", err[1] - err[0], 1e-12);
    r.below("error(N=128) - error(N=64)", err[2] - err[1], 1e-12);
    return r;
}

inline CriterionResult theta_series(const Options &)
{
    CriterionResult r{5, "Theta series truncation and closed forms", {}, {}};
    const PathlossModel m4 = PathlossModel::from_db(4.0, 25.0, -93.0);
    const PathlossModel m6 = PathlossModel::from_db(6.0, 25.0, -93.0);
    const double radius = 500.0;
    const WalkParams walk(50.0, 30.0);
    const double d = walk.diffusion_m2_per_s();
    for (double hours : {3.0, 12.0, 24.0})
    {
        const double t = units::hours_to_seconds(hours);
        ThetaOptions o50, o200;
        o50.terms = 50;
        o50.extend = false;
        o200.terms = 200;
        o200.extend = false;
        const double a = theta(m4, radius, d, t, o50).value;
        const double b = theta(m4, radius, d, t, o200).value;
        r.below("T=" + fmt(hours) + "h |Theta50 - Theta200|/Theta200", std::abs(a - b) / b, 1e-6);
    }
    const double t12 = units::hours_to_seconds(12.0);
    ThetaOptions quad;
    quad.terms = 100;
    quad.extend = false;
    const double th_generic = theta(m4, radius, d, t12, quad).value;
    const double th_closed = omega_beta4(m4, radius, d, t12, 100) * std::pow(radius, 8);
    r.below("beta=4 |Theta(quadrature) - Omega R^8| / Theta", std::abs(th_generic - th_closed) / th_closed, 1e-8);

    const std::vector<double> gamma(32, units::rate_to_sinr(1.5));
    const double noise = units::dbm_to_watts(-97.8);
    const double eta = eta_for(Scheme::Olp, 0.5, gamma);
    const double eps_g = energy_mean(0.5, gamma, noise, eta, m4, CellGeometry(radius), t12);
    const double eps_c = energy_mean_beta4(0.5, gamma[0], noise, eta, m4, radius, t12);
    r.below("beta=4 epsilon closed form vs generic", std::abs(eps_g - eps_c) / eps_c, 1e-10);
    const double sig_g = energy_variance(0.5, gamma, noise, eta, th_generic, radius, d, t12);
    const double sig_c =
        energy_variance_beta4(0.5, gamma[0] * gamma[0], noise, eta, omega_beta4(m4, radius, d, t12, 100), radius, d, t12);
    r.below("beta=4 Sigma closed form vs generic", std::abs(sig_g - sig_c) / sig_c, 1e-8);

    const auto kappa = specfun::j1_zeros(50);
    const auto q6 = phi_coefficients(m6, radius, kappa);
    const auto c6 = phi_closed_form(m6, radius, kappa);
    double worst = 0.0;
    for (std::size_t i = 0; i < kappa.count(); ++i)
        worst = std::max(worst, std::abs(q6[i] - c6[i]) / std::abs(c6[i]));
    r.below("beta=6 max |phi(quadrature) - phi(closed)| / |phi|, i<=50", worst, 1e-8);
    return r;
}

inline CriterionResult mobility_cross_oracle(const Options &opt)
{
    CriterionResult r{6, "Mobility covariance: Monte Carlo vs (T R^2/D) Theta", {}, {}};
    const CellGeometry geom(500.0);
    const PathlossModel model = PathlossModel::from_db(4.0, 25.0, -93.0);
    const WalkParams walk(50.0, 30.0);
    const double d = walk.effective_diffusion_m2_per_s();
    std::vector<IntegratedCovariance> est;
    std::vector<double> horizons;
    for (double scaled : {0.1, 0.5, 2.0})
    {
        const double t = scaled * geom.radius_m * geom.radius_m / d;
        const IntegratedCovariance mc =
            integrated_covariance_conditional(walk, geom, model, t, 2000, 8, derive_seed(opt.seed, 600 + static_cast<std::uint64_t>(10 * scaled)));
        const double th = integrated_covariance_theory(model, geom, d, t);
        r.within("DT/R^2=" + fmt(scaled) + " MC / theory", mc.value / th, 1.0, 0.05);
        r.note("DT/R^2=" + fmt(scaled) + ": MC standard error / theory = " + fmt(mc.standard_error / th, 3));
        est.push_back(mc);
        horizons.push_back(t);

        const IntegratedCovariance st = integrated_covariance_stationary(
            walk, geom, model, t, 16000, derive_seed(opt.seed, 650 + static_cast<std::uint64_t>(10 * scaled)));
        const double th_st = integrated_covariance_theory(model, geom, d, t, TimeWeight::Stationary);
        r.note("DT/R^2=" + fmt(scaled) + ": fresh-start total variance / stationary series = " + fmt(st.value / th_st, 4) +
               ", / conditional series = " + fmt(st.value / th, 4));
    }
    const DiffusionCalibration cal = calibrate_diffusion_factor(est, horizons, walk, geom, model);
    r.within("calibrated diffusion factor (nominal 1)", cal.factor, 1.0, 0.1, false);
    return r;
}

inline CriterionResult gaussianity(const Options &opt)
{
    CriterionResult r{7, "Gaussianity of E_T (FAST, K=64, T=12h, 1000 trials)", {}, {}};
    ExperimentConfig c = table_one(64, 12.0, opt);
    c.seed = derive_seed(opt.seed, 700);
    const EnsembleStats st = run_ensemble(c);
    const OutageComparison cmp = compare_outage(st, c.horizon_s);
    r.above("KS p-value", st.ks_pvalue, 0.01);
    r.below("CCDF sup-distance", cmp.sup_distance, 0.05);
    r.note("KS statistic = " + fmt(st.ks_stat, 4) + ", ratio_var = " + fmt(st.ratio_var, 4));
    return r;
}

inline CriterionResult variance_scaling(const Options &opt)
{
    CriterionResult r{8, "Variance scaling in K (mobility 1/K, fading 1/K^2)", {}, {}};
    ExperimentConfig c = table_one(16, 3.0, opt);
    c.seed = derive_seed(opt.seed, 800);
    const std::vector<std::size_t> ks{8, 16, 32, 64};
    const ScalingProbe mob = mobility_variance_probe(c, ks);
    r.within("mobility-induced energy variance slope", mob.fit.slope, -1.0, 0.3);
    const ScalingProbe fad = fading_variance_probe(c, ks, 50, 32);
    r.within("fading-induced slot power variance slope", fad.fit.slope, -2.0, 0.3);
    std::string v1, v2;
    for (std::size_t i = 0; i < ks.size(); ++i)
    {
        v1 += " " + fmt(mob.variances[i], 4);
        v2 += " " + fmt(fad.variances[i], 4);
    }
    r.note("Var[E_T] (J^2) for K=8,16,32,64:" + v1);
    r.note("Var[P] (W^2) for K=8,16,32,64:" + v2);
    return r;
}

inline CriterionResult planner_checks(const Options &)
{
    CriterionResult r{9, "Planner: battery/outage round trip and optimal radius", {}, {}};
    const EnergyLaw law{1.0e5, 4.0e9, 32};
    double worst = 0.0;
    for (double chi : {0.1, 0.01, 0.001})
        worst = std::max(worst, std::abs(outage_probability(battery_level(law, chi), law) - chi));
    r.below("max |Pr(E_T > battery(chi)) - chi|", worst, 1e-10);
    const std::vector<double> gamma(32, units::rate_to_sinr(1.5));
    RadiusProblem p{PathlossModel::from_db(4.0, 25.0, -93.0),
                    0.5,
                    mean_of(gamma),
                    units::dbm_to_watts(-97.8),
                    eta_for(Scheme::Olp, 0.5, gamma),
                    units::hours_to_seconds(12.0),
                    18.0};
    const RadiusPlan plan = optimal_cell_radius(p);
    r.below("|R*(closed) - R*(golden)| / R*", std::abs(*plan.closed_form_m - plan.numeric_m) / *plan.closed_form_m,
            1e-3);
    r.note("R* = " + fmt(*plan.closed_form_m, 8) + " m (closed form), " + fmt(plan.numeric_m, 8) + " m (golden section)");
    return r;
}

inline CriterionResult imperfect_csi(const Options &opt)
{
    CriterionResult r{10, "Imperfect CSI (FAST, K=32, T=12h, ZF and RZF)", {}, {}};
    for (Scheme s : {Scheme::Zf, Scheme::RzfStatistical})
        for (double tau2 : {0.05, 0.15})
        {
            ExperimentConfig c = table_one(32, 12.0, opt);
            c.scheme = s;
            c.tau.assign(c.k, std::sqrt(tau2));
            c.seed = derive_seed(opt.seed, 1000 + static_cast<std::uint64_t>(100 * tau2) + (s == Scheme::Zf ? 0 : 50));
            const EnsembleStats st = run_ensemble(c);
            const std::string tag = display_name(s) + " tau^2=" + fmt(tau2);
            r.within(tag + " ratio_mean", st.ratio_mean, 1.004, 0.01);
            r.within(tag + " ratio_var", st.ratio_var, 1.0428, 0.12);
            ExperimentConfig perfect = c;
            perfect.tau.clear();
            const double eps_perfect = scheme_theory(s, theory_inputs(perfect)).law.epsilon_j;
            r.above(tag + " epsilon' / epsilon(perfect CSI)", st.theory->law.epsilon_j / eps_perfect, 1.0 + 1e-12);
        }
    return r;
}

using CriterionFn = std::function<CriterionResult(const Options &)>;

inline std::vector<CriterionFn> criteria()
{
    return {energy_table, mrt_olp_ratio, finite_n_convergence, zf_user_power,   theta_series,
            mobility_cross_oracle, gaussianity, variance_scaling,   planner_checks, imperfect_csi};
}

inline void print(std::ostream &os, const CriterionResult &r)
{
    os << (r.passed() ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.title << '\n';
    for (const auto &c : r.checks)
    {
        os << "      " << (c.passed() ? "ok  " : (c.gated ? "MISS" : "off ")) << (c.gated ? "" : " (info)") << ' '
           << c.label << " = " << fmt(c.value, 6);
        if (std::isfinite(c.lo) && std::isfinite(c.hi))
            os << "  in [" << fmt(c.lo, 6) << ", " << fmt(c.hi, 6) << "]";
        else if (std::isfinite(c.hi))
            os << "  <= " << fmt(c.hi, 6);
        else
            os << "  >= " << fmt(c.lo, 6);
        os << '\n';
    }
    for (const auto &n : r.notes)
        os << "      note " << n << '\n';
}

/// Runs the suite; returns the number of failed criteria.
inline int run_all(std::ostream &os, const Options &opt, const std::vector<int> &only = {})
{
    int failed = 0;
    const auto all = criteria();
    for (std::size_t i = 0; i < all.size(); ++i)
    {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            continue;
        CriterionResult res;
        try
        {
            res = all[i](opt);
        }
        catch (const std::exception &e)
        {
            res.id = id;
            res.title = "criterion raised an error";
            res.checks.push_back({std::string("exception: ") + e.what(), 1.0, 0.0, 0.0, true});
        }
        print(os, res);
        os.flush();
        if (!res.passed())
            ++failed;
    }
    return failed;
}

} // namespace mobenergy::validation

#endif // MOBENERGY_VALIDATION_HPP
