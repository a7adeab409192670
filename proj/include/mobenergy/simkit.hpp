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

#ifndef MOBENERGY_SIMKIT_HPP
#define MOBENERGY_SIMKIT_HPP

#include "mobenergy/asymptotics.hpp"
#include "mobenergy/channel.hpp"
#include "mobenergy/energy.hpp"
#include "mobenergy/geometry.hpp"
#include "mobenergy/precoding.hpp"
#include "mobenergy/random.hpp"
#include "mobenergy/scheme.hpp"
#include "mobenergy/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mobenergy
{

/// EXACT solves the finite-N precoder every slot; FAST integrates the
/// deterministic-equivalent power c sigma^2 A(t) / eta (mobility only).
enum class Mode
{
    Exact,
    Fast,
};

inline std::string_view to_string(Mode m) { return m == Mode::Exact ? "exact" : "fast"; }

inline Mode mode_from_string(std::string_view s)
{
    if (s == "exact")
        return Mode::Exact;
    if (s == "fast")
        return Mode::Fast;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected exact|fast)");
}

struct ExperimentConfig
{
    CellGeometry geometry{500.0};
    WalkParams walk{50.0, 30.0};
    PathlossModel model = PathlossModel::from_db(4.0, 25.0, -93.0);
    std::size_t k = 32;
    std::size_t n = 64;
    std::vector<double> rates;   // one per user, bit/s/Hz
    double noise_w = units::dbm_to_watts(-97.8);
    Scheme scheme = Scheme::Olp;
    std::vector<double> tau;     // empty: perfect CSI
    double horizon_s = units::hours_to_seconds(12.0);
    double slot_s = 30.0;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    Mode mode = Mode::Fast;
    unsigned threads = 0;        // 0: hardware concurrency
    ThetaOptions theta;
    bool record_slots = false;

    double load() const { return static_cast<double>(k) / static_cast<double>(n); }

    SinrTargets targets() const { return SinrTargets::from_rates(rates); }

    std::vector<double> tau_or_zero() const { return tau.empty() ? std::vector<double>(k, 0.0) : tau; }

    bool perfect_csi() const
    {
        return std::all_of(tau.begin(), tau.end(), [](double t) { return t == 0.0; });
    }

    std::size_t steps_per_slot() const
    {
        const double r = slot_s / walk.interval_s;
        const double rn = std::round(r);
        if (rn < 1.0 || std::abs(r - rn) > 1e-9 * r)
            throw std::invalid_argument("slot duration must be a whole number of walk intervals");
        return static_cast<std::size_t>(rn);
    }

    void validate() const
    {
        if (k < 1 || n < 1)
            throw std::invalid_argument("users and antennas must be >= 1");
        if (k > n)
            throw std::invalid_argument("users must not exceed antennas (c = K/N <= 1)");
        if (rates.size() != k)
            throw std::invalid_argument("one rate per user required");
        if (!tau.empty() && tau.size() != k)
            throw std::invalid_argument("csi tau must be a single value or one per user");
        for (double t : tau)
            if (!(t >= 0.0 && t < 1.0))
                throw std::invalid_argument("csi tau must lie in [0, 1)");
        if (!perfect_csi() && scheme != Scheme::Zf && scheme != Scheme::RzfStatistical)
            throw std::invalid_argument("imperfect CSI is supported for zf and rzf only");
        if (!(horizon_s >= 0.0) || !(noise_w > 0.0))
            throw std::invalid_argument("horizon must be non-negative and noise positive");
        if (trials < 1)
            throw std::invalid_argument("trials must be >= 1");
        (void)steps_per_slot();
        (void)targets();
    }
};

struct SlotRecord
{
    std::size_t slot = 0;
    double duration_s = 0.0;
    double total_power_w = 0.0;
    double min_sinr = 0.0;
    double max_sinr = 0.0;
};

struct TrialResult
{
    double energy_j = 0.0;
    std::uint64_t seed = 0;
    std::vector<SlotRecord> slots; // filled when record_slots is set
};

/// Precoder for one slot. Directions come from `estimate`; powers are allocated
/// on the true channel so that every target is met (genie allocation when the
/// estimate is imperfect).
inline PrecoderSolution exact_slot_solution(const ChannelMatrix &truth, const ChannelMatrix &estimate,
                                            const SinrTargets &targets, Scheme scheme, double noise_w, double c)
{
    const std::string label = display_name(scheme);
    CMatrix dirs;
    switch (scheme)
    {
    case Scheme::Olp: return solve_olp(truth, targets, noise_w);
    case Scheme::Mrt: dirs = estimate.entries; break;
    case Scheme::Zf: dirs = zf_directions(estimate); break;
    case Scheme::RzfStatistical:
        dirs = heuristic_directions(estimate, scheme_alpha(scheme, truth.attenuation),
                                    optimal_rho_statistical(targets.gamma, c));
        break;
    case Scheme::RzfClassical:
    {
        const double rho = classical_rzf(truth.attenuation, targets.gamma, c, noise_w).rho_star;
        if (!(rho > 0.0))
            throw InfeasibleError(label, "non-positive optimal regularisation");
        dirs = heuristic_directions(estimate, scheme_alpha(scheme, truth.attenuation), rho);
        break;
    }
    }
    const std::vector<double> p = exact_power_allocation(truth, dirs, targets, noise_w, label);
    return build_solution(truth, dirs, p, noise_w);
}

/// Deterministic-equivalent power at the given positions.
class FastPower
{
  public:
    explicit FastPower(const ExperimentConfig &cfg)
        : cfg_(cfg), gamma_(cfg.targets().gamma)
    {
        if (cfg.scheme != Scheme::RzfClassical)
        {
            const EffectiveScheme eff = effective_scheme(cfg.scheme, cfg.load(), gamma_, cfg.tau_or_zero());
            eta_ = eff.eta;
            gamma_ = eff.gamma;
        }
    }

    double operator()(const std::vector<double> &attenuation) const
    {
        if (cfg_.scheme == Scheme::RzfClassical)
            return classical_rzf(attenuation, gamma_, cfg_.load(), cfg_.noise_w).pbar_w;
        return cfg_.load() * cfg_.noise_w * a_of_t(attenuation, gamma_) / eta_;
    }

  private:
    const ExperimentConfig &cfg_;
    std::vector<double> gamma_;
    double eta_ = 0.0;
};

/// One trial: E_T = sum over slots of P(slot) * duration, with the last slot
/// truncated at the horizon. Mobility and fading use separate streams so both
/// modes see the same trajectories for a given seed.
inline TrialResult run_trial(const ExperimentConfig &cfg, std::uint64_t trial_index)
{
    TrialResult out;
    out.seed = derive_seed(cfg.seed, 2 * trial_index);
    Rng mobility(out.seed);
    Rng fading(derive_seed(cfg.seed, 2 * trial_index + 1));

    const SinrTargets targets = cfg.targets();
    const FastPower fast(cfg);
    const CsiQuality quality{cfg.tau_or_zero()};
    const std::size_t steps = cfg.steps_per_slot();
    const std::size_t full = slot_count(cfg.horizon_s, cfg.slot_s);

    std::vector<Point> pos = sample_initial_positions(cfg.k, cfg.geometry, mobility);
    std::vector<double> att(cfg.k);
    for (std::size_t s = 0; s <= full; ++s)
    {
        const double dt = s < full ? cfg.slot_s : cfg.horizon_s - static_cast<double>(full) * cfg.slot_s;
        if (dt <= 0.0)
            break;
        for (std::size_t i = 0; i < cfg.k; ++i)
            att[i] = pathloss(pos[i], cfg.model);
        SlotRecord rec;
        rec.slot = s;
        rec.duration_s = dt;
        if (cfg.mode == Mode::Fast)
        {
            rec.total_power_w = fast(att);
            rec.min_sinr = rec.max_sinr = std::numeric_limits<double>::quiet_NaN();
        }
        else
        {
            const CMatrix w = draw_fading(static_cast<Eigen::Index>(cfg.n), static_cast<Eigen::Index>(cfg.k), fading);
            const ChannelMatrix truth = assemble_channels(pos, w, cfg.model);
            const ChannelMatrix estimate = quality.perfect() ? truth : corrupt_csi(truth, quality, fading);
            const PrecoderSolution sol =
                exact_slot_solution(truth, estimate, targets, cfg.scheme, cfg.noise_w, cfg.load());
            rec.total_power_w = sol.total_power;
            rec.min_sinr = *std::min_element(sol.achieved_sinr.begin(), sol.achieved_sinr.end());
            rec.max_sinr = *std::max_element(sol.achieved_sinr.begin(), sol.achieved_sinr.end());
        }
        out.energy_j += rec.total_power_w * dt;
        if (cfg.record_slots)
            out.slots.push_back(rec);
        if (s < full)
            for (auto &p : pos)
                for (std::size_t j = 0; j < steps; ++j)
                    p = step_walk(p, cfg.walk, cfg.geometry, mobility);
    }
    return out;
}

/// Runs body(i) for i in [0, count) on `threads` workers; the first failing
/// index (lowest i) is rethrown after all workers join.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body &&body)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::mutex mtx;
    std::size_t failed_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(mtx);
                if (i < failed_index)
                {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    if (threads == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);
}

struct EnsembleStats
{
    Mode mode = Mode::Fast;
    Scheme scheme = Scheme::Olp;
    std::size_t trials = 0;
    std::vector<double> energies_j; // by trial index
    double mean_j = 0.0;
    double variance_j2 = 0.0;
    std::optional<SchemeTheory> theory; // absent for classical RZF
    double ratio_mean = std::numeric_limits<double>::quiet_NaN(); // E[E_T] / epsilon
    double ratio_var = std::numeric_limits<double>::quiet_NaN();  // K Var[E_T] / Sigma
    double ks_stat = std::numeric_limits<double>::quiet_NaN();
    double ks_pvalue = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> sorted() const
    {
        std::vector<double> s = energies_j;
        std::sort(s.begin(), s.end());
        return s;
    }
};

inline TheoryInputs theory_inputs(const ExperimentConfig &cfg)
{
    return TheoryInputs{cfg.model,
                        cfg.geometry,
                        cfg.walk.effective_diffusion_m2_per_s(),
                        cfg.horizon_s,
                        cfg.k,
                        cfg.n,
                        cfg.targets().gamma,
                        cfg.tau_or_zero(),
                        cfg.noise_w,
                        cfg.theta};
}

inline EnsembleStats run_ensemble(const ExperimentConfig &cfg)
{
    cfg.validate();
    if (cfg.trials < 2)
        throw std::invalid_argument("run_ensemble: at least two trials required");
    EnsembleStats st;
    st.mode = cfg.mode;
    st.scheme = cfg.scheme;
    st.trials = cfg.trials;
    st.energies_j.assign(cfg.trials, 0.0);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) { st.energies_j[i] = run_trial(cfg, i).energy_j; });
    st.mean_j = stats::mean(st.energies_j);
    st.variance_j2 = stats::variance(st.energies_j);
    if (cfg.scheme != Scheme::RzfClassical && cfg.horizon_s > 0.0)
    {
        st.theory = scheme_theory(cfg.scheme, theory_inputs(cfg));
        const EnergyLaw &law = st.theory->law;
        st.ratio_mean = st.mean_j / law.epsilon_j;
        st.ratio_var = static_cast<double>(cfg.k) * st.variance_j2 / law.sigma_var;
        st.ks_stat = stats::ks_statistic(st.energies_j, [&](double x) { return clt_cdf(x, law); });
        st.ks_pvalue = stats::ks_pvalue(st.ks_stat, st.energies_j.size());
    }
    return st;
}

struct CcdfRow
{
    double alpha_w = 0.0;
    double empirical = 0.0;
    double theoretical = std::numeric_limits<double>::quiet_NaN();
};

/// Pr(E_T / T > alpha) on a grid, empirical and (when available) Gaussian.
inline std::vector<CcdfRow> empirical_ccdf(const EnsembleStats &st, double horizon_s, const std::vector<double> &grid_w)
{
    if (!(horizon_s > 0.0))
        throw std::invalid_argument("empirical_ccdf: horizon must be positive");
    const std::vector<double> s = st.sorted();
    std::vector<CcdfRow> rows;
    rows.reserve(grid_w.size());
    for (double a : grid_w)
    {
        CcdfRow r;
        r.alpha_w = a;
        const auto above = s.end() - std::upper_bound(s.begin(), s.end(), a * horizon_s);
        r.empirical = static_cast<double>(above) / static_cast<double>(s.size());
        if (st.theory)
            r.theoretical = outage_probability(a * horizon_s, st.theory->law);
        rows.push_back(r);
    }
    return rows;
}

/// Default plotting grid: mean +- 4 standard deviations of E_T / T.
inline std::vector<double> default_ccdf_grid(const EnsembleStats &st, double horizon_s, std::size_t points = 81)
{
    const double m = st.mean_j / horizon_s;
    const double sd = std::sqrt(st.variance_j2) / horizon_s;
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = m + sd * (-4.0 + 8.0 * static_cast<double>(i) / static_cast<double>(points - 1));
    return g;
}

struct OutageComparison
{
    std::vector<CcdfRow> rows;
    double sup_distance = 0.0; // over the grid
};

inline OutageComparison compare_outage(const EnsembleStats &st, double horizon_s)
{
    if (!st.theory)
        throw std::invalid_argument("compare_outage: no theoretical law for this scheme");
    OutageComparison out;
    out.rows = empirical_ccdf(st, horizon_s, default_ccdf_grid(st, horizon_s));
    for (const auto &r : out.rows)
        out.sup_distance = std::max(out.sup_distance, std::abs(r.empirical - r.theoretical));
    return out;
}

struct ScalingProbe
{
    std::vector<std::size_t> users;
    std::vector<double> variances;
    stats::LineFit fit;
};

/// Fading-only fluctuation: positions frozen, fading redrawn. For each K (N = K/c)
/// the variance of the exact slot power across `draws` fading draws is averaged
/// over `position_sets` independent position sets.
inline ScalingProbe fading_variance_probe(const ExperimentConfig &cfg, const std::vector<std::size_t> &users,
                                          std::size_t draws, std::size_t position_sets = 4)
{
    if (draws < 2 || position_sets < 1)
        throw std::invalid_argument("fading_variance_probe: need >= 2 draws and >= 1 position set");
    const double c = cfg.load();
    const double rate = stats::mean(cfg.rates);
    ScalingProbe out;
    out.users = users;
    for (std::size_t ui = 0; ui < users.size(); ++ui)
    {
        const std::size_t k = users[ui];
        const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(k) / c));
        const SinrTargets targets = SinrTargets::uniform(k, rate);
        std::vector<double> set_var(position_sets);
        parallel_for(position_sets, cfg.threads, [&](std::size_t p) {
            Rng rng = make_rng(cfg.seed, 1000003 * (ui + 1) + p);
            const std::vector<Point> pos = sample_initial_positions(k, cfg.geometry, rng);
            std::vector<double> power(draws);
            for (std::size_t d = 0; d < draws; ++d)
            {
                const CMatrix w = draw_fading(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k), rng);
                const ChannelMatrix h = assemble_channels(pos, w, cfg.model);
                power[d] = exact_slot_solution(h, h, targets, cfg.scheme, cfg.noise_w, c).total_power;
            }
            set_var[p] = stats::variance(power);
        });
        out.variances.push_back(stats::mean(set_var));
    }
    out.fit = stats::loglog_fit(std::vector<double>(users.begin(), users.end()), out.variances);
    return out;
}

/// Mobility-induced fluctuation: FAST-mode variance of E_T for each K (N = K/c).
inline ScalingProbe mobility_variance_probe(const ExperimentConfig &cfg, const std::vector<std::size_t> &users)
{
    const double c = cfg.load();
    const double rate = stats::mean(cfg.rates);
    ScalingProbe out;
    out.users = users;
    for (std::size_t k : users)
    {
        ExperimentConfig e = cfg;
        e.mode = Mode::Fast;
        e.k = k;
        e.n = static_cast<std::size_t>(std::llround(static_cast<double>(k) / c));
        e.rates.assign(k, rate);
        e.tau.clear();
        e.seed = derive_seed(cfg.seed, k);
        out.variances.push_back(run_ensemble(e).variance_j2);
    }
    out.fit = stats::loglog_fit(std::vector<double>(users.begin(), users.end()), out.variances);
    return out;
}

inline void write_slot_csv(std::ostream &os, const std::vector<SlotRecord> &slots, Scheme scheme)
{
    os << "slot,scheme,duration_s,total_power_w,min_sinr,max_sinr\n";
    os.precision(17);
    for (const auto &r : slots)
        os << r.slot << ',' << to_string(scheme) << ',' << r.duration_s << ',' << r.total_power_w << ','
           << r.min_sinr << ',' << r.max_sinr << '\n';
}

} // namespace mobenergy

#endif // MOBENERGY_SIMKIT_HPP
