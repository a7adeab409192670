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

#include <catch_amalgamated.hpp>

#include "mobenergy/simkit.hpp"
#include "support/oracles.hpp"

#include <atomic>
#include <cmath>
#include <set>

using namespace mobenergy;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
ExperimentConfig small(Scheme scheme, Mode mode, std::size_t k, std::size_t n, double hours, std::size_t trials)
{
    ExperimentConfig cfg;
    cfg.scheme = scheme;
    cfg.mode = mode;
    cfg.k = k;
    cfg.n = n;
    cfg.rates.assign(k, 1.0);
    cfg.horizon_s = units::hours_to_seconds(hours);
    cfg.trials = trials;
    cfg.seed = 99;
    cfg.threads = 1;
    return cfg;
}
} // namespace

TEST_CASE("mode strings", "[simkit]")
{
    CHECK(mode_from_string("exact") == Mode::Exact);
    CHECK(mode_from_string("fast") == Mode::Fast);
    CHECK(to_string(Mode::Exact) == "exact");
    CHECK(to_string(Mode::Fast) == "fast");
    CHECK_THROWS_AS(mode_from_string("slow"), std::invalid_argument);
}

TEST_CASE("config validation", "[simkit]")
{
    auto cfg = small(Scheme::Olp, Mode::Fast, 4, 8, 1.0, 4);
    CHECK_NOTHROW(cfg.validate());
    auto wide = cfg;
    wide.k = 9;
    wide.rates.assign(9, 1.0);
    CHECK_THROWS_AS(wide.validate(), std::invalid_argument);
    auto slot = cfg;
    slot.slot_s = 45.0;
    CHECK_THROWS_AS(slot.validate(), std::invalid_argument);
    auto csi = cfg;
    csi.tau.assign(4, 0.2);
    CHECK_THROWS_AS(csi.validate(), std::invalid_argument);
    csi.scheme = Scheme::Zf;
    CHECK_NOTHROW(csi.validate());
    CHECK(cfg.steps_per_slot() == 1);
    cfg.slot_s = 90.0;
    CHECK(cfg.steps_per_slot() == 3);
}

TEST_CASE("zero horizon gives zero energy", "[simkit]")
{
    for (Mode m : {Mode::Fast, Mode::Exact})
    {
        auto cfg = small(Scheme::Zf, m, 4, 8, 0.0, 2);
        CHECK(run_trial(cfg, 0).energy_j == 0.0);
    }
}

TEST_CASE("static users in fast mode", "[simkit]")
{
    auto cfg = small(Scheme::Olp, Mode::Fast, 6, 12, 0.5, 3);
    cfg.walk = WalkParams(0.0, 30.0);
    cfg.horizon_s = 1000.0; // 33 full slots and a 10 s remainder
    cfg.record_slots = true;
    for (std::uint64_t t = 0; t < 3; ++t)
    {
        // Replay the initial positions from the trial's mobility stream.
        Rng mobility(derive_seed(cfg.seed, 2 * t));
        const auto pos = sample_initial_positions(cfg.k, cfg.geometry, mobility);
        const double g = std::pow(2.0, 1.0) - 1.0;
        double inv = 0.0;
        for (const auto &p : pos)
            inv += g / (2.0 * cfg.model.l_xbar / (1.0 + std::pow(p.norm() / 25.0, 4.0)));
        inv /= static_cast<double>(cfg.k);
        const double c = 0.5;
        const double eta = 1.0 - c * g / (1.0 + g);
        const double power = c * cfg.noise_w * inv / eta;

        const auto r = run_trial(cfg, t);
        CHECK_THAT(r.energy_j, WithinRel(1000.0 * power, 1e-12));
        REQUIRE(r.slots.size() == 34);
        CHECK(r.slots.back().duration_s == Catch::Approx(10.0));
        for (const auto &s : r.slots)
            CHECK(s.total_power_w == r.slots.front().total_power_w);
    }
}

TEST_CASE("determinism across runs and thread counts", "[simkit]")
{
    auto cfg = small(Scheme::Olp, Mode::Fast, 8, 16, 0.5, 12);
    const auto a = run_ensemble(cfg);
    const auto b = run_ensemble(cfg);
    cfg.threads = 3;
    const auto c = run_ensemble(cfg);
    CHECK(a.energies_j == b.energies_j);
    CHECK(a.energies_j == c.energies_j);
    cfg.seed = 100;
    CHECK(run_ensemble(cfg).energies_j != a.energies_j);

    auto ex = small(Scheme::Zf, Mode::Exact, 4, 8, 0.1, 2);
    CHECK(run_trial(ex, 1).energy_j == run_trial(ex, 1).energy_j);
}

TEST_CASE("exact mode meets every SINR target", "[simkit]")
{
    for (Scheme s : {Scheme::Olp, Scheme::Mrt, Scheme::Zf, Scheme::RzfStatistical, Scheme::RzfClassical})
    {
        auto cfg = small(s, Mode::Exact, 4, 8, 0.1, 2);
        cfg.record_slots = true;
        const auto r = run_trial(cfg, 0);
        REQUIRE_FALSE(r.slots.empty());
        for (const auto &slot : r.slots)
        {
            CHECK_THAT(slot.min_sinr, WithinRel(1.0, 1e-6));
            CHECK_THAT(slot.max_sinr, WithinRel(1.0, 1e-6));
        }
    }
}

TEST_CASE("exact and fast zero-forcing agree in mean", "[simkit]")
{
    // For Rayleigh fading E[(W^H W)^{-1}] = I/(N - K), so the exact ZF slot power
    // has the deterministic-equivalent value as its fading mean. Both modes share
    // the mobility stream, so the per-trial difference isolates the fading.
    auto ex = small(Scheme::Zf, Mode::Exact, 4, 12, 0.5, 40);
    auto fa = ex;
    fa.mode = Mode::Fast;
    const auto e = run_ensemble(ex);
    const auto f = run_ensemble(fa);
    std::vector<double> diff(e.energies_j.size());
    for (std::size_t i = 0; i < diff.size(); ++i)
        diff[i] = e.energies_j[i] / f.energies_j[i] - 1.0;
    const auto [m, v] = oracle::moments(diff);
    const double se = std::sqrt(v / static_cast<double>(diff.size()));
    CHECK(std::abs(m) < 3.0 * se + 1e-3);
}

TEST_CASE("ensemble statistics and ccdf", "[simkit]")
{
    auto cfg = small(Scheme::Olp, Mode::Fast, 16, 32, 1.0, 400);
    const auto st = run_ensemble(cfg);
    REQUIRE(st.theory.has_value());
    const auto [m, v] = oracle::moments(st.energies_j);
    CHECK_THAT(st.mean_j, WithinRel(m, 1e-12));
    CHECK_THAT(st.variance_j2, WithinRel(v, 1e-9));
    CHECK_THAT(st.ratio_mean, WithinAbs(1.0, 0.05));
    CHECK(st.ks_pvalue >= 0.0);
    CHECK(st.ks_pvalue <= 1.0);

    const double t = cfg.horizon_s;
    const auto grid = default_ccdf_grid(st, t);
    const auto rows = empirical_ccdf(st, t, grid);
    REQUIRE(rows.size() == grid.size());
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        CHECK(rows[i].empirical <= rows[i - 1].empirical);
        CHECK(rows[i].theoretical <= rows[i - 1].theoretical);
    }
    const auto mid = empirical_ccdf(st, t, {st.theory->law.epsilon_j / t});
    CHECK_THAT(mid[0].theoretical, WithinAbs(0.5, 1e-12));
    CHECK_THAT(mid[0].empirical, WithinAbs(0.5, 0.1));
    CHECK(compare_outage(st, t).sup_distance < 0.2);
    CHECK_THROWS_AS(empirical_ccdf(st, 0.0, grid), std::invalid_argument);

    auto one = cfg;
    one.trials = 1;
    CHECK_THROWS_AS(run_ensemble(one), std::invalid_argument);
}

TEST_CASE("mobility variance falls as 1/K", "[simkit]")
{
    auto cfg = small(Scheme::Olp, Mode::Fast, 8, 16, 1.0, 300);
    const auto probe = mobility_variance_probe(cfg, {8, 16, 32, 64});
    REQUIRE(probe.variances.size() == 4);
    CHECK_THAT(probe.fit.slope, WithinAbs(-1.0, 0.3));
}

TEST_CASE("fading variance probe", "[simkit]")
{
    auto cfg = small(Scheme::Zf, Mode::Exact, 4, 8, 1.0, 2);
    const auto probe = fading_variance_probe(cfg, {4, 8}, 50, 2);
    REQUIRE(probe.variances.size() == 2);
    for (double v : probe.variances)
        CHECK(v > 0.0);
    CHECK(std::isfinite(probe.fit.slope));
    CHECK_THROWS_AS(fading_variance_probe(cfg, {4}, 1, 1), std::invalid_argument);
}

TEST_CASE("parallel_for", "[simkit]")
{
    for (unsigned threads : {1u, 4u})
    {
        std::vector<std::atomic<int>> hits(100);
        parallel_for(100, threads, [&](std::size_t i) { hits[i]++; });
        for (const auto &h : hits)
            CHECK(h.load() == 1);
    }
    // The lowest failing index wins, whatever the scheduling.
    try
    {
        parallel_for(50, 4, [](std::size_t i) {
            if (i % 7 == 3)
                throw std::runtime_error(std::to_string(i));
        });
        FAIL("no exception");
    }
    catch (const std::runtime_error &e)
    {
        CHECK(std::string(e.what()) == "3");
    }
    parallel_for(0, 2, [](std::size_t) { FAIL("called"); });
}
