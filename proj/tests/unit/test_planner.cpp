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

#include "mobenergy/planner.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace mobenergy;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
const double noise = units::dbm_to_watts(-97.8);
const PathlossModel beta4 = PathlossModel::from_db(4.0, 25.0, -93.0);
const double g15 = std::pow(2.0, 1.5) - 1.0;

RadiusProblem table_problem(double overhead)
{
    RadiusProblem p{beta4, 0.5, g15, noise, 1.0 - 0.5 * g15 / (1.0 + g15), units::hours_to_seconds(12.0), overhead};
    return p;
}

// Energy per area with the disc average done by quadrature.
double area_oracle(double radius, const RadiusProblem &p)
{
    const double m1 = oracle::disc_average([&](double r, double) { return 1.0 / p.model.at_distance(r); }, radius, 40,
                                           8, 4);
    const double eps = p.horizon_s * (p.c * p.noise_w / p.eta) * p.gbar * m1;
    return (eps + p.overhead_w * p.horizon_s) / (radius * radius);
}

// Log-spaced grid search followed by a fine local grid.
double grid_minimum(const std::function<double(double)> &f, double lo, double hi)
{
    double best = lo, fbest = f(lo);
    const int n = 400;
    for (int i = 0; i <= n; ++i)
    {
        const double r = lo * std::pow(hi / lo, static_cast<double>(i) / n);
        const double v = f(r);
        if (v < fbest)
            best = r, fbest = v;
    }
    const double step = std::pow(hi / lo, 1.0 / n);
    const double a = best / step, b = best * step;
    for (int i = 0; i <= n; ++i)
    {
        const double r = a + (b - a) * i / n;
        const double v = f(r);
        if (v < fbest)
            best = r, fbest = v;
    }
    return best;
}
} // namespace

TEST_CASE("battery level", "[planner]")
{
    const EnergyLaw law{4.2e5, 3.0e10, 32};
    CHECK_THAT(battery_level(law, 0.5), WithinAbs(law.epsilon_j, 1e-6));
    CHECK_THAT(battery_level(law, 0.01), WithinRel(law.epsilon_j + 2.3263478740 * law.stddev(), 1e-9));
    for (double chi : {1e-6, 1e-3, 0.05, 0.3, 0.9})
    {
        const double e = battery_level(law, chi);
        CHECK_THAT(e, WithinRel(law.epsilon_j + oracle::q_inv_bisect(chi) * law.stddev(), 1e-9));
        CHECK_THAT(outage_probability(e, law), WithinRel(chi, 1e-10));
    }
    CHECK_THROWS_AS(battery_level(law, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(battery_level(law, 1.0), std::invalid_argument);
}

TEST_CASE("battery level is monotone in its inputs", "[planner]")
{
    const EnergyLaw base{4.2e5, 3.0e10, 32};
    const double e = battery_level(base, 0.01);
    CHECK(battery_level(EnergyLaw{4.2e5, 6.0e10, 32}, 0.01) > e);
    CHECK(battery_level(EnergyLaw{4.2e5, 3.0e10, 64}, 0.01) < e);
    CHECK(battery_level(base, 0.001) > e);
    CHECK(battery_level(base, 0.1) < e);
    CHECK(battery_level(EnergyLaw{5.0e5, 3.0e10, 32}, 0.01) > e);
}

TEST_CASE("closed-form radius", "[planner]")
{
    // No overhead: xbar ((beta + 2)/(beta - 2))^{1/beta}.
    const auto p0 = table_problem(0.0);
    CHECK_THAT(optimal_radius_closed_form(p0), WithinRel(25.0 * std::pow(3.0, 0.25), 1e-14));

    for (double overhead : {0.0, 1.0, 18.0})
    {
        const auto p = table_problem(overhead);
        const double r = optimal_radius_closed_form(p);
        const double grid = grid_minimum([&](double x) { return area_oracle(x, p); }, 25.0, 2500.0);
        CHECK_THAT(r, WithinRel(grid, 1e-3));
        CHECK_THAT(energy_per_area(r, p), WithinRel(area_oracle(r, p), 1e-9));
    }

    // More fixed power pushes the optimum out; a better precoder (higher eta) too.
    CHECK(optimal_radius_closed_form(table_problem(18.0)) > optimal_radius_closed_form(table_problem(1.0)));
    auto better = table_problem(18.0);
    better.eta = 1.0;
    CHECK(optimal_radius_closed_form(better) > optimal_radius_closed_form(table_problem(18.0)));
}

TEST_CASE("numeric radius agrees and the objective is unimodal", "[planner]")
{
    const auto p = table_problem(18.0);
    const auto plan = optimal_cell_radius(p);
    REQUIRE(plan.closed_form_m.has_value());
    CHECK_FALSE(plan.numeric_fallback);
    CHECK_THAT(plan.numeric_m, WithinRel(*plan.closed_form_m, 1e-3));
    CHECK(plan.radius_m == *plan.closed_form_m);

    // Decreasing then increasing on a log grid.
    int turns = 0;
    double prev = energy_per_area(25.0, p);
    bool falling = true;
    for (int i = 1; i <= 200; ++i)
    {
        const double v = energy_per_area(25.0 * std::pow(100.0, i / 200.0), p);
        if (falling && v > prev)
            falling = false, ++turns;
        else if (!falling && v < prev)
            ++turns;
        prev = v;
    }
    CHECK(turns == 1);
}

TEST_CASE("numeric fallback when beta <= 2", "[planner]")
{
    auto p = table_problem(18.0);
    p.model = PathlossModel::from_db(2.0, 25.0, -93.0);
    CHECK_THROWS_AS(optimal_radius_closed_form(p), std::domain_error);
    const auto plan = optimal_cell_radius(p);
    CHECK(plan.numeric_fallback);
    CHECK_FALSE(plan.closed_form_m.has_value());
    CHECK(plan.radius_m == plan.numeric_m);
    CHECK(plan.radius_m >= 25.0);
    CHECK(plan.radius_m <= 2500.0);
}

TEST_CASE("golden section", "[planner]")
{
    CHECK_THAT(golden_section_minimize([](double x) { return (std::log(x) - 2.0) * (std::log(x) - 2.0); }, 1.0, 100.0),
               WithinRel(std::exp(2.0), 1e-8));
    CHECK_THROWS_AS(golden_section_minimize([](double x) { return x; }, 2.0, 1.0), std::invalid_argument);
    auto bad = table_problem(18.0);
    bad.eta = 0.0;
    CHECK_THROWS_AS(energy_per_area(100.0, bad), std::invalid_argument);
}
