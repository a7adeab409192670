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

#include "mobenergy/specfun.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace mobenergy::specfun;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("bessel_j at the origin", "[specfun]")
{
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(1, 0.0) == 0.0);
    CHECK(bessel_j(5, 0.0) == 0.0);
}

TEST_CASE("bessel_j against the power series and the integral representation", "[specfun]")
{
    CHECK_THAT(bessel_j(0, 3.8317), WithinAbs(oracle::bessel_series(0, 3.8317), 1e-13));
    CHECK_THAT(bessel_j(0, 3.8317), WithinAbs(-0.4028, 5e-5));

    for (unsigned n : {0u, 1u, 2u, 5u, 10u})
        for (double x : {0.1, 1.0, 2.5, 7.0, 12.3, 19.9})
            CHECK_THAT(bessel_j(n, x), WithinAbs(oracle::bessel_series(n, x), 1e-12));

    // Large arguments: the series loses precision, the trapezoid form does not.
    for (unsigned n : {0u, 1u, 3u})
        for (double x : {35.0, 100.0, 250.7, 400.0})
            CHECK_THAT(bessel_j(n, x), WithinAbs(oracle::bessel_integral(n, x), 1e-12));
}

TEST_CASE("bessel_j parity for negative arguments", "[specfun]")
{
    for (unsigned n : {0u, 1u, 2u, 3u})
        CHECK(bessel_j(n, -4.2) == ((n % 2) ? -bessel_j(n, 4.2) : bessel_j(n, 4.2)));
}

TEST_CASE("bessel_j_derivative matches a central difference", "[specfun]")
{
    for (unsigned m : {0u, 1u, 2u, 4u})
        for (double x : {0.7, 3.0, 9.5})
        {
            const double h = 1e-5;
            const double fd = (oracle::bessel_series(m, x + h) - oracle::bessel_series(m, x - h)) / (2 * h);
            CHECK_THAT(bessel_j_derivative(m, x), WithinAbs(fd, 1e-8));
        }
}

TEST_CASE("j1_zeros: first values by bisection on the series oracle", "[specfun]")
{
    const auto z = j1_zeros(3);
    REQUIRE(z.count() == 3);
    const double z1 = oracle::bisect([](double x) { return oracle::bessel_series(1, x); }, 3.0, 5.0);
    const double z2 = oracle::bisect([](double x) { return oracle::bessel_series(1, x); }, 6.0, 8.0);
    CHECK_THAT(z[0], WithinAbs(z1, 1e-12));
    CHECK_THAT(z[1], WithinAbs(z2, 1e-12));
    CHECK_THAT(z[0], WithinAbs(3.83171, 1e-5));
    CHECK_THAT(z[1], WithinAbs(7.01559, 1e-5));
    CHECK(z[0] < z[1]);
    CHECK(z[1] < z[2]);
}

TEST_CASE("j1_zeros invariants over 200 zeros", "[specfun]")
{
    const auto z = j1_zeros(200);
    REQUIRE(z.count() == 200);
    for (std::size_t i = 0; i < z.count(); ++i)
    {
        CHECK(z[i] > 0.0);
        CHECK(std::abs(bessel_j(1, z[i])) < 1e-12);
        if (i > 0)
            CHECK(z[i] > z[i - 1]);
        if (i >= 10)
            CHECK_THAT(z[i] - z[i - 1], WithinRel(std::numbers::pi, 0.05));
    }
    // No zero skipped: McMahon's estimate (i + 1/4) pi locates the i-th zero.
    for (std::size_t i = 0; i < z.count(); ++i)
        CHECK(std::abs(z[i] - (static_cast<double>(i + 1) + 0.25) * std::numbers::pi) < 0.1);
}

TEST_CASE("j1_zeros rejects a zero count", "[specfun]") { CHECK_THROWS_AS(j1_zeros(0), std::invalid_argument); }

TEST_CASE("bessel_j_derivative_zeros", "[specfun]")
{
    const auto z0 = bessel_j_derivative_zeros(0, 5);
    const auto j1 = j1_zeros(5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(z0[i] == j1[i]);
    for (unsigned m : {1u, 2u, 5u})
    {
        const auto z = bessel_j_derivative_zeros(m, 6);
        for (std::size_t i = 0; i < z.count(); ++i)
        {
            CHECK(std::abs(bessel_j_derivative(m, z[i])) < 1e-11);
            CHECK(z[i] > static_cast<double>(m) - 1e-12);
        }
    }
    // First zero of J_1' is 1.8411838.
    CHECK_THAT(bessel_j_derivative_zeros(1, 1)[0], WithinAbs(1.8411837813, 1e-9));
}

TEST_CASE("q_inv", "[specfun]")
{
    CHECK(q_inv(0.5) == 0.0);
    CHECK_THAT(q_inv(0.01), WithinAbs(oracle::q_inv_bisect(0.01), 1e-9));
    CHECK_THAT(q_inv(0.01), WithinAbs(2.3263, 1e-4));
    for (double p : {0.1, 0.01, 0.001})
        CHECK_THAT(q_function(q_inv(p)), WithinRel(p, 1e-12));
    for (double p : {0.9, 0.3, 1e-6})
        CHECK_THAT(q_inv(p), WithinAbs(oracle::q_inv_bisect(p), 1e-8));
    CHECK(q_inv(0.99) == Catch::Approx(-q_inv(0.01)).epsilon(1e-12));
    CHECK_THROWS_AS(q_inv(0.0), std::domain_error);
    CHECK_THROWS_AS(q_inv(1.0), std::domain_error);
}

TEST_CASE("q_function against quadrature", "[specfun]")
{
    for (double x : {-1.5, 0.0, 0.5, 2.0, 4.0})
        CHECK_THAT(q_function(x), WithinAbs(oracle::q_quadrature(x), 1e-12));
}
