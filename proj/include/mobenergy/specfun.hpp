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

#ifndef MOBENERGY_SPECFUN_HPP
#define MOBENERGY_SPECFUN_HPP

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mobenergy::specfun
{

/// J_n(x) for integer order n >= 0 and any finite real x.
/// Backed by boost::math::cyl_bessel_j (integer-order path, several times faster
/// than std::cyl_bessel_j at large x); negative arguments use J_n(-x) = (-1)^n J_n(x).
inline double bessel_j(unsigned order, double x)
{
    if (x == 0.0)
        return order == 0 ? 1.0 : 0.0;
    const double v = boost::math::cyl_bessel_j(static_cast<int>(order), std::abs(x));
    return (x < 0.0 && (order % 2u) == 1u) ? -v : v;
}

/// d/dx J_m(x) = J_{m-1}(x) - (m/x) J_m(x), with J_0' = -J_1.
inline double bessel_j_derivative(unsigned order, double x)
{
    if (order == 0)
        return -bessel_j(1, x);
    if (x == 0.0)
        return order == 1 ? 0.5 : 0.0;
    return bessel_j(order - 1, x) - (static_cast<double>(order) / x) * bessel_j(order, x);
}

/// Positive zeros of some Bessel-type function, strictly increasing.
struct BesselZeros
{
    std::vector<double> values;

    std::size_t count() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

namespace detail
{

// Bisection on a sign-changing bracket until the interval stops shrinking.
inline double bisect(const std::function<double(double)> &f, double lo, double hi, double flo)
{
    for (int it = 0; it < 200; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo < 1e-14 * hi)
            break;
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if ((fm < 0.0) == (flo < 0.0))
        {
            lo = mid;
            flo = fm;
        }
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline BesselZeros scan_zeros(const std::function<double(double)> &f, std::size_t count, double start, double step)
{
    BesselZeros z;
    z.values.reserve(count);
    double a = start;
    double fa = f(a);
    while (z.values.size() < count)
    {
        const double b = a + step;
        const double fb = f(b);
        if (fa == 0.0)
            z.values.push_back(a);
        else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0)
            z.values.push_back(bisect(f, a, b, fa));
        a = b;
        fa = fb;
    }
    return z;
}

} // namespace detail

/// First `count` positive zeros of J_1 (scan with step 0.5 from 1.0, then bisection).
inline BesselZeros j1_zeros(std::size_t count)
{
    if (count == 0)
        throw std::invalid_argument("j1_zeros: count must be >= 1");
    return detail::scan_zeros([](double x) { return bessel_j(1, x); }, count, 1.0, 0.5);
}

/// First `count` non-trivial positive zeros of J_m'. For m = 0 these coincide with the zeros of J_1.
inline BesselZeros bessel_j_derivative_zeros(unsigned order, std::size_t count)
{
    if (count == 0)
        throw std::invalid_argument("bessel_j_derivative_zeros: count must be >= 1");
    if (order == 0)
        return j1_zeros(count);
    // J_m' > 0 on (0, first zero); the first zero of J_m' exceeds m.
    const double start = std::max(0.25, 0.5 * static_cast<double>(order));
    return detail::scan_zeros([order](double x) { return bessel_j_derivative(order, x); }, count, start, 0.25);
}

/// Gaussian tail Q(x) = P(Z > x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Q^{-1}(p) for 0 < p < 1. Newton on the erfc form, bracketed by bisection.
inline double q_inv(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("q_inv: probability must lie in (0, 1)");
    if (p == 0.5)
        return 0.0;
    double lo = -40.0, hi = 40.0; // Q(lo) > p > Q(hi)
    double x = 0.0;
    for (int it = 0; it < 200; ++it)
    {
        const double qx = q_function(x);
        const double err = qx - p;
        if (err == 0.0)
            return x;
        if (err > 0.0)
            lo = x;
        else
            hi = x;
        const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        double next = (pdf > 0.0) ? x + err / pdf : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x)))
            return next;
        x = next;
    }
    return x;
}

} // namespace mobenergy::specfun

#endif // MOBENERGY_SPECFUN_HPP
