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

#ifndef MOBENERGY_QUADRATURE_HPP
#define MOBENERGY_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace mobenergy
{

class QuadratureError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct QuadratureResult
{
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive 61-point Gauss-Kronrod on [a, b]. Oscillatory integrands are split
/// into `pieces` equal panels first so every panel sees only a few oscillations.
namespace detail
{

// One Gauss-Kronrod 61 panel, bisected until its error estimate meets the target.
template <typename F>
QuadratureResult gk_panel(F &f, double a, double b, double rel_tol, double abs_floor, int depth)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double err = 0.0, l1 = 0.0;
    const double v = GK::integrate(f, a, b, 0, rel_tol, &err, &l1);
    // At depth 0 Boost reports the error on the reference interval [-1, 1]; rescale it.
    err *= 0.5 * (b - a);
    if (std::isfinite(err) && err <= std::max(rel_tol * l1, abs_floor))
        return {v, err};
    if (depth == 0)
    {
        if (std::isfinite(err) && err <= std::max(1e3 * rel_tol * l1, abs_floor))
            return {v, err};
        throw QuadratureError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]");
    }
    const double m = 0.5 * (a + b);
    const QuadratureResult left = gk_panel(f, a, m, rel_tol, 0.5 * abs_floor, depth - 1);
    const QuadratureResult right = gk_panel(f, m, b, rel_tol, 0.5 * abs_floor, depth - 1);
    return {left.value + right.value, left.error_estimate + right.error_estimate};
}

} // namespace detail

/// Integral of f over [a, b] split into `pieces` equal panels, each refined by bisection.
template <typename F>
QuadratureResult integrate(F &&f, double a, double b, double rel_tol = 1e-12, unsigned pieces = 1,
                           double abs_floor = 0.0)
{
    if (pieces == 0)
        throw std::invalid_argument("integrate: pieces must be >= 1");
    QuadratureResult out;
    const double h = (b - a) / pieces;
    for (unsigned p = 0; p < pieces; ++p)
    {
        const double lo = a + p * h;
        const double hi = (p + 1 == pieces) ? b : lo + h;
        const QuadratureResult r = detail::gk_panel(f, lo, hi, rel_tol, abs_floor / pieces, 16);
        out.value += r.value;
        out.error_estimate += r.error_estimate;
    }
    return out;
}

} // namespace mobenergy

#endif // MOBENERGY_QUADRATURE_HPP
