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

#ifndef MOBENERGY_PLANNER_HPP
#define MOBENERGY_PLANNER_HPP

#include "mobenergy/energy.hpp"
#include "mobenergy/specfun.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

namespace mobenergy
{

/// Smallest battery level E with Pr(E_T > E) <= chi: sqrt(Sigma/K) Q^{-1}(chi) + epsilon.
inline double battery_level(const EnergyLaw &law, double chi)
{
    if (!(chi > 0.0 && chi < 1.0))
        throw std::invalid_argument("battery_level: outage target must lie in (0, 1)");
    return law.stddev() * specfun::q_inv(chi) + law.epsilon_j;
}

/// Inputs of the radius optimisation. Only the mean energy enters.
struct RadiusProblem
{
    PathlossModel model;
    double c = 0.5;
    double gbar = 0.0;
    double noise_w = 0.0;
    double eta = 1.0;
    double horizon_s = 0.0;
    double overhead_w = 0.0; // fixed BS power

    void validate() const
    {
        if (!(eta > 0.0) || !(gbar > 0.0) || !(noise_w > 0.0) || !(horizon_s > 0.0))
            throw std::invalid_argument("RadiusProblem: eta, gbar, noise and horizon must be positive");
        if (overhead_w < 0.0)
            throw std::invalid_argument("RadiusProblem: overhead power must be non-negative");
    }
};

/// F(R) = (epsilon(R) + overhead T) / R^2, in J/m^2.
inline double energy_per_area(double radius_m, const RadiusProblem &p)
{
    p.validate();
    const double eps = p.horizon_s * (p.c * p.noise_w / p.eta) * p.gbar *
                       mean_inverse_pathloss(p.model, CellGeometry(radius_m));
    return (eps + p.overhead_w * p.horizon_s) / (radius_m * radius_m);
}

/// R* = xbar ((1 + 2 L eta overhead / (c gbar sigma^2)) (beta + 2)/(beta - 2))^{1/beta}, beta > 2.
inline double optimal_radius_closed_form(const RadiusProblem &p)
{
    p.validate();
    const double b = p.model.beta;
    if (!(b > 2.0))
        throw std::domain_error("optimal_radius_closed_form: requires beta > 2");
    const double g = 1.0 + 2.0 * p.model.l_xbar * p.eta * p.overhead_w / (p.c * p.gbar * p.noise_w);
    return p.model.xbar_m * std::pow(g * (b + 2.0) / (b - 2.0), 1.0 / b);
}

/// Golden-section minimiser on [lo, hi] (log scale).
inline double golden_section_minimize(const std::function<double(double)> &f, double lo, double hi,
                                      double rel_tol = 1e-10)
{
    if (!(lo > 0.0 && hi > lo))
        throw std::invalid_argument("golden_section_minimize: need 0 < lo < hi");
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(lo), b = std::log(hi);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(std::exp(x1)), f2 = f(std::exp(x2));
    while (b - a > rel_tol)
    {
        if (f1 < f2)
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(std::exp(x1));
        }
        else
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(std::exp(x2));
        }
    }
    return std::exp(0.5 * (a + b));
}

struct RadiusPlan
{
    double radius_m = 0.0;                 // chosen optimum
    std::optional<double> closed_form_m;   // absent when beta <= 2
    double numeric_m = 0.0;                // golden section over [xbar, 100 xbar]
    bool numeric_fallback = false;         // true when the closed form is undefined
    double energy_per_area = 0.0;
};

inline RadiusPlan optimal_cell_radius(const RadiusProblem &p)
{
    RadiusPlan out;
    const double lo = p.model.xbar_m, hi = 100.0 * p.model.xbar_m;
    out.numeric_m = golden_section_minimize([&](double r) { return energy_per_area(r, p); }, lo, hi);
    if (p.model.beta > 2.0)
    {
        out.closed_form_m = optimal_radius_closed_form(p);
        out.radius_m = *out.closed_form_m;
    }
    else
    {
        out.numeric_fallback = true;
        out.radius_m = out.numeric_m;
    }
    out.energy_per_area = energy_per_area(out.radius_m, p);
    return out;
}

} // namespace mobenergy

#endif // MOBENERGY_PLANNER_HPP
