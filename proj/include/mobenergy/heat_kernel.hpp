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

#ifndef MOBENERGY_HEAT_KERNEL_HPP
#define MOBENERGY_HEAT_KERNEL_HPP

#include "mobenergy/geometry.hpp"
#include "mobenergy/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mobenergy
{

struct KernelValue
{
    double density = 0.0;          // 1/m^2
    double leading_omitted = 0.0;  // largest term just outside the truncation
    bool truncation_warning = false;
};

/// Transition density of reflecting Brownian motion on a disc (Neumann heat
/// kernel), as a truncated eigenfunction series:
///
///   p(x, x'; t) = 1/(pi R^2)
///     + sum_{m>=0} sum_{n>=1} e_m cos(m dphi) J_m(k r/R) J_m(k r'/R) exp(-k^2 D t / R^2)
///                               / (pi R^2 (1 - m^2/k^2) J_m(k)^2)
///
/// with k = k_{n,m} the n-th positive zero of J_m', e_0 = 1, e_m = 2.
class DiscHeatKernel
{
  public:
    DiscHeatKernel(const CellGeometry &geometry, double diffusion_m2_per_s, unsigned max_order = 20,
                   unsigned radial_terms = 20)
        : radius_(geometry.radius_m), diffusion_(diffusion_m2_per_s), max_order_(max_order),
          radial_terms_(radial_terms)
    {
        if (radial_terms == 0)
            throw std::invalid_argument("DiscHeatKernel: need at least one radial term");
        if (!(diffusion_m2_per_s > 0.0))
            throw std::invalid_argument("DiscHeatKernel: diffusion coefficient must be positive");
        // One extra order and one extra radial index for the truncation estimate.
        zeros_.reserve(max_order + 2);
        norms_.reserve(max_order + 2);
        for (unsigned m = 0; m <= max_order + 1; ++m)
        {
            auto z = specfun::bessel_j_derivative_zeros(m, radial_terms + 1);
            std::vector<double> nrm;
            for (double k : z.values)
            {
                const double jm = specfun::bessel_j(m, k);
                const double mk = static_cast<double>(m) / k;
                nrm.push_back(1.0 / (std::numbers::pi * radius_ * radius_ * (1.0 - mk * mk) * jm * jm));
            }
            zeros_.push_back(std::move(z.values));
            norms_.push_back(std::move(nrm));
        }
    }

    KernelValue operator()(const Point &x, const Point &x_prime, double t_s) const
    {
        if (!(t_s > 0.0))
            throw std::invalid_argument("DiscHeatKernel: time must be positive");
        const double r1 = x.norm() / radius_;
        const double r2 = x_prime.norm() / radius_;
        if (r1 > 1.0 + 1e-12 || r2 > 1.0 + 1e-12)
            throw std::invalid_argument("DiscHeatKernel: points must lie inside the cell");
        const double dphi = std::atan2(x.y(), x.x()) - std::atan2(x_prime.y(), x_prime.x());
        const double tau = diffusion_ * t_s / (radius_ * radius_);

        KernelValue out;
        out.density = 1.0 / (std::numbers::pi * radius_ * radius_);
        for (unsigned m = 0; m <= max_order_; ++m)
        {
            const double ang = (m == 0 ? 1.0 : 2.0) * std::cos(m * dphi);
            for (unsigned n = 0; n < radial_terms_; ++n)
                out.density += ang * term(m, n, r1, r2, tau);
            out.leading_omitted =
                std::max(out.leading_omitted, std::abs(ang * term(m, radial_terms_, r1, r2, tau)));
        }
        const unsigned m_next = max_order_ + 1;
        for (unsigned n = 0; n <= radial_terms_; ++n)
            out.leading_omitted =
                std::max(out.leading_omitted, std::abs(2.0 * std::cos(m_next * dphi) * term(m_next, n, r1, r2, tau)));
        out.truncation_warning = out.leading_omitted > 1e-8 * std::abs(out.density);
        return out;
    }

    double radius() const { return radius_; }

  private:
    double term(unsigned m, unsigned n, double r1, double r2, double tau) const
    {
        const double k = zeros_[m][n];
        // Product of the radial factors first so that swapping x and x' is exact.
        const double radial = specfun::bessel_j(m, k * r1) * specfun::bessel_j(m, k * r2);
        return norms_[m][n] * radial * std::exp(-k * k * tau);
    }

    double radius_;
    double diffusion_;
    unsigned max_order_;
    unsigned radial_terms_;
    std::vector<std::vector<double>> zeros_;
    std::vector<std::vector<double>> norms_;
};

/// Convenience wrapper; builds the kernel tables on every call.
inline KernelValue transition_probability(const Point &x, const Point &x_prime, double t_s, const WalkParams &params,
                                          const CellGeometry &geometry, unsigned terms = 20)
{
    if (terms == 0)
        throw std::invalid_argument("transition_probability: terms must be >= 1");
    DiscHeatKernel kernel(geometry, params.effective_diffusion_m2_per_s(), terms, terms);
    return kernel(x, x_prime, t_s);
}

} // namespace mobenergy

#endif // MOBENERGY_HEAT_KERNEL_HPP
