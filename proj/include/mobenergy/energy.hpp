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

#ifndef MOBENERGY_ENERGY_HPP
#define MOBENERGY_ENERGY_HPP

#include "mobenergy/asymptotics.hpp"
#include "mobenergy/channel.hpp"
#include "mobenergy/quadrature.hpp"
#include "mobenergy/specfun.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mobenergy
{

/// phi_i = 2 int_0^1 f(z) J_0(kappa_i z) z dz for a radial profile f.
inline std::vector<double> phi_coefficients(const std::function<double(double)> &profile,
                                            const specfun::BesselZeros &kappa)
{
    // Absolute floor near the rounding level of the integrand, so panels around
    // sign changes of J_0 do not chase evaluation noise. The noise of J_0(x)
    // grows roughly like x * eps, hence the factor in k.
    double scale = 0.0;
    for (int i = 0; i <= 64; ++i)
        scale = std::max(scale, std::abs(profile(i / 64.0)));
    std::vector<double> phi;
    phi.reserve(kappa.count());
    for (double k : kappa.values)
    {
        const double floor = 1e-14 * scale * std::max(1.0, k / 10.0);
        const auto pieces = static_cast<unsigned>(std::max(1.0, std::ceil(k / 6.0)));
        const auto r = integrate([&](double z) { return profile(z) * specfun::bessel_j(0, k * z) * z; }, 0.0, 1.0,
                                 1e-12, pieces, floor);
        phi.push_back(2.0 * r.value);
    }
    return phi;
}

/// phi_i for the inverse pathloss 1/l(R z), by quadrature.
inline std::vector<double> phi_coefficients(const PathlossModel &model, double radius_m,
                                            const specfun::BesselZeros &kappa)
{
    // The constant part of 1/l integrates to zero against J_0(kappa z) z; dropping it
    // avoids cancellation without changing the value.
    const double scale = std::pow(radius_m / model.xbar_m, model.beta) / (2.0 * model.l_xbar);
    const double beta = model.beta;
    return phi_coefficients([&](double z) { return scale * std::pow(z, beta); }, kappa);
}

/// Closed forms for beta = 4 and beta = 6:
///   int_0^1 z^5 J_0(k z) dz = 4 J_0(k)(k^2 - 8)/k^4
///   int_0^1 z^7 J_0(k z) dz = 6 J_0(k)(k^4 - 24 k^2 + 192)/k^6
inline std::vector<double> phi_closed_form(const PathlossModel &model, double radius_m,
                                           const specfun::BesselZeros &kappa)
{
    if (model.beta != 4.0 && model.beta != 6.0)
        throw std::invalid_argument("phi_closed_form: available for beta = 4 and beta = 6 only");
    const double scale = std::pow(radius_m / model.xbar_m, model.beta) / model.l_xbar;
    std::vector<double> phi;
    phi.reserve(kappa.count());
    for (double k : kappa.values)
    {
        const double j0 = specfun::bessel_j(0, k);
        const double k2 = k * k;
        const double v = model.beta == 4.0 ? 4.0 * j0 * (k2 - 8.0) / (k2 * k2)
                                           : 6.0 * j0 * (k2 * k2 - 24.0 * k2 + 192.0) / (k2 * k2 * k2);
        phi.push_back(scale * v);
    }
    return phi;
}

/// Which covariance the time factor integrates:
///  Conditional: covariance given the initial positions, int_0^1 (1 - e^{-a t})^2 dt;
///  Stationary:  covariance of the stationary process, 1 - (1 - e^{-a})/a.
enum class TimeWeight
{
    Conditional,
    Stationary,
};

inline double time_factor(double a, TimeWeight weight = TimeWeight::Conditional)
{
    if (a < 0.0)
        throw std::invalid_argument("time_factor: a must be non-negative");
    if (weight == TimeWeight::Stationary)
    {
        if (a < 1e-4)
            return a / 2.0 - a * a / 6.0 + a * a * a / 24.0;
        return 1.0 - (-std::expm1(-a)) / a;
    }
    if (a < 1e-3)
        return a * a / 3.0 - a * a * a / 4.0 + 7.0 * a * a * a * a / 60.0;
    return 1.0 + 2.0 * std::expm1(-a) / a - std::expm1(-2.0 * a) / (2.0 * a);
}

struct ThetaOptions
{
    std::size_t terms = 100;
    bool extend = true;          // add terms until the tail estimate is below rel_tail
    double rel_tail = 1e-8;
    std::size_t max_terms = 4000;
    TimeWeight weight = TimeWeight::Conditional;
    bool closed_form = false;    // use the beta = 4 / 6 phi closed forms
};

struct ThetaSeries
{
    specfun::BesselZeros kappa;
    std::vector<double> phi;
    std::vector<double> time_factors;
    std::vector<double> terms;
    double value = 0.0;
    std::size_t terms_used = 0;
    double tail_estimate = 0.0;
};

/// Theta = sum_i 2 phi_i^2 / (kappa_i^2 J_0(kappa_i)^2) I_i, a_i = kappa_i^2 D T / R^2.
/// Terms decay like kappa^{-6}; the tail after term n is estimated as term_n kappa_n / (5 pi).
inline ThetaSeries theta(const PathlossModel &model, double radius_m, double diffusion_m2_per_s, double horizon_s,
                         ThetaOptions opts = {})
{
    if (opts.terms == 0)
        throw std::invalid_argument("theta: terms must be >= 1");
    if (!(horizon_s >= 0.0))
        throw std::invalid_argument("theta: horizon must be non-negative");
    if (!(diffusion_m2_per_s > 0.0))
        throw std::invalid_argument("theta: diffusion coefficient must be positive");
    ThetaSeries s;
    const double scaled_t = diffusion_m2_per_s * horizon_s / (radius_m * radius_m);
    std::size_t n = opts.terms;
    for (;;)
    {
        // Only the coefficients of the new zeros are computed when the series grows.
        s.kappa = specfun::j1_zeros(n);
        const specfun::BesselZeros fresh{std::vector<double>(s.kappa.values.begin() + static_cast<long>(s.phi.size()),
                                                             s.kappa.values.end())};
        const auto more = opts.closed_form ? phi_closed_form(model, radius_m, fresh)
                                           : phi_coefficients(model, radius_m, fresh);
        s.phi.insert(s.phi.end(), more.begin(), more.end());
        s.time_factors.clear();
        s.terms.clear();
        s.value = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double k = s.kappa[i];
            const double j0 = specfun::bessel_j(0, k);
            const double w = time_factor(k * k * scaled_t, opts.weight);
            const double term = 2.0 * s.phi[i] * s.phi[i] / (k * k * j0 * j0) * w;
            s.time_factors.push_back(w);
            s.terms.push_back(term);
            s.value += term;
        }
        s.terms_used = n;
        s.tail_estimate = s.terms.back() * s.kappa[n - 1] / (5.0 * std::numbers::pi);
        if (!opts.extend || s.value == 0.0 || s.tail_estimate < opts.rel_tail * s.value || n >= opts.max_terms)
            break;
        n = std::min(opts.max_terms, 2 * n);
    }
    return s;
}

/// beta = 4 closed form: Theta = Omega R^8 with
///   Omega = 1/(xbar^8 L^2) sum_i 32 (kappa_i^2 - 8)^2 / kappa_i^10 I_i.
inline double omega_beta4(const PathlossModel &model, double radius_m, double diffusion_m2_per_s, double horizon_s,
                          std::size_t terms, TimeWeight weight = TimeWeight::Conditional)
{
    if (model.beta != 4.0)
        throw std::invalid_argument("omega_beta4: beta must be 4");
    const auto kappa = specfun::j1_zeros(terms);
    const double scaled_t = diffusion_m2_per_s * horizon_s / (radius_m * radius_m);
    double sum = 0.0;
    for (double k : kappa.values)
    {
        const double k2 = k * k;
        sum += 32.0 * (k2 - 8.0) * (k2 - 8.0) / std::pow(k, 10) * time_factor(k2 * scaled_t, weight);
    }
    return sum / (std::pow(model.xbar_m, 8) * model.l_xbar * model.l_xbar);
}

/// epsilon = T (c sigma^2 / eta) gbar E[1/l].
inline double energy_mean(double c, const std::vector<double> &gamma, double noise_w, double eta,
                          const PathlossModel &model, const CellGeometry &geometry, double horizon_s)
{
    if (!(eta > 0.0))
        throw std::invalid_argument("energy_mean: eta must be positive");
    return horizon_s * (c * noise_w / eta) * mean_of(gamma) * mean_inverse_pathloss(model, geometry);
}

/// beta = 4 closed form of the mean: T (c sigma^2/eta) gbar (R^4/(6 xbar^4 L) + 1/(2L)).
inline double energy_mean_beta4(double c, double gbar, double noise_w, double eta, const PathlossModel &model,
                                double radius_m, double horizon_s)
{
    if (model.beta != 4.0)
        throw std::invalid_argument("energy_mean_beta4: beta must be 4");
    const double r4 = std::pow(radius_m / model.xbar_m, 4);
    return horizon_s * (c * noise_w / eta) * gbar * (r4 / (6.0 * model.l_xbar) + 1.0 / (2.0 * model.l_xbar));
}

/// Sigma = (c sigma^2/eta)^2 mean(gamma^2) (T R^2 / D) Theta; Var[E_T] = Sigma / K.
inline double energy_variance(double c, const std::vector<double> &gamma, double noise_w, double eta,
                              double theta_value, double radius_m, double diffusion_m2_per_s, double horizon_s)
{
    if (!(eta > 0.0))
        throw std::invalid_argument("energy_variance: eta must be positive");
    const double s = c * noise_w / eta;
    return s * s * mean_square_of(gamma) * horizon_s * radius_m * radius_m / diffusion_m2_per_s * theta_value;
}

inline double energy_variance_beta4(double c, double mean_gamma_sq, double noise_w, double eta, double omega,
                                    double radius_m, double diffusion_m2_per_s, double horizon_s)
{
    const double s = c * noise_w / eta;
    return s * s * mean_gamma_sq * horizon_s * std::pow(radius_m, 10) / diffusion_m2_per_s * omega;
}

/// Gaussian approximation of E_T: mean epsilon, variance Sigma / K.
struct EnergyLaw
{
    double epsilon_j = 0.0;
    double sigma_var = 0.0;
    std::size_t k_users = 1;

    double variance() const { return sigma_var / static_cast<double>(k_users); }
    double stddev() const { return std::sqrt(variance()); }
};

/// Pr(E_T > E) = Q(sqrt(K) (E - epsilon) / sqrt(Sigma)).
inline double outage_probability(double energy_budget_j, const EnergyLaw &law)
{
    if (!(law.sigma_var > 0.0) || law.k_users == 0)
        throw std::invalid_argument("outage_probability: invalid energy law");
    return specfun::q_function((energy_budget_j - law.epsilon_j) / law.stddev());
}

inline double clt_cdf(double x_j, const EnergyLaw &law) { return 1.0 - outage_probability(x_j, law); }

/// Theory for one scheme: eta (eta' with CSI error), epsilon, Sigma, Theta.
struct SchemeTheory
{
    Scheme scheme = Scheme::Olp;
    double eta = 0.0;
    std::vector<double> gamma; // effective targets (gamma' under CSI error)
    double theta = 0.0;
    std::size_t theta_terms = 0;
    EnergyLaw law;
};

struct TheoryInputs
{
    PathlossModel model;
    CellGeometry geometry;
    double diffusion_m2_per_s = 0.0;
    double horizon_s = 0.0;
    std::size_t k_users = 1;
    std::size_t n_antennas = 1;
    std::vector<double> gamma;
    std::vector<double> tau; // empty or zeros for perfect CSI
    double noise_w = 0.0;
    ThetaOptions theta_options;

    double load() const { return static_cast<double>(k_users) / static_cast<double>(n_antennas); }
};

inline SchemeTheory scheme_theory(Scheme scheme, const TheoryInputs &in)
{
    if (scheme == Scheme::RzfClassical)
        throw std::invalid_argument("energy law is available for olp, mrt, zf and rzf");
    SchemeTheory t;
    t.scheme = scheme;
    const std::vector<double> tau = in.tau.empty() ? std::vector<double>(in.gamma.size(), 0.0) : in.tau;
    const EffectiveScheme eff = effective_scheme(scheme, in.load(), in.gamma, tau);
    t.eta = eff.eta;
    t.gamma = eff.gamma;
    const ThetaSeries th = theta(in.model, in.geometry.radius_m, in.diffusion_m2_per_s, in.horizon_s, in.theta_options);
    t.theta = th.value;
    t.theta_terms = th.terms_used;
    t.law.k_users = in.k_users;
    t.law.epsilon_j = energy_mean(in.load(), t.gamma, in.noise_w, t.eta, in.model, in.geometry, in.horizon_s);
    t.law.sigma_var = energy_variance(in.load(), t.gamma, in.noise_w, t.eta, th.value, in.geometry.radius_m,
                                      in.diffusion_m2_per_s, in.horizon_s);
    return t;
}

} // namespace mobenergy

#endif // MOBENERGY_ENERGY_HPP
