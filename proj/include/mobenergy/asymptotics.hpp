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

#ifndef MOBENERGY_ASYMPTOTICS_HPP
#define MOBENERGY_ASYMPTOTICS_HPP

#include "mobenergy/channel.hpp"
#include "mobenergy/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobenergy
{

// Large-system (K, N -> infinity, K/N = c) deterministic equivalents.

inline double mean_of(const std::vector<double> &v)
{
    if (v.empty())
        throw std::invalid_argument("mean of an empty vector");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double mean_square_of(const std::vector<double> &v)
{
    if (v.empty())
        throw std::invalid_argument("mean of an empty vector");
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return s / static_cast<double>(v.size());
}

namespace detail
{
inline void check_ratio(double c)
{
    if (!(c > 0.0 && c <= 1.0))
        throw std::invalid_argument("load ratio c = K/N must lie in (0, 1]");
}
inline void check_gamma(const std::vector<double> &gamma)
{
    if (gamma.empty())
        throw std::invalid_argument("at least one SINR target required");
    for (double g : gamma)
        if (!(g > 0.0))
            throw std::invalid_argument("SINR targets must be positive");
}
} // namespace detail

/// Power-efficiency factor eta of the unified schemes:
///   OLP: 1 - c mean(gamma/(1+gamma));  MRT: 1 - c mean(gamma);
///   ZF:  1 - c;                         RZF: 1 - c gbar/(1+gbar).
inline double eta_for(Scheme scheme, double c, const std::vector<double> &gamma)
{
    detail::check_ratio(c);
    detail::check_gamma(gamma);
    const double gbar = mean_of(gamma);
    double eta = 0.0;
    std::string why;
    switch (scheme)
    {
    case Scheme::Olp:
    {
        double s = 0.0;
        for (double g : gamma)
            s += g / (1.0 + g);
        eta = 1.0 - c * s / static_cast<double>(gamma.size());
        why = "c * mean(gamma / (1 + gamma)) >= 1";
        break;
    }
    case Scheme::Mrt:
        eta = 1.0 - c * gbar;
        why = "c * mean(gamma) >= 1; uniform rates must satisfy r < log2(1 + 1/c) = " +
              std::to_string(std::log2(1.0 + 1.0 / c));
        break;
    case Scheme::Zf:
        eta = 1.0 - c;
        why = "zero forcing needs K < N";
        break;
    case Scheme::RzfStatistical:
        eta = 1.0 - c * gbar / (1.0 + gbar);
        why = "c * gbar / (1 + gbar) >= 1";
        break;
    case Scheme::RzfClassical:
        throw std::invalid_argument("eta_for: classical RZF power is not of the c sigma^2 A / eta form");
    }
    if (!(eta > 0.0))
        throw InfeasibleError(display_name(scheme), why + " (eta = " + std::to_string(eta) + ")");
    return eta;
}

/// A(t) = mean_k gamma_k / l_k.
inline double a_of_t(const std::vector<double> &attenuation, const std::vector<double> &gamma)
{
    if (attenuation.size() != gamma.size())
        throw DimensionError("a_of_t: one attenuation per target required");
    double s = 0.0;
    for (std::size_t k = 0; k < gamma.size(); ++k)
        s += gamma[k] / attenuation[k];
    return s / static_cast<double>(gamma.size());
}

inline std::vector<double> attenuations(const std::vector<Point> &positions, const PathlossModel &model)
{
    std::vector<double> l;
    l.reserve(positions.size());
    for (const auto &p : positions)
        l.push_back(pathloss(p, model));
    return l;
}

inline double a_of_t(const std::vector<Point> &positions, const std::vector<double> &gamma, const PathlossModel &model)
{
    return a_of_t(attenuations(positions, model), gamma);
}

/// lambda_bar_k = gamma_k / (l_k eta).
inline double asymptotic_lambda(double gamma_k, double attenuation, double eta)
{
    if (!(eta > 0.0) || !(attenuation > 0.0))
        throw std::invalid_argument("asymptotic_lambda: eta and attenuation must be positive");
    return gamma_k / (attenuation * eta);
}

struct MuSolution
{
    double mu = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

/// Positive root of mu = ((c/K) sum_i a_i l_i / (1 + a_i l_i mu) + rho)^{-1}; Picard from 1/rho.
inline MuSolution mu_fixed_point(const std::vector<double> &alpha, const std::vector<double> &attenuation, double rho,
                                 double c, double tol = 1e-12, int max_iter = 100000)
{
    if (!(rho > 0.0))
        throw std::invalid_argument("mu_fixed_point: rho must be positive");
    if (alpha.size() != attenuation.size() || alpha.empty())
        throw DimensionError("mu_fixed_point: alpha and attenuation sizes differ");
    const double scale = c / static_cast<double>(alpha.size());
    auto rhs = [&](double mu) {
        double s = 0.0;
        for (std::size_t i = 0; i < alpha.size(); ++i)
        {
            const double al = alpha[i] * attenuation[i];
            s += al / (1.0 + al * mu);
        }
        return 1.0 / (scale * s + rho);
    };
    MuSolution out;
    double mu = 1.0 / rho;
    for (out.iterations = 0; out.iterations < max_iter; ++out.iterations)
    {
        const double next = rhs(mu);
        const double change = std::abs(next - mu) / next;
        mu = next;
        if (change < tol)
        {
            ++out.iterations;
            break;
        }
    }
    out.mu = mu;
    out.residual = std::abs(rhs(mu) - mu) / mu;
    if (!(out.residual < 1e3 * tol))
        throw ConvergenceError("mu_fixed_point: no convergence");
    return out;
}

/// Deterministic equivalent for the generic heuristic precoder (sum alpha_i h_i h_i^H + N rho I)^{-1} H:
///   P = c sigma^2 A / (1 - mu^2 F - c B),
///   p_k = gamma_k / (l_k mu^2) (P + sigma^2 / l_k (1 + alpha_k l_k mu)^2).
struct HeuristicSummary
{
    double mu = 0.0;
    double a = 0.0;
    double b = 0.0;
    double f = 0.0;
    double denominator = 0.0;
    double pbar_w = 0.0;
    std::vector<double> user_pbar;
};

inline HeuristicSummary heuristic_power_for_mu(const std::vector<double> &alpha, const std::vector<double> &attenuation,
                                               const std::vector<double> &gamma, double mu, double c, double noise_w,
                                               const std::string &label = "heuristic precoder")
{
    const std::size_t k = gamma.size();
    if (alpha.size() != k || attenuation.size() != k)
        throw DimensionError("heuristic_power: size mismatch");
    HeuristicSummary s;
    s.mu = mu;
    s.a = a_of_t(attenuation, gamma);
    for (std::size_t i = 0; i < k; ++i)
    {
        const double al = alpha[i] * attenuation[i];
        const double den = (1.0 + al * mu) * (1.0 + al * mu);
        s.b += gamma[i] / den;
        s.f += al * al / den;
    }
    s.b /= static_cast<double>(k);
    s.f *= c / static_cast<double>(k);
    s.denominator = 1.0 - mu * mu * s.f - c * s.b;
    if (!(s.denominator > 0.0))
        throw InfeasibleError(label, "asymptotic power denominator 1 - mu^2 F - c B = " +
                                         std::to_string(s.denominator) + " is not positive");
    s.pbar_w = c * noise_w * s.a / s.denominator;
    s.user_pbar.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
    {
        const double l = attenuation[i];
        const double g = 1.0 + alpha[i] * l * mu;
        s.user_pbar.push_back(gamma[i] / (l * mu * mu) * (s.pbar_w + noise_w / l * g * g));
    }
    return s;
}

inline HeuristicSummary heuristic_power(const std::vector<double> &alpha, const std::vector<double> &attenuation,
                                        const std::vector<double> &gamma, double rho, double c, double noise_w,
                                        const std::string &label = "heuristic precoder")
{
    const MuSolution mu = mu_fixed_point(alpha, attenuation, rho, c);
    return heuristic_power_for_mu(alpha, attenuation, gamma, mu.mu, c, noise_w, label);
}

/// rho* = 1/gbar - c/(1 + gbar) for alpha_k = 1/l_k.
inline double optimal_rho_statistical(const std::vector<double> &gamma, double c)
{
    detail::check_gamma(gamma);
    const double gbar = mean_of(gamma);
    return 1.0 / gbar - c / (1.0 + gbar);
}

/// Asymptotic power of the alpha_k = 1/l_k precoder as a function of rho:
///   P(rho) = c sigma^2 (1 + mu)^2 A / (mu (c + rho (1 + mu)^2) - c gbar),  mu = (c/(1+mu) + rho)^{-1}.
inline double rzf_statistical_power_vs_rho(double rho, double c, double gbar, double a, double noise_w)
{
    if (!(rho > 0.0))
        throw std::invalid_argument("rho must be positive");
    // mu solves rho mu^2 + (rho + c - 1) mu - 1 = 0.
    const double b = rho + c - 1.0;
    const double mu = (-b + std::sqrt(b * b + 4.0 * rho)) / (2.0 * rho);
    const double den = mu * (c + rho * (1.0 + mu) * (1.0 + mu)) - c * gbar;
    if (!(den > 0.0))
        return std::numeric_limits<double>::infinity();
    return c * noise_w * (1.0 + mu) * (1.0 + mu) * a / den;
}

struct ClassicalRzf
{
    double mu_star = 0.0;
    double rho_star = 0.0;
    double pbar_w = 0.0;
    double residual = 0.0;
    int iterations = 0;
    HeuristicSummary detail;
};

/// RZF with alpha = 1: mu* solves
///   mu = sum_i l_i gamma_i / (1 + l_i mu)^3 / sum_i l_i^2 / (1 + l_i mu)^3
/// (damped iteration, factor 0.5); rho* = 1/mu* - (c/K) sum_i l_i / (1 + l_i mu*).
inline ClassicalRzf classical_rzf(const std::vector<double> &attenuation, const std::vector<double> &gamma, double c,
                                  double noise_w, double tol = 1e-13, int max_iter = 10000)
{
    detail::check_ratio(c);
    detail::check_gamma(gamma);
    if (attenuation.size() != gamma.size())
        throw DimensionError("classical_rzf: size mismatch");
    auto ratio = [&](double mu) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < gamma.size(); ++i)
        {
            const double l = attenuation[i];
            const double w = 1.0 / std::pow(1.0 + l * mu, 3);
            num += l * gamma[i] * w;
            den += l * l * w;
        }
        return num / den;
    };
    ClassicalRzf out;
    double mu = std::accumulate(gamma.begin(), gamma.end(), 0.0) /
                std::accumulate(attenuation.begin(), attenuation.end(), 0.0);
    mu = ratio(mu);
    bool done = false;
    for (out.iterations = 0; out.iterations < max_iter; ++out.iterations)
    {
        const double next = 0.5 * mu + 0.5 * ratio(mu);
        const double change = std::abs(next - mu) / next;
        mu = next;
        if (change < tol)
        {
            ++out.iterations;
            done = true;
            break;
        }
    }
    out.mu_star = mu;
    out.residual = std::abs(ratio(mu) - mu) / mu;
    if (!done)
        throw ConvergenceError("classical_rzf: mu* iteration did not converge");
    double s = 0.0;
    for (double l : attenuation)
        s += l / (1.0 + l * mu);
    out.rho_star = 1.0 / mu - c * s / static_cast<double>(attenuation.size());
    const std::vector<double> ones(gamma.size(), 1.0);
    out.detail = heuristic_power_for_mu(ones, attenuation, gamma, mu, c, noise_w, "RZF-classical");
    out.pbar_w = out.detail.pbar_w;
    return out;
}

/// Regularisation weights of the heuristic schemes.
inline std::vector<double> scheme_alpha(Scheme scheme, const std::vector<double> &attenuation)
{
    std::vector<double> a(attenuation.size(), 0.0);
    switch (scheme)
    {
    case Scheme::Mrt: break;
    case Scheme::RzfStatistical:
        for (std::size_t i = 0; i < a.size(); ++i)
            a[i] = 1.0 / attenuation[i];
        break;
    case Scheme::Zf:
    case Scheme::RzfClassical: std::fill(a.begin(), a.end(), 1.0); break;
    case Scheme::Olp: throw std::invalid_argument("OLP has no fixed regularisation weights");
    }
    return a;
}

/// Deterministic equivalent of the transmit power.
inline double asymptotic_power(Scheme scheme, double c, const std::vector<double> &gamma,
                               const std::vector<double> &attenuation, double noise_w)
{
    if (scheme == Scheme::RzfClassical)
        return classical_rzf(attenuation, gamma, c, noise_w).pbar_w;
    return c * noise_w * a_of_t(attenuation, gamma) / eta_for(scheme, c, gamma);
}

inline double asymptotic_power(Scheme scheme, double c, const std::vector<double> &gamma,
                               const std::vector<Point> &positions, const PathlossModel &model, double noise_w)
{
    return asymptotic_power(scheme, c, gamma, attenuations(positions, model), noise_w);
}

/// Per-user deterministic powers (scaling of the scheme's raw direction columns).
inline std::vector<double> asymptotic_user_power(Scheme scheme, double c, const std::vector<double> &gamma,
                                                 const std::vector<double> &attenuation, double noise_w)
{
    const std::size_t k = gamma.size();
    std::vector<double> p(k);
    switch (scheme)
    {
    case Scheme::Olp:
    {
        const double eta = eta_for(Scheme::Olp, c, gamma);
        const double pbar = c * noise_w * a_of_t(attenuation, gamma) / eta;
        for (std::size_t i = 0; i < k; ++i)
        {
            const double l = attenuation[i];
            p[i] = gamma[i] / (l * eta * eta) * (pbar + noise_w / l * (1.0 + gamma[i]) * (1.0 + gamma[i]));
        }
        return p;
    }
    case Scheme::Zf:
        (void)eta_for(Scheme::Zf, c, gamma);
        for (std::size_t i = 0; i < k; ++i)
            p[i] = gamma[i] * noise_w;
        return p;
    case Scheme::Mrt:
        return heuristic_power_for_mu(scheme_alpha(scheme, attenuation), attenuation, gamma, 1.0, c, noise_w, "MRT")
            .user_pbar;
    case Scheme::RzfStatistical:
        return heuristic_power(scheme_alpha(scheme, attenuation), attenuation, gamma,
                               optimal_rho_statistical(gamma, c), c, noise_w, "RZF")
            .user_pbar;
    case Scheme::RzfClassical: return classical_rzf(attenuation, gamma, c, noise_w).detail.user_pbar;
    }
    return p;
}

/// Imperfect-CSI substitution: gamma'_k = gamma_k / (1 - tau_k^2) and
///   ZF:  eta' = 1 - c - c mean(gamma'_k tau_k^2)
///   RZF: eta' = 1 - c gbar/(1 + gbar) - c mean(gamma'_k tau_k^2)
/// The error sum is averaged over users so that tau -> 0 recovers the perfect-CSI eta.
struct ImperfectCsi
{
    double eta_prime = 0.0;
    std::vector<double> gamma_prime;
};

inline ImperfectCsi imperfect_csi_eta(Scheme scheme, double c, const std::vector<double> &gamma,
                                      const std::vector<double> &tau)
{
    detail::check_ratio(c);
    detail::check_gamma(gamma);
    if (tau.size() != gamma.size())
        throw DimensionError("imperfect_csi_eta: one tau per user required");
    if (scheme != Scheme::Zf && scheme != Scheme::RzfStatistical)
        throw std::invalid_argument("imperfect CSI analysis is available for ZF and RZF only");
    ImperfectCsi out;
    double err = 0.0;
    for (std::size_t i = 0; i < gamma.size(); ++i)
    {
        if (!(tau[i] >= 0.0 && tau[i] < 1.0))
            throw std::invalid_argument("imperfect_csi_eta: tau must lie in [0, 1)");
        const double gp = gamma[i] / (1.0 - tau[i] * tau[i]);
        out.gamma_prime.push_back(gp);
        err += gp * tau[i] * tau[i];
    }
    err /= static_cast<double>(gamma.size());
    const double gbar = mean_of(gamma);
    const double base = scheme == Scheme::Zf ? 1.0 - c : 1.0 - c * gbar / (1.0 + gbar);
    out.eta_prime = base - c * err;
    if (!(out.eta_prime > 0.0))
        throw InfeasibleError(display_name(scheme), "channel estimates too poor for the targets (eta' = " +
                                                        std::to_string(out.eta_prime) + ")");
    return out;
}

/// eta and effective targets for a scheme, with optional per-user CSI error.
struct EffectiveScheme
{
    double eta = 0.0;
    std::vector<double> gamma;
};

inline EffectiveScheme effective_scheme(Scheme scheme, double c, const std::vector<double> &gamma,
                                        const std::vector<double> &tau)
{
    bool perfect = true;
    for (double t : tau)
        perfect = perfect && t == 0.0;
    if (perfect)
        return {eta_for(scheme, c, gamma), gamma};
    const ImperfectCsi ic = imperfect_csi_eta(scheme, c, gamma, tau);
    return {ic.eta_prime, ic.gamma_prime};
}

/// Asymptotic snapshot of one scheme at given user positions.
struct AsymptoticSummary
{
    Scheme scheme = Scheme::Olp;
    double eta = 0.0;            // NaN for classical RZF
    double a_of_t = 0.0;
    double pbar_w = 0.0;
    std::vector<double> user_pbar_w;
    std::vector<double> user_lambda; // OLP only
    std::optional<double> mu;
    std::optional<double> rho;
};

inline AsymptoticSummary summarize(Scheme scheme, double c, const std::vector<double> &gamma,
                                   const std::vector<double> &attenuation, double noise_w)
{
    AsymptoticSummary s;
    s.scheme = scheme;
    s.a_of_t = a_of_t(attenuation, gamma);
    s.user_pbar_w = asymptotic_user_power(scheme, c, gamma, attenuation, noise_w);
    switch (scheme)
    {
    case Scheme::Olp:
        s.eta = eta_for(scheme, c, gamma);
        for (std::size_t i = 0; i < gamma.size(); ++i)
            s.user_lambda.push_back(asymptotic_lambda(gamma[i], attenuation[i], s.eta));
        break;
    case Scheme::Mrt:
        s.eta = eta_for(scheme, c, gamma);
        s.mu = 1.0;
        s.rho = 1.0;
        break;
    case Scheme::Zf: s.eta = eta_for(scheme, c, gamma); break;
    case Scheme::RzfStatistical:
        s.eta = eta_for(scheme, c, gamma);
        s.rho = optimal_rho_statistical(gamma, c);
        s.mu = mu_fixed_point(scheme_alpha(scheme, attenuation), attenuation, *s.rho, c).mu;
        break;
    case Scheme::RzfClassical:
    {
        const ClassicalRzf r = classical_rzf(attenuation, gamma, c, noise_w);
        s.eta = std::numeric_limits<double>::quiet_NaN();
        s.mu = r.mu_star;
        s.rho = r.rho_star;
        s.pbar_w = r.pbar_w;
        return s;
    }
    }
    s.pbar_w = c * noise_w * s.a_of_t / s.eta;
    return s;
}

} // namespace mobenergy

#endif // MOBENERGY_ASYMPTOTICS_HPP
