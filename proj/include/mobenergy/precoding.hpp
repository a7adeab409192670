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

#ifndef MOBENERGY_PRECODING_HPP
#define MOBENERGY_PRECODING_HPP

#include "mobenergy/channel.hpp"
#include "mobenergy/scheme.hpp"
#include "mobenergy/units.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace mobenergy
{

/// Linear SINR targets gamma_k = 2^{r_k} - 1.
struct SinrTargets
{
    std::vector<double> rates;
    std::vector<double> gamma;

    static SinrTargets from_rates(std::vector<double> r)
    {
        SinrTargets t;
        t.gamma.reserve(r.size());
        for (double x : r)
        {
            if (!(x > 0.0))
                throw std::invalid_argument("SinrTargets: rates must be positive");
            t.gamma.push_back(units::rate_to_sinr(x));
        }
        t.rates = std::move(r);
        return t;
    }

    static SinrTargets uniform(std::size_t k, double rate) { return from_rates(std::vector<double>(k, rate)); }

    std::size_t size() const { return gamma.size(); }
};

/// Precoder for one time slot.
///
/// `directions` have unit-norm columns and `user_powers[k]` is the power radiated
/// towards user k, so V = directions * diag(sqrt(user_powers)). `canonical_powers`
/// are the same allocation expressed against the scheme's raw direction matrix
/// (e.g. M^{-1} H for OLP, H (H^H H)^{-1} for ZF), which is the scaling used by
/// the closed-form per-user power expressions.
struct PrecoderSolution
{
    CMatrix directions;
    std::vector<double> user_powers;
    std::vector<double> canonical_powers;
    std::optional<std::vector<double>> multipliers;
    std::vector<double> achieved_sinr;
    double total_power = 0.0;
    int iterations = 0;
    std::vector<double> change_history; // OLP fixed point only

    CMatrix precoder() const
    {
        CMatrix v = directions;
        for (Eigen::Index k = 0; k < v.cols(); ++k)
            v.col(k) *= std::sqrt(user_powers[static_cast<std::size_t>(k)]);
        return v;
    }
};

/// SINR_k = |h_k^H v_k|^2 / (sum_{i != k} |h_k^H v_i|^2 + sigma^2).
inline std::vector<double> compute_sinr(const ChannelMatrix &channels, const CMatrix &precoder, double noise_w)
{
    if (precoder.rows() != channels.antennas() || precoder.cols() != channels.users())
        throw DimensionError("compute_sinr: precoder must be N x K");
    const Eigen::MatrixXd g = (channels.entries.adjoint() * precoder).cwiseAbs2();
    std::vector<double> out(static_cast<std::size_t>(g.rows()));
    for (Eigen::Index k = 0; k < g.rows(); ++k)
    {
        const double interference = g.row(k).sum() - g(k, k);
        out[static_cast<std::size_t>(k)] = g(k, k) / (interference + noise_w);
    }
    return out;
}

namespace detail
{

inline void check_targets(const ChannelMatrix &channels, const SinrTargets &targets)
{
    if (static_cast<Eigen::Index>(targets.size()) != channels.users())
        throw DimensionError("one SINR target per user required");
}

// (H diag(weights) H^H + shift I)^{-1} H via Cholesky.
inline CMatrix regularized_inverse_times_h(const CMatrix &h, const Eigen::VectorXd &weights, double shift)
{
    CMatrix m = h * weights.cast<cdouble>().asDiagonal() * h.adjoint();
    m.diagonal().array() += shift;
    Eigen::LLT<CMatrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("regularized Gram operator is not positive definite");
    return llt.solve(h);
}

} // namespace detail

/// Powers (w.r.t. the given direction columns) that meet every target with equality:
/// solves D p = sigma^2 1 with D_kk = |h_k^H c_k|^2 / gamma_k, D_ki = -|h_k^H c_i|^2.
inline std::vector<double> exact_power_allocation(const ChannelMatrix &channels, const CMatrix &directions,
                                                  const SinrTargets &targets, double noise_w,
                                                  const std::string &label = "precoder")
{
    detail::check_targets(channels, targets);
    if (directions.rows() != channels.antennas() || directions.cols() != channels.users())
        throw DimensionError("exact_power_allocation: directions must be N x K");
    const Eigen::MatrixXd g = (channels.entries.adjoint() * directions).cwiseAbs2();
    const Eigen::Index k = g.rows();
    Eigen::MatrixXd d = -g;
    for (Eigen::Index i = 0; i < k; ++i)
        d(i, i) = g(i, i) / targets.gamma[static_cast<std::size_t>(i)];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
    if (!lu.isInvertible())
        throw InfeasibleError(label, "power-allocation system is singular");
    const Eigen::VectorXd p = lu.solve(Eigen::VectorXd::Constant(k, noise_w));
    std::vector<double> out(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i)
    {
        if (!std::isfinite(p(i)) || p(i) < 0.0)
            throw InfeasibleError(label, "negative power required for user " + std::to_string(i));
        out[static_cast<std::size_t>(i)] = p(i);
    }
    return out;
}

/// Assemble V = directions * diag(sqrt(p)), where p is expressed against the
/// columns of `directions` as given. Stored directions are normalised.
inline PrecoderSolution build_solution(const CMatrix &directions, const std::vector<double> &powers)
{
    if (static_cast<Eigen::Index>(powers.size()) != directions.cols())
        throw DimensionError("build_solution: one power per column required");
    PrecoderSolution s;
    s.directions = directions;
    s.canonical_powers = powers;
    s.user_powers.resize(powers.size());
    for (Eigen::Index k = 0; k < directions.cols(); ++k)
    {
        const double nrm = directions.col(k).norm();
        const auto kk = static_cast<std::size_t>(k);
        s.user_powers[kk] = powers[kk] * nrm * nrm;
        if (nrm > 0.0)
            s.directions.col(k) /= nrm;
        s.total_power += s.user_powers[kk];
    }
    return s;
}

inline PrecoderSolution build_solution(const ChannelMatrix &channels, const CMatrix &directions,
                                       const std::vector<double> &powers, double noise_w)
{
    PrecoderSolution s = build_solution(directions, powers);
    s.achieved_sinr = compute_sinr(channels, s.precoder(), noise_w);
    return s;
}

/// (sum_i alpha_i h_i h_i^H + N rho I)^{-1} H.
inline CMatrix heuristic_directions(const ChannelMatrix &channels, const std::vector<double> &alpha, double rho)
{
    if (static_cast<Eigen::Index>(alpha.size()) != channels.users())
        throw DimensionError("heuristic_directions: one alpha per user required");
    if (!(rho > 0.0))
        throw std::invalid_argument("heuristic_directions: rho must be positive (use zf_directions for rho = 0)");
    const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
    return detail::regularized_inverse_times_h(channels.entries, a,
                                               static_cast<double>(channels.antennas()) * rho);
}

/// H (H^H H)^{-1}.
inline CMatrix zf_directions(const ChannelMatrix &channels)
{
    const CMatrix &h = channels.entries;
    if (h.cols() > h.rows())
        throw DimensionError("zf_directions: zero forcing needs K <= N");
    Eigen::ColPivHouseholderQR<CMatrix> qr(h);
    if (qr.rank() < h.cols())
        throw InfeasibleError("ZF", "channel matrix is rank deficient");
    Eigen::LLT<CMatrix> llt(h.adjoint() * h);
    if (llt.info() != Eigen::Success)
        throw InfeasibleError("ZF", "H^H H is not invertible");
    const CMatrix eye = CMatrix::Identity(h.cols(), h.cols());
    return h * llt.solve(eye);
}

struct OlpOptions
{
    double tol = 1e-10;
    int max_iter = 500;
};

/// Optimal linear precoder. lambda solves
///   lambda_k = gamma_k / ((1 + gamma_k) h_k^H (sum_i lambda_i h_i h_i^H + N I)^{-1} h_k)
/// by Picard iteration from lambda = gamma (switching to damping 0.5 if the
/// relative change grows); directions C = (sum lambda_i h_i h_i^H + N I)^{-1} H
/// and p = sigma^2 D^{-1} 1.
///
/// Iterates in the K x K form: with G = H^H H,
///   H^H (H Lambda H^H + N I)^{-1} H = G (Lambda G + N I)^{-1},  C = H (Lambda G + N I)^{-1}.
inline PrecoderSolution solve_olp(const ChannelMatrix &channels, const SinrTargets &targets, double noise_w,
                                  OlpOptions opts = {})
{
    detail::check_targets(channels, targets);
    const Eigen::Index k = channels.users();
    const double n = static_cast<double>(channels.antennas());
    const CMatrix &h = channels.entries;
    const CMatrix gram = h.adjoint() * h;

    auto resolvent = [&](const Eigen::VectorXd &lambda) {
        CMatrix m = lambda.cast<cdouble>().asDiagonal() * gram;
        m.diagonal().array() += n;
        Eigen::PartialPivLU<CMatrix> lu(m);
        return CMatrix(lu.inverse());
    };

    Eigen::VectorXd gamma = Eigen::Map<const Eigen::VectorXd>(targets.gamma.data(), k);
    Eigen::VectorXd lambda = gamma;
    double damping = 1.0;
    double prev_change = std::numeric_limits<double>::infinity();
    std::vector<double> history;
    int it = 0;
    bool converged = false;
    for (; it < opts.max_iter; ++it)
    {
        const Eigen::VectorXd q = (gram * resolvent(lambda)).diagonal().real();
        Eigen::VectorXd next = gamma.array() / ((1.0 + gamma.array()) * q.array());
        next = damping * next + (1.0 - damping) * lambda;
        const double change = ((next - lambda).array().abs() / next.array()).maxCoeff();
        history.push_back(change);
        lambda = next;
        if (!lambda.allFinite())
            throw ConvergenceError("solve_olp: multipliers diverged");
        if (change < opts.tol)
        {
            converged = true;
            ++it;
            break;
        }
        if (change > prev_change && damping == 1.0 && it > 2)
            damping = 0.5;
        prev_change = change;
    }
    if (!converged)
        throw ConvergenceError("solve_olp: no convergence after " + std::to_string(opts.max_iter) + " iterations");

    const CMatrix c = h * resolvent(lambda);
    const std::vector<double> p = exact_power_allocation(channels, c, targets, noise_w, "OLP");
    PrecoderSolution s = build_solution(channels, c, p, noise_w);
    s.multipliers = std::vector<double>(lambda.data(), lambda.data() + k);
    s.iterations = it;
    s.change_history = std::move(history);
    return s;
}

} // namespace mobenergy

#endif // MOBENERGY_PRECODING_HPP
