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

#ifndef MOBENERGY_PATHLOSS_COVARIANCE_HPP
#define MOBENERGY_PATHLOSS_COVARIANCE_HPP

#include "mobenergy/channel.hpp"
#include "mobenergy/energy.hpp"
#include "mobenergy/geometry.hpp"
#include "mobenergy/random.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mobenergy
{

// Monte-Carlo estimates of the mobility covariance of 1/l(x(t)), used to
// check the Bessel-series constant and to calibrate the diffusion factor.

struct CovarianceEstimate
{
    double tau_s = 0.0;
    double s_s = 0.0;
    double covariance = 0.0;
    double standard_error = 0.0;
};

/// Sample covariance of 1/l(x(tau)), 1/l(x(s)) over walks from uniform initial positions.
/// Times are rounded down to whole walk steps.
inline std::vector<CovarianceEstimate> empirical_pathloss_covariance(const WalkParams &params,
                                                                     const CellGeometry &geometry,
                                                                     const PathlossModel &model,
                                                                     const std::vector<std::pair<double, double>> &t_pairs,
                                                                     std::size_t trials, std::uint64_t seed)
{
    if (trials < 1000)
        throw std::invalid_argument("empirical_pathloss_covariance: at least 1000 trials required");
    std::size_t max_step = 0;
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    for (const auto &[a, b] : t_pairs)
    {
        if (a < 0.0 || b < 0.0)
            throw std::invalid_argument("empirical_pathloss_covariance: times must be non-negative");
        const std::size_t i = slot_count(a, params.interval_s);
        const std::size_t j = slot_count(b, params.interval_s);
        idx.emplace_back(i, j);
        max_step = std::max({max_step, i, j});
    }
    const std::size_t m = t_pairs.size();
    std::vector<double> sx(m, 0.0), sy(m, 0.0), sxy(m, 0.0), sxxyy(m, 0.0);
    std::vector<double> path(max_step + 1);
    for (std::size_t t = 0; t < trials; ++t)
    {
        Rng rng = make_rng(seed, t);
        Point x = sample_initial_positions(1, geometry, rng).front();
        path[0] = 1.0 / pathloss(x, model);
        for (std::size_t s = 1; s <= max_step; ++s)
        {
            x = step_walk(x, params, geometry, rng);
            path[s] = 1.0 / pathloss(x, model);
        }
        for (std::size_t q = 0; q < m; ++q)
        {
            const double a = path[idx[q].first];
            const double b = path[idx[q].second];
            sx[q] += a;
            sy[q] += b;
            sxy[q] += a * b;
            sxxyy[q] += a * a * b * b;
        }
    }
    const double n = static_cast<double>(trials);
    std::vector<CovarianceEstimate> out;
    for (std::size_t q = 0; q < m; ++q)
    {
        CovarianceEstimate e;
        e.tau_s = t_pairs[q].first;
        e.s_s = t_pairs[q].second;
        const double mx = sx[q] / n, my = sy[q] / n;
        e.covariance = (sxy[q] - n * mx * my) / (n - 1.0);
        // Standard error of the mean of the product, ignoring the centring error.
        const double m2 = sxxyy[q] / n - (sxy[q] / n) * (sxy[q] / n);
        e.standard_error = std::sqrt(std::max(m2, 0.0) / n);
        out.push_back(e);
    }
    return out;
}

/// Time integral of 1/l along one walk over [0, T], trapezoid rule on the walk
/// samples (the last partial step weighted by its length).
inline double integrate_inverse_pathloss(Point x, double horizon_s, const WalkParams &params,
                                         const CellGeometry &geometry, const PathlossModel &model, Rng &rng)
{
    const std::size_t steps = slot_count(horizon_s, params.interval_s);
    const double xi = params.interval_s;
    double prev = 1.0 / pathloss(x, model);
    double sum = 0.0;
    for (std::size_t s = 0; s < steps; ++s)
    {
        x = step_walk(x, params, geometry, rng);
        const double cur = 1.0 / pathloss(x, model);
        sum += 0.5 * (prev + cur) * xi;
        prev = cur;
    }
    sum += (horizon_s - static_cast<double>(steps) * xi) * prev;
    return sum;
}

struct IntegratedCovariance
{
    double value = 0.0;          // m^... : Var of int_0^T 1/l(x(t)) dt
    double standard_error = 0.0;
    double scaled_time = 0.0;    // D T / R^2 with the nominal D
    std::size_t paths = 0;
};

/// Conditional variance of int_0^T 1/l(x(t)) dt given the start point, averaged over
/// uniform start points: `groups` start points, `paths_per_group` walks from each.
inline IntegratedCovariance integrated_covariance_conditional(const WalkParams &params, const CellGeometry &geometry,
                                                              const PathlossModel &model, double horizon_s,
                                                              std::size_t groups, std::size_t paths_per_group,
                                                              std::uint64_t seed)
{
    if (groups < 2 || paths_per_group < 2)
        throw std::invalid_argument("integrated_covariance_conditional: need >= 2 groups and >= 2 paths per group");
    std::vector<double> within;
    within.reserve(groups);
    std::vector<double> y(paths_per_group);
    for (std::size_t g = 0; g < groups; ++g)
    {
        Rng start_rng = make_rng(seed, 2 * g);
        const Point x0 = sample_initial_positions(1, geometry, start_rng).front();
        Rng rng = make_rng(seed, 2 * g + 1);
        double mean = 0.0;
        for (std::size_t j = 0; j < paths_per_group; ++j)
        {
            y[j] = integrate_inverse_pathloss(x0, horizon_s, params, geometry, model, rng);
            mean += y[j];
        }
        mean /= static_cast<double>(paths_per_group);
        double v = 0.0;
        for (double yj : y)
            v += (yj - mean) * (yj - mean);
        within.push_back(v / static_cast<double>(paths_per_group - 1));
    }
    IntegratedCovariance out;
    double m = 0.0;
    for (double v : within)
        m += v;
    m /= static_cast<double>(groups);
    double s2 = 0.0;
    for (double v : within)
        s2 += (v - m) * (v - m);
    s2 /= static_cast<double>(groups - 1);
    out.value = m;
    out.standard_error = std::sqrt(s2 / static_cast<double>(groups));
    out.scaled_time = params.diffusion_m2_per_s() * horizon_s / (geometry.radius_m * geometry.radius_m);
    out.paths = groups * paths_per_group;
    return out;
}

/// Total variance of int_0^T 1/l(x(t)) dt with a fresh uniform start per walk.
inline IntegratedCovariance integrated_covariance_stationary(const WalkParams &params, const CellGeometry &geometry,
                                                             const PathlossModel &model, double horizon_s,
                                                             std::size_t paths, std::uint64_t seed)
{
    if (paths < 2)
        throw std::invalid_argument("integrated_covariance_stationary: need >= 2 paths");
    std::vector<double> y(paths);
    double mean = 0.0;
    for (std::size_t j = 0; j < paths; ++j)
    {
        Rng rng = make_rng(seed, j);
        const Point x0 = sample_initial_positions(1, geometry, rng).front();
        y[j] = integrate_inverse_pathloss(x0, horizon_s, params, geometry, model, rng);
        mean += y[j];
    }
    mean /= static_cast<double>(paths);
    double v = 0.0, m4 = 0.0;
    for (double yj : y)
    {
        const double d = (yj - mean) * (yj - mean);
        v += d;
        m4 += d * d;
    }
    const double n = static_cast<double>(paths);
    v /= n - 1.0;
    m4 /= n;
    IntegratedCovariance out;
    out.value = v;
    out.standard_error = std::sqrt(std::max(m4 - v * v, 0.0) / n);
    out.scaled_time = params.diffusion_m2_per_s() * horizon_s / (geometry.radius_m * geometry.radius_m);
    out.paths = paths;
    return out;
}

/// Series prediction (T R^2 / D) Theta for the same quantity.
inline double integrated_covariance_theory(const PathlossModel &model, const CellGeometry &geometry,
                                           double diffusion_m2_per_s, double horizon_s,
                                           TimeWeight weight = TimeWeight::Conditional, std::size_t terms = 100)
{
    ThetaOptions opts;
    opts.terms = terms;
    opts.weight = weight;
    const double th = theta(model, geometry.radius_m, diffusion_m2_per_s, horizon_s, opts).value;
    return horizon_s * geometry.radius_m * geometry.radius_m / diffusion_m2_per_s * th;
}

struct DiffusionCalibration
{
    double factor = 1.0;
    double rms_log_error = 0.0;
};

/// Multiplier f on the nominal diffusion l^2/(4 xi) that best explains a set of
/// Monte-Carlo conditional variances (least squares in log ratio, golden section on [0.25, 4]).
inline DiffusionCalibration calibrate_diffusion_factor(const std::vector<IntegratedCovariance> &estimates,
                                                       const std::vector<double> &horizons_s,
                                                       const WalkParams &params, const CellGeometry &geometry,
                                                       const PathlossModel &model, std::size_t terms = 60)
{
    if (estimates.size() != horizons_s.size() || estimates.empty())
        throw std::invalid_argument("calibrate_diffusion_factor: one horizon per estimate required");
    auto loss = [&](double f) {
        double s = 0.0;
        for (std::size_t i = 0; i < estimates.size(); ++i)
        {
            const double th = integrated_covariance_theory(model, geometry, f * params.diffusion_m2_per_s(),
                                                           horizons_s[i], TimeWeight::Conditional, terms);
            const double e = std::log(estimates[i].value / th);
            s += e * e;
        }
        return s / static_cast<double>(estimates.size());
    };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(0.25), b = std::log(4.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = loss(std::exp(x1)), f2 = loss(std::exp(x2));
    while (b - a > 1e-6)
    {
        if (f1 < f2)
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = loss(std::exp(x1));
        }
        else
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = loss(std::exp(x2));
        }
    }
    DiffusionCalibration out;
    out.factor = std::exp(0.5 * (a + b));
    out.rms_log_error = std::sqrt(loss(out.factor));
    return out;
}

} // namespace mobenergy

#endif // MOBENERGY_PATHLOSS_COVARIANCE_HPP
