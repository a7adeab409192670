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

#ifndef MOBENERGY_GEOMETRY_HPP
#define MOBENERGY_GEOMETRY_HPP

#include "mobenergy/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

namespace mobenergy
{

/// Position in meters relative to the base station at the origin.
using Point = Eigen::Vector2d;

/// Circular cell of radius R centred on the base station.
struct CellGeometry
{
    double radius_m = 500.0;

    explicit CellGeometry(double radius) : radius_m(radius)
    {
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw std::invalid_argument("CellGeometry: radius must be positive and finite");
    }

    double area_m2() const { return std::numbers::pi * radius_m * radius_m; }
    bool contains(const Point &p) const { return p.norm() <= radius_m; }
};

/// Random walk with fixed step length and step interval.
///
/// The Brownian limit has E|x(t) - x(0)|^2 = t l^2 / xi, i.e. a generator
/// D_eff * Laplacian with D_eff = l^2 / (4 xi). `diffusion_factor` rescales
/// the value handed to the analytic side (1.0 is the plain 2-D walk).
struct WalkParams
{
    double step_m = 50.0;
    double interval_s = 30.0;
    double diffusion_factor = 1.0;

    WalkParams(double step, double interval, double factor = 1.0)
        : step_m(step), interval_s(interval), diffusion_factor(factor)
    {
        if (!(step >= 0.0) || !std::isfinite(step))
            throw std::invalid_argument("WalkParams: step must be non-negative and finite");
        if (!(interval > 0.0) || !std::isfinite(interval))
            throw std::invalid_argument("WalkParams: interval must be positive and finite");
        if (!(factor > 0.0))
            throw std::invalid_argument("WalkParams: diffusion factor must be positive");
    }

    /// l^2 / (4 xi), in m^2/s.
    double diffusion_m2_per_s() const { return step_m * step_m / (4.0 * interval_s); }

    /// Coefficient used by the heat kernel and the covariance series.
    double effective_diffusion_m2_per_s() const { return diffusion_factor * diffusion_m2_per_s(); }

    double speed_m_per_s() const { return step_m / interval_s; }
};

/// Uniform points on the disc: radius R*sqrt(U), angle 2*pi*V.
inline std::vector<Point> sample_initial_positions(std::size_t k, const CellGeometry &geometry, Rng &rng)
{
    if (k == 0)
        throw std::invalid_argument("sample_initial_positions: k must be >= 1");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Point> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
    {
        const double r = geometry.radius_m * std::sqrt(unif(rng));
        const double th = 2.0 * std::numbers::pi * unif(rng);
        out.emplace_back(r * std::cos(th), r * std::sin(th));
    }
    return out;
}

/// Moves `position` by `length` along `direction` (unit vector) inside the disc,
/// reflecting specularly off the boundary circle as many times as needed.
inline Point reflect_path(Point position, Point direction, double length, double radius)
{
    double remaining = length;
    const double r2 = radius * radius;
    for (int bounce = 0; bounce < 100000 && remaining > 0.0; ++bounce)
    {
        const double pu = position.dot(direction);
        const double c = position.squaredNorm() - r2; // <= 0 inside
        const double disc = pu * pu - std::min(c, 0.0);
        const double t_exit = -pu + std::sqrt(std::max(disc, 0.0));
        if (t_exit >= remaining)
        {
            position += remaining * direction;
            remaining = 0.0;
            break;
        }
        position += t_exit * direction;
        const Point normal = position / position.norm();
        position = normal * radius;
        direction -= 2.0 * direction.dot(normal) * normal;
        direction.normalize();
        remaining -= t_exit;
    }
    const double n = position.norm();
    if (n > radius)
    {
        if (n > radius * (1.0 + 1e-9))
            throw std::logic_error("reflect_path: walker left the cell");
        position *= radius / n;
    }
    return position;
}

/// One step of the walk: uniform direction, length l, specular reflection at the edge.
inline Point step_walk(const Point &position, const WalkParams &params, const CellGeometry &geometry, Rng &rng)
{
    if (position.norm() > geometry.radius_m * (1.0 + 1e-12))
        throw std::invalid_argument("step_walk: position outside the cell");
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double th = angle(rng);
    if (params.step_m == 0.0)
        return position;
    return reflect_path(position, Point(std::cos(th), std::sin(th)), params.step_m, geometry.radius_m);
}

/// Positions of one user at t = 0, xi, 2 xi, ..., floor(T / xi) xi.
struct Trajectory
{
    std::vector<Point> positions;
    double slot_duration_s = 0.0;
    int user_index = 0;
};

inline std::size_t slot_count(double horizon_s, double slot_s)
{
    return static_cast<std::size_t>(std::floor(horizon_s / slot_s + 1e-9));
}

inline Trajectory generate_trajectory(const Point &start, double horizon_s, const WalkParams &params,
                                      const CellGeometry &geometry, Rng &rng, int user_index = 0)
{
    Trajectory tr;
    tr.slot_duration_s = params.interval_s;
    tr.user_index = user_index;
    const std::size_t n = slot_count(horizon_s, params.interval_s);
    tr.positions.reserve(n + 1);
    tr.positions.push_back(start);
    for (std::size_t i = 0; i < n; ++i)
        tr.positions.push_back(step_walk(tr.positions.back(), params, geometry, rng));
    return tr;
}

/// CSV export: trial,user,slot,x_m,y_m
inline void write_trajectories_csv(std::ostream &os, const std::vector<std::vector<Trajectory>> &trials)
{
    os << "trial,user,slot,x_m,y_m\n";
    os.precision(17);
    for (std::size_t t = 0; t < trials.size(); ++t)
        for (const auto &tr : trials[t])
            for (std::size_t s = 0; s < tr.positions.size(); ++s)
                os << t << ',' << tr.user_index << ',' << s << ',' << tr.positions[s].x() << ','
                   << tr.positions[s].y() << '\n';
}

} // namespace mobenergy

#endif // MOBENERGY_GEOMETRY_HPP
