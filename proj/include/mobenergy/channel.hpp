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

#ifndef MOBENERGY_CHANNEL_HPP
#define MOBENERGY_CHANNEL_HPP

#include "mobenergy/geometry.hpp"
#include "mobenergy/random.hpp"
#include "mobenergy/units.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobenergy
{

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

class DimensionError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Large-scale attenuation l(x) = 2 L / (1 + (|x| / xbar)^beta).
struct PathlossModel
{
    double beta = 4.0;
    double xbar_m = 25.0;
    double l_xbar = 0.0; // linear attenuation at the cut-off distance

    PathlossModel(double exponent, double cutoff_m, double attenuation_at_cutoff)
        : beta(exponent), xbar_m(cutoff_m), l_xbar(attenuation_at_cutoff)
    {
        if (!(exponent > 0.0))
            throw std::invalid_argument("PathlossModel: exponent must be positive");
        if (!(cutoff_m > 0.0))
            throw std::invalid_argument("PathlossModel: cut-off distance must be positive");
        if (!(attenuation_at_cutoff > 0.0))
            throw std::invalid_argument("PathlossModel: attenuation must be positive");
    }

    static PathlossModel from_db(double exponent, double cutoff_m, double attenuation_db)
    {
        return PathlossModel(exponent, cutoff_m, units::db_to_linear(attenuation_db));
    }

    double at_distance(double d) const { return 2.0 * l_xbar / (1.0 + std::pow(d / xbar_m, beta)); }
    double inverse_at_distance(double d) const { return (1.0 + std::pow(d / xbar_m, beta)) / (2.0 * l_xbar); }
};

inline double pathloss(const Point &x, const PathlossModel &model) { return model.at_distance(x.norm()); }

/// Disc average of 1/l(x) in closed form.
inline double mean_inverse_pathloss(const PathlossModel &model, const CellGeometry &geometry)
{
    const double ratio = std::pow(geometry.radius_m / model.xbar_m, model.beta);
    return ratio / (2.0 * model.l_xbar) * (2.0 / (2.0 + model.beta) + 1.0 / ratio);
}

/// Disc average of 1/l(x)^2 in closed form (variance of l^-1 under the uniform law).
inline double mean_squared_inverse_pathloss(const PathlossModel &model, const CellGeometry &geometry)
{
    const double ratio = std::pow(geometry.radius_m / model.xbar_m, model.beta);
    const double b = model.beta;
    return (1.0 + 4.0 * ratio / (b + 2.0) + 2.0 * ratio * ratio / (2.0 * b + 2.0)) /
           (4.0 * model.l_xbar * model.l_xbar);
}

/// N x K matrix of i.i.d. CN(0, 1) entries.
inline CMatrix draw_fading(Eigen::Index n, Eigen::Index k, Rng &rng)
{
    if (n < 1 || k < 1)
        throw DimensionError("draw_fading: dimensions must be >= 1");
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    CMatrix w(n, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double re = g(rng);
            const double im = g(rng);
            w(i, j) = cdouble(re, im);
        }
    return w;
}

/// Channel matrix H = [h_1 ... h_K] with h_k = sqrt(l(x_k)) w_k.
struct ChannelMatrix
{
    CMatrix entries;
    std::vector<Point> positions;
    std::vector<double> attenuation; // l(x_k), cached

    Eigen::Index antennas() const { return entries.rows(); }
    Eigen::Index users() const { return entries.cols(); }
};

inline ChannelMatrix assemble_channels(const std::vector<Point> &positions, const CMatrix &fading,
                                       const PathlossModel &model)
{
    if (static_cast<Eigen::Index>(positions.size()) != fading.cols())
        throw DimensionError("assemble_channels: " + std::to_string(positions.size()) + " positions for " +
                             std::to_string(fading.cols()) + " fading columns");
    ChannelMatrix h;
    h.positions = positions;
    h.entries = fading;
    h.attenuation.reserve(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k)
    {
        const double l = pathloss(positions[k], model);
        h.attenuation.push_back(l);
        h.entries.col(static_cast<Eigen::Index>(k)) *= std::sqrt(l);
    }
    return h;
}

/// Per-user channel-estimate quality tau_k in [0, 1); 0 is perfect CSI.
struct CsiQuality
{
    std::vector<double> tau;

    static CsiQuality uniform(std::size_t k, double t) { return CsiQuality{std::vector<double>(k, t)}; }

    bool perfect() const
    {
        for (double t : tau)
            if (t != 0.0)
                return false;
        return true;
    }
};

/// Gauss-Markov estimate: h_hat_k = sqrt(l_k) (sqrt(1 - tau_k^2) w_k + tau_k e_k).
/// Marginal statistics are preserved; corr(h_hat, h) = sqrt(1 - tau^2).
inline ChannelMatrix corrupt_csi(const ChannelMatrix &truth, const CsiQuality &quality, Rng &rng)
{
    if (static_cast<Eigen::Index>(quality.tau.size()) != truth.users())
        throw DimensionError("corrupt_csi: one tau per user required");
    for (double t : quality.tau)
        if (!(t >= 0.0 && t < 1.0))
            throw std::invalid_argument("corrupt_csi: tau must lie in [0, 1)");
    if (quality.perfect())
        return truth;
    ChannelMatrix est = truth;
    const CMatrix err = draw_fading(truth.antennas(), truth.users(), rng);
    for (Eigen::Index k = 0; k < truth.users(); ++k)
    {
        const double t = quality.tau[static_cast<std::size_t>(k)];
        if (t == 0.0)
            continue;
        const double sl = std::sqrt(truth.attenuation[static_cast<std::size_t>(k)]);
        est.entries.col(k) = std::sqrt(1.0 - t * t) * truth.entries.col(k) + (t * sl) * err.col(k);
    }
    return est;
}

} // namespace mobenergy

#endif // MOBENERGY_CHANNEL_HPP
