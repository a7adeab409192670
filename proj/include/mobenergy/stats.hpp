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

#ifndef MOBENERGY_STATS_HPP
#define MOBENERGY_STATS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace mobenergy::stats
{

inline double mean(const std::vector<double> &x)
{
    if (x.empty())
        throw std::invalid_argument("stats::mean: empty sample");
    double s = 0.0;
    for (double v : x)
        s += v;
    return s / static_cast<double>(x.size());
}

/// Unbiased sample variance.
inline double variance(const std::vector<double> &x)
{
    if (x.size() < 2)
        throw std::invalid_argument("stats::variance: need at least two samples");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x)
        s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

/// sup_x |F_n(x) - F(x)| for a continuous reference CDF.
inline double ks_statistic(std::vector<double> x, const std::function<double(double)> &cdf)
{
    if (x.empty())
        throw std::invalid_argument("stats::ks_statistic: empty sample");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Asymptotic Kolmogorov p-value with the small-sample correction
/// lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
inline double ks_pvalue(double d, std::size_t n)
{
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 1e-3)
        return 1.0;
    double p = 0.0;
    for (int k = 1; k <= 200; ++k)
    {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        p += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16)
            break;
    }
    return std::clamp(p, 0.0, 1.0);
}

struct LineFit
{
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (log x, log y).
inline LineFit loglog_fit(const std::vector<double> &x, const std::vector<double> &y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("stats::loglog_fit: need at least two paired points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        if (!(x[i] > 0.0 && y[i] > 0.0))
            throw std::invalid_argument("stats::loglog_fit: values must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

inline double median(std::vector<double> x)
{
    if (x.empty())
        throw std::invalid_argument("stats::median: empty sample");
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

} // namespace mobenergy::stats

#endif // MOBENERGY_STATS_HPP
