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

#ifndef MOBENERGY_UNITS_HPP
#define MOBENERGY_UNITS_HPP

#include <cmath>

// All dB / dBm / time-unit conversions live here. Library code works in
// SI units (meters, seconds, watts, joules) everywhere else.

namespace mobenergy::units
{

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// dBm -> watts: -97.8 dBm -> 10^(-12.78) W.
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

constexpr double seconds_per_minute = 60.0;
constexpr double seconds_per_hour = 3600.0;

inline double hours_to_seconds(double h) { return h * seconds_per_hour; }
inline double seconds_to_hours(double s) { return s / seconds_per_hour; }

// Diffusion coefficients are often quoted per minute.
inline double m2_per_minute_to_m2_per_second(double d) { return d / seconds_per_minute; }

inline double joules_to_watt_hours(double j) { return j / seconds_per_hour; }

// Spectral efficiency target -> linear SINR target.
inline double rate_to_sinr(double rate_bps_hz) { return std::exp2(rate_bps_hz) - 1.0; }

} // namespace mobenergy::units

#endif // MOBENERGY_UNITS_HPP
