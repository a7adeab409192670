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

#ifndef MOBENERGY_SCHEME_HPP
#define MOBENERGY_SCHEME_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mobenergy
{

/// Linear precoding schemes. RzfStatistical regularises with alpha_k = 1/l(x_k);
/// RzfClassical uses alpha_k = 1.
enum class Scheme
{
    Olp,
    Mrt,
    Zf,
    RzfStatistical,
    RzfClassical,
};

/// Schemes whose asymptotic power has the form c sigma^2 A(t) / eta.
inline constexpr std::array<Scheme, 4> unified_schemes{Scheme::Olp, Scheme::Mrt, Scheme::Zf, Scheme::RzfStatistical};

inline std::string_view to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::Olp: return "olp";
    case Scheme::Mrt: return "mrt";
    case Scheme::Zf: return "zf";
    case Scheme::RzfStatistical: return "rzf";
    case Scheme::RzfClassical: return "rzf-classical";
    }
    return "?";
}

inline std::string display_name(Scheme s)
{
    switch (s)
    {
    case Scheme::Olp: return "OLP";
    case Scheme::Mrt: return "MRT";
    case Scheme::Zf: return "ZF";
    case Scheme::RzfStatistical: return "RZF";
    case Scheme::RzfClassical: return "RZF-classical";
    }
    return "?";
}

inline Scheme scheme_from_string(std::string_view name)
{
    for (Scheme s : {Scheme::Olp, Scheme::Mrt, Scheme::Zf, Scheme::RzfStatistical, Scheme::RzfClassical})
        if (to_string(s) == name)
            return s;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (expected olp|mrt|zf|rzf|rzf-classical)");
}

/// Raised when a scheme cannot meet the SINR targets (eta <= 0, negative power, ...).
class InfeasibleError : public std::runtime_error
{
  public:
    InfeasibleError(const std::string &who, const std::string &what)
        : std::runtime_error(who + " infeasible: " + what), who_(who)
    {
    }
    const std::string &who() const { return who_; }

  private:
    std::string who_;
};

class ConvergenceError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace mobenergy

#endif // MOBENERGY_SCHEME_HPP
