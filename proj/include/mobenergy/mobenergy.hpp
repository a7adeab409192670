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

#ifndef MOBENERGY_MOBENERGY_HPP
#define MOBENERGY_MOBENERGY_HPP

#include "mobenergy/asymptotics.hpp"
#include "mobenergy/channel.hpp"
#include "mobenergy/config.hpp"
#include "mobenergy/energy.hpp"
#include "mobenergy/geometry.hpp"
#include "mobenergy/heat_kernel.hpp"
#include "mobenergy/pathloss_covariance.hpp"
#include "mobenergy/planner.hpp"
#include "mobenergy/precoding.hpp"
#include "mobenergy/quadrature.hpp"
#include "mobenergy/random.hpp"
#include "mobenergy/report.hpp"
#include "mobenergy/scheme.hpp"
#include "mobenergy/simkit.hpp"
#include "mobenergy/specfun.hpp"
#include "mobenergy/stats.hpp"
#include "mobenergy/units.hpp"

#endif // MOBENERGY_MOBENERGY_HPP
