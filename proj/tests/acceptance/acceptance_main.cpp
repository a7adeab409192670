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

// Acceptance suite: prints one PASS/FAIL line per criterion (details indented
// below it) and exits non-zero if any criterion fails.
// Usage: acceptance [criterion-id ...]

#include "mobenergy/validation.hpp"

#include <cstdlib>
#include <iostream>
#include <vector>

int main(int argc, char **argv)
{
    std::vector<int> only;
    for (int i = 1; i < argc; ++i)
        only.push_back(std::atoi(argv[i]));
    const mobenergy::validation::Options opt;
    const int failed = mobenergy::validation::run_all(std::cout, opt, only);
    std::cout << (failed == 0 ? "all acceptance criteria passed" : std::to_string(failed) + " criterion(s) failed")
              << '\n';
    return failed == 0 ? 0 : 1;
}
