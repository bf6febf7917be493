// Copyright 2026 The losys Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>

#include "losys/errors.hpp"

namespace losys {

/// Numeric thresholds shared across the library.
///
/// eps_herm   — entrywise slack for hermiticity checks
/// eps_psd    — eigenvalue slack below zero still counted as positive
///              (boundary points belong to the closed cones)
/// eps_decide — decision slack for certificates and residuals
struct Tolerances {
  double eps_herm = 1e-10;
  double eps_psd = 1e-9;
  double eps_decide = 1e-7;
  std::size_t max_restarts = 64;
  std::size_t max_iters = 10000;

  void validate() const {
    if (!(eps_herm > 0.0 && eps_psd > 0.0 && eps_decide > 0.0))
      throw Error("Tolerances: all epsilons must be strictly positive");
    if (!(eps_psd < eps_decide))
      throw Error("Tolerances: eps_psd must be smaller than eps_decide");
    if (max_restarts == 0 || max_iters == 0)
      throw Error("Tolerances: iteration budgets must be positive");
  }
};

}  // namespace losys
