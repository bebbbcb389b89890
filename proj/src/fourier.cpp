// Copyright 2026 The eqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eqsim/fourier.hpp"

#include <cmath>
#include <numbers>

namespace eqsim {

GridTransform::GridTransform(const MomentumAxis &axis) : grid_(axis.spatial_grid()) {
    const auto n = static_cast<Eigen::Index>(axis.size());
    const double dp = axis.spacing();
    const double dx = grid_.spacing();
    const double root = std::sqrt(2.0 * std::numbers::pi);
    forward_.resize(n, n);
    inverse_.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double p = axis.momentum(static_cast<std::size_t>(k));
        for (Eigen::Index j = 0; j < n; ++j) {
            const double phase = p * grid_.x(static_cast<std::size_t>(j));
            const cplx e = std::polar(1.0, -phase);
            forward_(k, j) = e * (dx / root);
            inverse_(j, k) = std::conj(e) * (dp / root);
        }
    }
}

}  // namespace eqsim
