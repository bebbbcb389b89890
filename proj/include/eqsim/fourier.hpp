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

#pragma once

#include "eqsim/core.hpp"

namespace eqsim {

/// Dense discrete Fourier pair between a grid MomentumAxis and its dual
/// spatial grid:
///   f~(p_k) = dx / sqrt(2 pi) * sum_j f(x_j) exp(-i p_k x_j)
///   f(x_j)  = dp / sqrt(2 pi) * sum_k f~(p_k) exp(+i p_k x_j)
/// With L = 2 pi / dp the pair is exactly inverse and Parseval holds with
/// weights dx and dp.
class GridTransform {
   public:
    explicit GridTransform(const MomentumAxis &axis);

    /// Columns are independent components; rows are grid points.
    Eigen::MatrixXcd to_momentum(const Eigen::MatrixXcd &position) const { return forward_ * position; }
    Eigen::MatrixXcd to_position(const Eigen::MatrixXcd &momentum) const { return inverse_ * momentum; }

    const SpatialGrid &spatial_grid() const noexcept { return grid_; }

   private:
    SpatialGrid grid_;
    Eigen::MatrixXcd forward_;
    Eigen::MatrixXcd inverse_;
};

}  // namespace eqsim
