// SPDX-License-Identifier: Apache-2.0
//
// holo - holographic MIMO channel synthesis and capacity evaluation
// Copyright (C) 2026 The holo authors
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

#ifndef HOLO_ARRAY_GEOMETRY_HPP
#define HOLO_ARRAY_GEOMETRY_HPP

#include <Eigen/Core>
#include <cstddef>

namespace holo
{
    // Uniform planar array in its local frame. All lengths are in wavelengths.
    // Elements are stored column-wise, y-outer / x-inner:
    //   p = iy * count_x + ix
    // and the grid is centered on the origin (z = 0 for every element).
    struct ArrayGeometry
    {
        double aperture_x = 0.0;
        double aperture_y = 0.0;
        double spacing_x = 0.0;
        double spacing_y = 0.0;
        std::size_t count_x = 0;
        std::size_t count_y = 0;
        Eigen::Matrix3Xd elements; // Size [3, count_x * count_y]

        std::size_t size() const { return count_x * count_y; }
    };

    // Throws NonPositiveInput or NonIntegerGrid (aperture/spacing must be integral within 1e-9 relative).
    ArrayGeometry build_planar_array(double aperture_x, double aperture_y, double spacing_x, double spacing_y);

    // Square aperture with equal spacing on both axes.
    inline ArrayGeometry build_planar_array(double aperture, double spacing)
    {
        return build_planar_array(aperture, aperture, spacing, spacing);
    }

    // Throws IndexOutOfRange for p >= N.
    Eigen::Vector3d element_position(const ArrayGeometry &geometry, std::size_t p);
}

#endif
