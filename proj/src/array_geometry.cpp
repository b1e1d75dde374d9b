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

#include "holo/array_geometry.hpp"
#include "holo/error.hpp"

#include <cmath>
#include <string>

namespace holo
{
    namespace
    {
        std::size_t grid_count(double aperture, double spacing, const char *axis)
        {
            const double ratio = aperture / spacing;
            const double rounded = std::round(ratio);
            if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio)
                throw Error(ErrorCode::NonIntegerGrid, std::string("spacing does not divide aperture along ") + axis +
                                                           " (ratio " + std::to_string(ratio) + ")");
            return static_cast<std::size_t>(rounded);
        }
    }

    ArrayGeometry build_planar_array(double aperture_x, double aperture_y, double spacing_x, double spacing_y)
    {
        if (!(aperture_x > 0.0) || !(aperture_y > 0.0) || !(spacing_x > 0.0) || !(spacing_y > 0.0))
            throw Error(ErrorCode::NonPositiveInput, "apertures and spacings must be strictly positive");

        ArrayGeometry g;
        g.aperture_x = aperture_x;
        g.aperture_y = aperture_y;
        g.spacing_x = spacing_x;
        g.spacing_y = spacing_y;
        g.count_x = grid_count(aperture_x, spacing_x, "x");
        g.count_y = grid_count(aperture_y, spacing_y, "y");

        const double cx = 0.5 * double(g.count_x - 1);
        const double cy = 0.5 * double(g.count_y - 1);

        g.elements.resize(3, Eigen::Index(g.size()));
        for (std::size_t iy = 0; iy < g.count_y; ++iy)
            for (std::size_t ix = 0; ix < g.count_x; ++ix)
            {
                const auto p = Eigen::Index(iy * g.count_x + ix);
                g.elements(0, p) = (double(ix) - cx) * spacing_x;
                g.elements(1, p) = (double(iy) - cy) * spacing_y;
                g.elements(2, p) = 0.0;
            }
        return g;
    }

    Eigen::Vector3d element_position(const ArrayGeometry &geometry, std::size_t p)
    {
        if (p >= geometry.size())
            throw Error(ErrorCode::IndexOutOfRange, "element index " + std::to_string(p) + " >= " +
                                                        std::to_string(geometry.size()));
        return geometry.elements.col(Eigen::Index(p));
    }
}
