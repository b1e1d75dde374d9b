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

#ifndef HOLO_PLANE_WAVE_LATTICE_HPP
#define HOLO_PLANE_WAVE_LATTICE_HPP

#include "holo/angular_spectrum.hpp"
#include "holo/array_geometry.hpp"
#include "holo/error.hpp"

#include <Eigen/Core>
#include <compare>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace holo
{
    // Integer spatial-frequency index of a Fourier harmonic on a planar aperture.
    struct HarmonicIndex
    {
        int ix = 0;
        int iy = 0;
        auto operator<=>(const HarmonicIndex &) const = default;
    };

    // Direction cosines (u, v) = (ix / Lx, iy / Ly), apertures in wavelengths.
    inline Eigen::Vector2d direction_cosines(HarmonicIndex index, double aperture_x, double aperture_y)
    {
        return {double(index.ix) / aperture_x, double(index.iy) / aperture_y};
    }

    // (ix/Lx)^2 + (iy/Ly)^2 <= 1
    bool in_lattice_ellipse(HarmonicIndex index, double aperture_x, double aperture_y);

    // All propagating harmonics, sorted by (ix, iy).
    std::vector<HarmonicIndex> enumerate_lattice(double aperture_x, double aperture_y);

    struct HarmonicAngles
    {
        double elevation = 0.0; // rad, [0, pi/2]
        double azimuth = 0.0;   // rad, (-pi, pi]; 0 for the (0, 0) harmonic
    };

    // Plane-wave direction of a harmonic. Throws IndexOutsideEllipse.
    HarmonicAngles harmonic_angles(HarmonicIndex index, double aperture_x, double aperture_y);

    struct QuadratureOptions
    {
        double relative_tolerance = 1e-8; // target for the adaptive Gauss-Kronrod passes
        unsigned max_depth = 16;
        double acceptance = 1e-3; // QuadratureNotConverged above this relative error estimate
        // Cells whose integral is below this are judged against it instead of their own value.
        // Spectra carry unit (VMF) or 2 pi (isotropic) hemisphere mass, so 1e-9 is negligible.
        double absolute_floor = 1e-9;
    };

    // Spectral integral of A^2 sin(theta) dtheta dphi over the region of the upper
    // hemisphere whose direction cosines are closer (in units of 1/L per axis) to this
    // harmonic than to any other propagating harmonic. Interior regions are the centred
    // 1/Lx x 1/Ly rectangles; rim regions absorb the parts of the disk that belong to no
    // propagating index. The regions of one lattice tile the disk exactly once, so the
    // isotropic integrals sum to 2 pi.
    // Throws IndexOutsideEllipse, QuadratureNotConverged.
    double marginal_integral(HarmonicIndex index, const AngularPowerSpectrum &spectrum, double aperture_x,
                             double aperture_y, const QuadratureOptions &options = {});

    struct SpectralLattice
    {
        double aperture_x = 0.0;
        double aperture_y = 0.0;
        std::vector<HarmonicIndex> indices;
        Eigen::VectorXd marginal_integrals;

        std::size_t size() const { return indices.size(); }
    };

    SpectralLattice build_spectral_lattice(double aperture_x, double aperture_y, const AngularPowerSpectrum &spectrum,
                                           const QuadratureOptions &options = {});

    // sigma^2(l, m) = scale * I_R(l) * I_S(m), with the scale chosen so the table sums to one.
    struct VarianceTable
    {
        SpectralLattice bs_lattice;
        SpectralLattice ue_lattice;
        double scale = 0.0;

        // [n_R, n_S]
        Eigen::MatrixXd variances() const
        {
            return scale * ue_lattice.marginal_integrals * bs_lattice.marginal_integrals.transpose();
        }
    };

    // Throws DegenerateSpectrum when either end integrates to zero.
    VarianceTable build_variance_table(SpectralLattice bs_lattice, SpectralLattice ue_lattice);

    enum class LinkEnd
    {
        Transmit, // exp(-j ...)
        Receive   // exp(+j ...)
    };

    // Unit-norm sampled 2-D Fourier harmonic on the array elements:
    //   [a]_p = N^-1/2 exp(+-j 2 pi (ix x_p / Lx + iy y_p / Ly))
    // Planar arrays have z_p = 0 so the longitudinal phase term drops out.
    template <typename Scalar = double>
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> harmonic_vector(HarmonicIndex index,
                                                                          const ArrayGeometry &geometry, LinkEnd end)
    {
        if (!in_lattice_ellipse(index, geometry.aperture_x, geometry.aperture_y))
            throw Error(ErrorCode::IndexOutsideEllipse,
                        "harmonic (" + std::to_string(index.ix) + "," + std::to_string(index.iy) + ")");
        const auto n = Eigen::Index(geometry.size());
        const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
        const Scalar kx = two_pi * Scalar(index.ix) / Scalar(geometry.aperture_x);
        const Scalar ky = two_pi * Scalar(index.iy) / Scalar(geometry.aperture_y);
        const Scalar sign = end == LinkEnd::Transmit ? Scalar(-1) : Scalar(1);
        const Scalar amplitude = Scalar(1) / std::sqrt(Scalar(n));

        Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> a(n);
        for (Eigen::Index p = 0; p < n; ++p)
        {
            const Scalar phase = sign * (kx * Scalar(geometry.elements(0, p)) + ky * Scalar(geometry.elements(1, p)));
            a(p) = std::polar(amplitude, phase);
        }
        return a;
    }

    // Columns are harmonic_vector(indices[k], geometry, end).
    Eigen::MatrixXcd harmonic_matrix(std::span<const HarmonicIndex> indices, const ArrayGeometry &geometry,
                                     LinkEnd end);

    namespace detail
    {
        // Region of one harmonic before clipping to the unit disk, as a convex polygon
        // (counter-clockwise) in direction-cosine coordinates.
        std::vector<Eigen::Vector2d> harmonic_region_polygon(HarmonicIndex index,
                                                             std::span<const HarmonicIndex> lattice, double aperture_x,
                                                             double aperture_y);
    }
}

#endif
