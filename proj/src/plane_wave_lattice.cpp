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

#include "holo/plane_wave_lattice.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace holo
{
    bool in_lattice_ellipse(HarmonicIndex index, double aperture_x, double aperture_y)
    {
        const double u = double(index.ix) / aperture_x;
        const double v = double(index.iy) / aperture_y;
        return u * u + v * v <= 1.0;
    }

    std::vector<HarmonicIndex> enumerate_lattice(double aperture_x, double aperture_y)
    {
        if (!(aperture_x > 0.0) || !(aperture_y > 0.0))
            throw Error(ErrorCode::NonPositiveInput, "apertures must be strictly positive");
        const int nx = int(std::floor(aperture_x));
        const int ny = int(std::floor(aperture_y));
        std::vector<HarmonicIndex> out;
        for (int ix = -nx; ix <= nx; ++ix)
            for (int iy = -ny; iy <= ny; ++iy)
                if (in_lattice_ellipse({ix, iy}, aperture_x, aperture_y))
                    out.push_back({ix, iy});
        return out;
    }

    HarmonicAngles harmonic_angles(HarmonicIndex index, double aperture_x, double aperture_y)
    {
        if (!in_lattice_ellipse(index, aperture_x, aperture_y))
            throw Error(ErrorCode::IndexOutsideEllipse,
                        "harmonic (" + std::to_string(index.ix) + "," + std::to_string(index.iy) + ")");
        const Eigen::Vector2d uv = direction_cosines(index, aperture_x, aperture_y);
        HarmonicAngles a;
        a.elevation = std::acos(std::sqrt(std::max(0.0, 1.0 - uv.squaredNorm())));
        a.azimuth = (index.ix == 0 && index.iy == 0) ? 0.0 : std::atan2(uv.y(), uv.x());
        return a;
    }

    namespace detail
    {
        namespace
        {
            using Polygon = std::vector<Eigen::Vector2d>;

            // Keeps the part of `poly` with n.x <= c.
            Polygon clip_half_plane(const Polygon &poly, const Eigen::Vector2d &n, double c)
            {
                Polygon out;
                const std::size_t m = poly.size();
                for (std::size_t i = 0; i < m; ++i)
                {
                    const auto &a = poly[i];
                    const auto &b = poly[(i + 1) % m];
                    const double da = n.dot(a) - c;
                    const double db = n.dot(b) - c;
                    if (da <= 0.0)
                        out.push_back(a);
                    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0))
                        out.push_back(a + (b - a) * (da / (da - db)));
                }
                return out;
            }
        }

        std::vector<Eigen::Vector2d> harmonic_region_polygon(HarmonicIndex index,
                                                             std::span<const HarmonicIndex> lattice, double aperture_x,
                                                             double aperture_y)
        {
            // Work in index units (u * Lx, v * Ly) where the lattice is the integer grid.
            const double bx = aperture_x + 2.0;
            const double by = aperture_y + 2.0;
            Polygon poly{{-bx, -by}, {bx, -by}, {bx, by}, {-bx, by}};
            const Eigen::Vector2d k(index.ix, index.iy);
            for (const auto &j : lattice)
            {
                if (j == index)
                    continue;
                const Eigen::Vector2d jj(j.ix, j.iy);
                const Eigen::Vector2d d = jj - k;
                // Neighbours further than 4 index units cannot shape a region that meets the disk.
                if (d.squaredNorm() > 16.0)
                    continue;
                poly = clip_half_plane(poly, d, 0.5 * d.dot(jj + k));
                if (poly.empty())
                    break;
            }
            for (auto &p : poly)
            {
                p.x() /= aperture_x;
                p.y() /= aperture_y;
            }
            return poly;
        }
    }

    namespace
    {
        using Polygon = std::vector<Eigen::Vector2d>;

        std::string fmt_g(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3g", v);
            return buf;
        }

        // v-extent of a convex polygon on the vertical line at u; false if the line misses it.
        bool vertical_extent(const Polygon &poly, double u, double &lo, double &hi)
        {
            lo = std::numeric_limits<double>::infinity();
            hi = -lo;
            const std::size_t m = poly.size();
            for (std::size_t i = 0; i < m; ++i)
            {
                const auto &a = poly[i];
                const auto &b = poly[(i + 1) % m];
                const double umin = std::min(a.x(), b.x());
                const double umax = std::max(a.x(), b.x());
                if (u < umin || u > umax)
                    continue;
                if (a.x() == b.x())
                {
                    lo = std::min({lo, a.y(), b.y()});
                    hi = std::max({hi, a.y(), b.y()});
                }
                else
                {
                    const double v = a.y() + (b.y() - a.y()) * (u - a.x()) / (b.x() - a.x());
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
            return lo <= hi;
        }

        // u-coordinates where the integrand of the outer integral has kinks.
        std::vector<double> breakpoints(const Polygon &poly, double ua, double ub)
        {
            std::vector<double> pts{ua, ub};
            const std::size_t m = poly.size();
            for (std::size_t i = 0; i < m; ++i)
            {
                const auto &a = poly[i];
                const auto &b = poly[(i + 1) % m];
                pts.push_back(a.x());
                // |a + s (b - a)| = 1
                const Eigen::Vector2d d = b - a;
                const double qa = d.squaredNorm();
                const double qb = 2.0 * a.dot(d);
                const double qc = a.squaredNorm() - 1.0;
                const double disc = qb * qb - 4.0 * qa * qc;
                if (qa > 0.0 && disc >= 0.0)
                {
                    const double r = std::sqrt(disc);
                    for (double s : {(-qb - r) / (2.0 * qa), (-qb + r) / (2.0 * qa)})
                        if (s >= 0.0 && s <= 1.0)
                            pts.push_back(a.x() + s * d.x());
                }
            }
            std::sort(pts.begin(), pts.end());
            std::vector<double> out;
            for (double p : pts)
            {
                if (p < ua || p > ub)
                    continue;
                if (out.empty() || p - out.back() > 1e-14)
                    out.push_back(p);
            }
            if (out.back() < ub)
                out.push_back(ub);
            return out;
        }

        using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

        struct CellIntegral
        {
            double value = 0.0;
            double error = 0.0;
        };

        // Integral of A^2 / sqrt(1 - u^2 - v^2) over polygon ∩ unit disk. With v = c sin t,
        // c = sqrt(1 - u^2), the inner integral becomes a plain integral of A^2 over t.
        CellIntegral integrate_region(const Polygon &poly, const AngularPowerSpectrum &spectrum,
                                      const QuadratureOptions &opt)
        {
            double umin = std::numeric_limits<double>::infinity(), umax = -umin;
            for (const auto &p : poly)
            {
                umin = std::min(umin, p.x());
                umax = std::max(umax, p.x());
            }
            umin = std::max(umin, -1.0);
            umax = std::min(umax, 1.0);
            if (!(umin < umax))
                return {};

            const bool isotropic = spectrum.kind() == AngularPowerSpectrum::Kind::Isotropic;
            double inner_error = 0.0;

            auto outer = [&](double u) -> double
            {
                const double c2 = 1.0 - u * u;
                if (!(c2 > 0.0))
                    return 0.0;
                const double c = std::sqrt(c2);
                double lo, hi;
                if (!vertical_extent(poly, u, lo, hi))
                    return 0.0;
                lo = std::max(lo, -c);
                hi = std::min(hi, c);
                if (!(lo < hi))
                    return 0.0;
                const double t0 = std::asin(std::clamp(lo / c, -1.0, 1.0));
                const double t1 = std::asin(std::clamp(hi / c, -1.0, 1.0));
                if (isotropic)
                    return t1 - t0;
                auto inner = [&](double t) -> double
                {
                    const Eigen::Vector3d dir(u, c * std::sin(t), c * std::cos(t));
                    return spectrum.value_at(dir);
                };
                double err = 0.0, l1 = 0.0;
                const double r = Kronrod::integrate(inner, t0, t1, opt.max_depth, opt.relative_tolerance, &err, &l1);
                inner_error = std::max(inner_error, err / std::max(l1, std::numeric_limits<double>::min()));
                return r;
            };

            const auto bp = breakpoints(poly, umin, umax);
            CellIntegral out;
            double l1_total = 0.0;
            for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            {
                double err = 0.0, l1 = 0.0;
                out.value += Kronrod::integrate(outer, bp[i], bp[i + 1], opt.max_depth, opt.relative_tolerance, &err, &l1);
                out.error += err;
                l1_total += l1;
            }
            out.error += inner_error * l1_total;
            return out;
        }
    }

    double marginal_integral(HarmonicIndex index, const AngularPowerSpectrum &spectrum, double aperture_x,
                             double aperture_y, const QuadratureOptions &options)
    {
        if (!in_lattice_ellipse(index, aperture_x, aperture_y))
            throw Error(ErrorCode::IndexOutsideEllipse,
                        "harmonic (" + std::to_string(index.ix) + "," + std::to_string(index.iy) + ")");
        const auto lattice = enumerate_lattice(aperture_x, aperture_y);
        const auto poly = detail::harmonic_region_polygon(index, lattice, aperture_x, aperture_y);
        const auto r = integrate_region(poly, spectrum, options);
        if (!std::isfinite(r.value) || r.error > options.acceptance * std::max(std::abs(r.value), options.absolute_floor))
            throw Error(ErrorCode::QuadratureNotConverged,
                        "harmonic (" + std::to_string(index.ix) + "," + std::to_string(index.iy) +
                            "): error estimate " + fmt_g(r.error) + " for value " + fmt_g(r.value));
        return std::max(r.value, 0.0);
    }

    SpectralLattice build_spectral_lattice(double aperture_x, double aperture_y, const AngularPowerSpectrum &spectrum,
                                           const QuadratureOptions &options)
    {
        SpectralLattice s;
        s.aperture_x = aperture_x;
        s.aperture_y = aperture_y;
        s.indices = enumerate_lattice(aperture_x, aperture_y);
        s.marginal_integrals.resize(Eigen::Index(s.indices.size()));
        for (std::size_t k = 0; k < s.indices.size(); ++k)
            s.marginal_integrals(Eigen::Index(k)) =
                marginal_integral(s.indices[k], spectrum, aperture_x, aperture_y, options);
        return s;
    }

    VarianceTable build_variance_table(SpectralLattice bs_lattice, SpectralLattice ue_lattice)
    {
        const double bs_sum = bs_lattice.marginal_integrals.sum();
        const double ue_sum = ue_lattice.marginal_integrals.sum();
        if (!(bs_sum > 0.0) || !(ue_sum > 0.0) || !std::isfinite(bs_sum * ue_sum))
            throw Error(ErrorCode::DegenerateSpectrum, "spectral integrals vanish at one link end");
        if (bs_lattice.marginal_integrals.minCoeff() < 0.0 || ue_lattice.marginal_integrals.minCoeff() < 0.0)
            throw Error(ErrorCode::DegenerateSpectrum, "negative spectral integral");
        VarianceTable t;
        t.scale = 1.0 / (bs_sum * ue_sum);
        t.bs_lattice = std::move(bs_lattice);
        t.ue_lattice = std::move(ue_lattice);
        return t;
    }

    Eigen::MatrixXcd harmonic_matrix(std::span<const HarmonicIndex> indices, const ArrayGeometry &geometry,
                                     LinkEnd end)
    {
        Eigen::MatrixXcd m(Eigen::Index(geometry.size()), Eigen::Index(indices.size()));
        for (std::size_t k = 0; k < indices.size(); ++k)
            m.col(Eigen::Index(k)) = harmonic_vector(indices[k], geometry, end);
        return m;
    }
}
