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

#include "holo/channel_synth.hpp"
#include "holo/error.hpp"
#include "holo/philox.hpp"
#include "csv.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace holo
{
    namespace
    {
        std::string describe_geometry(const ArrayGeometry &g)
        {
            std::ostringstream os;
            os << std::setprecision(17) << g.aperture_x << "x" << g.aperture_y << "@" << g.spacing_x << "x"
               << g.spacing_y;
            return os.str();
        }
    }

    Eigen::MatrixXcd modified_harmonic_matrix(const SpectralLattice &lattice, const ArrayGeometry &geometry,
                                              const CouplingProfile &coupling, LinkEnd end)
    {
        const auto n = Eigen::Index(geometry.size());
        if (coupling.patterns.size() != 1 && Eigen::Index(coupling.patterns.size()) != n)
            throw Error(ErrorCode::DimensionMismatch, "pattern count does not match element count");
        Eigen::MatrixXcd basis = harmonic_matrix(lattice.indices, geometry, end);
        for (std::size_t k = 0; k < lattice.indices.size(); ++k)
        {
            const auto angles = harmonic_angles(lattice.indices[k], geometry.aperture_x, geometry.aperture_y);
            if (coupling.patterns.size() == 1)
            {
                basis.col(Eigen::Index(k)) *= coupling.patterns.front().gain(angles.elevation, angles.azimuth);
                continue;
            }
            for (Eigen::Index p = 0; p < n; ++p)
                basis(p, Eigen::Index(k)) *= coupling.patterns[std::size_t(p)].gain(angles.elevation, angles.azimuth);
        }
        return basis;
    }

    SynthesisPlan build_plan(const ArrayGeometry &bs_geometry, const ArrayGeometry &ue_geometry,
                             const AngularPowerSpectrum &bs_spectrum, const AngularPowerSpectrum &ue_spectrum,
                             const CouplingProfile &bs_coupling, const CouplingProfile &ue_coupling,
                             const QuadratureOptions &options)
    {
        auto bs_lattice = build_spectral_lattice(bs_geometry.aperture_x, bs_geometry.aperture_y, bs_spectrum, options);
        auto ue_lattice = build_spectral_lattice(ue_geometry.aperture_x, ue_geometry.aperture_y, ue_spectrum, options);
        return build_plan(bs_geometry, ue_geometry, bs_lattice, ue_lattice, bs_coupling, ue_coupling,
                          "bs:" + bs_spectrum.describe() + "|ue:" + ue_spectrum.describe());
    }

    SynthesisPlan build_plan(const ArrayGeometry &bs_geometry, const ArrayGeometry &ue_geometry,
                             const SpectralLattice &bs_lattice, const SpectralLattice &ue_lattice,
                             const CouplingProfile &bs_coupling, const CouplingProfile &ue_coupling,
                             std::string spectrum_digest)
    {
        if (bs_lattice.aperture_x != bs_geometry.aperture_x || bs_lattice.aperture_y != bs_geometry.aperture_y ||
            ue_lattice.aperture_x != ue_geometry.aperture_x || ue_lattice.aperture_y != ue_geometry.aperture_y)
            throw Error(ErrorCode::DimensionMismatch, "lattice aperture differs from array aperture");
        if (bs_coupling.efficiencies.size() != Eigen::Index(bs_geometry.size()) ||
            ue_coupling.efficiencies.size() != Eigen::Index(ue_geometry.size()))
            throw Error(ErrorCode::DimensionMismatch, "coupling profile does not match element count");

        SynthesisPlan plan;
        plan.bs_geometry = bs_geometry;
        plan.ue_geometry = ue_geometry;
        plan.bs_basis = modified_harmonic_matrix(bs_lattice, bs_geometry, bs_coupling, LinkEnd::Transmit);
        plan.ue_basis = modified_harmonic_matrix(ue_lattice, ue_geometry, ue_coupling, LinkEnd::Receive);
        plan.variance_table = build_variance_table(bs_lattice, ue_lattice);
        plan.bs_amplitude = efficiency_amplitude_matrix(bs_coupling).diagonal();
        plan.ue_amplitude = efficiency_amplitude_matrix(ue_coupling).diagonal();
        plan.geometry_digest = "bs:" + describe_geometry(bs_geometry) + "|ue:" + describe_geometry(ue_geometry);
        plan.spectrum_digest = std::move(spectrum_digest);

        const double prefactor = std::sqrt(double(bs_geometry.size()) * double(ue_geometry.size()));
        plan.left = prefactor * (plan.ue_amplitude.asDiagonal() * plan.ue_basis);
        plan.right = plan.bs_basis.adjoint() * plan.bs_amplitude.asDiagonal();
        plan.deviation = plan.variance_table.variances().cwiseSqrt();

        Eigen::HouseholderQR<Eigen::MatrixXcd> qr_left(plan.left);
        const Eigen::Index k_r = std::min(plan.left.rows(), plan.left.cols());
        const Eigen::MatrixXcd w_r = qr_left.householderQ() * Eigen::MatrixXcd::Identity(plan.left.rows(), k_r);
        plan.left_core = w_r.adjoint() * plan.left;

        Eigen::HouseholderQR<Eigen::MatrixXcd> qr_right(plan.right.adjoint());
        const Eigen::Index k_s = std::min(plan.right.rows(), plan.right.cols());
        const Eigen::MatrixXcd w_s = qr_right.householderQ() * Eigen::MatrixXcd::Identity(plan.right.cols(), k_s);
        plan.right_core = plan.right * w_s;
        return plan;
    }

    Eigen::MatrixXcd sample_coefficients(const SynthesisPlan &plan, std::uint64_t seed,
                                         std::uint64_t realization_index)
    {
        return sample_coefficients(plan.deviation, seed, realization_index);
    }

    Eigen::MatrixXcd sample_coefficients(const Eigen::MatrixXd &sd, std::uint64_t seed,
                                         std::uint64_t realization_index)
    {
        Eigen::MatrixXcd ha(sd.rows(), sd.cols());
        const auto n_s = std::uint64_t(sd.cols());
        for (Eigen::Index l = 0; l < sd.rows(); ++l)
            for (Eigen::Index m = 0; m < sd.cols(); ++m)
                ha(l, m) = sd(l, m) * philox_complex_normal(StreamDomain::ChannelCoefficients, seed, realization_index,
                                                            std::uint64_t(l) * n_s + std::uint64_t(m));
        return ha;
    }

    ChannelRealization sample_channel(const SynthesisPlan &plan, std::uint64_t seed, std::uint64_t realization_index)
    {
        ChannelRealization r;
        r.seed = seed;
        r.realization_index = realization_index;
        r.matrix.noalias() = plan.left * (sample_coefficients(plan, seed, realization_index) * plan.right);
        return r;
    }

    Eigen::MatrixXcd sample_compact_channel(const SynthesisPlan &plan, const Eigen::MatrixXd &deviation,
                                            std::uint64_t seed, std::uint64_t realization_index)
    {
        if (deviation.rows() != plan.deviation.rows() || deviation.cols() != plan.deviation.cols())
            throw Error(ErrorCode::DimensionMismatch, "variance table does not match the plan lattices");
        return plan.left_core * (sample_coefficients(deviation, seed, realization_index) * plan.right_core);
    }

    double expected_frobenius(const SynthesisPlan &plan)
    {
        const Eigen::VectorXd ue_norms = (plan.ue_amplitude.asDiagonal() * plan.ue_basis).colwise().squaredNorm();
        const Eigen::VectorXd bs_norms = (plan.bs_amplitude.asDiagonal() * plan.bs_basis).colwise().squaredNorm();
        const double n = double(plan.bs_geometry.size()) * double(plan.ue_geometry.size());
        return n * ue_norms.dot(plan.variance_table.variances() * bs_norms);
    }

    void save_channel_csv(const Eigen::MatrixXcd &h, const std::string &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
        out << "row,col,re,im\n";
        for (Eigen::Index i = 0; i < h.rows(); ++i)
            for (Eigen::Index j = 0; j < h.cols(); ++j)
                out << i << ',' << j << ',' << detail::format_shortest(h(i, j).real()) << ','
                    << detail::format_shortest(h(i, j).imag()) << '\n';
        if (!out)
            throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    }
}
