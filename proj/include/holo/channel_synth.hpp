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

#ifndef HOLO_CHANNEL_SYNTH_HPP
#define HOLO_CHANNEL_SYNTH_HPP

#include "holo/angular_spectrum.hpp"
#include "holo/array_geometry.hpp"
#include "holo/coupling.hpp"
#include "holo/plane_wave_lattice.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace holo
{
    // Everything needed to draw channels for one link; immutable once built.
    //   H = sqrt(N_R N_S) G_R Psi_R H_a Psi_S^H G_S,   [H_a]_{l,m} ~ CN(0, sigma^2(l, m))
    struct SynthesisPlan
    {
        ArrayGeometry bs_geometry;
        ArrayGeometry ue_geometry;
        Eigen::MatrixXcd bs_basis; // Psi_S, [N_S, n_S], pattern-modified transmit harmonics
        Eigen::MatrixXcd ue_basis; // Psi_R, [N_R, n_R], pattern-modified receive harmonics
        VarianceTable variance_table;
        Eigen::VectorXd bs_amplitude; // diagonal of G_S
        Eigen::VectorXd ue_amplitude; // diagonal of G_R
        std::string geometry_digest;
        std::string spectrum_digest;

        // Cached factors: left = sqrt(N_R N_S) G_R Psi_R, right = Psi_S^H G_S, deviation = sqrt(sigma^2).
        Eigen::MatrixXcd left;
        Eigen::MatrixXcd right;
        Eigen::MatrixXd deviation;

        // left = W_R left_core and right = right_core W_S^H with W_R, W_S column-orthonormal
        // (thin QR). The compact channel left_core H_a right_core has the singular values of H.
        Eigen::MatrixXcd left_core;  // [min(N_R, n_R), n_R]
        Eigen::MatrixXcd right_core; // [n_S, min(N_S, n_S)]
    };

    struct ChannelRealization
    {
        Eigen::MatrixXcd matrix; // [N_R, N_S]
        std::uint64_t realization_index = 0;
        std::uint64_t seed = 0;
    };

    // Basis column k holds harmonic_vector(k) scaled per element by that element's pattern
    // gain at the harmonic's plane-wave direction.
    Eigen::MatrixXcd modified_harmonic_matrix(const SpectralLattice &lattice, const ArrayGeometry &geometry,
                                              const CouplingProfile &coupling, LinkEnd end);

    SynthesisPlan build_plan(const ArrayGeometry &bs_geometry, const ArrayGeometry &ue_geometry,
                             const AngularPowerSpectrum &bs_spectrum, const AngularPowerSpectrum &ue_spectrum,
                             const CouplingProfile &bs_coupling, const CouplingProfile &ue_coupling,
                             const QuadratureOptions &options = {});

    // Same, from lattices that were integrated elsewhere (lets sweeps reuse them across spacings).
    SynthesisPlan build_plan(const ArrayGeometry &bs_geometry, const ArrayGeometry &ue_geometry,
                             const SpectralLattice &bs_lattice, const SpectralLattice &ue_lattice,
                             const CouplingProfile &bs_coupling, const CouplingProfile &ue_coupling,
                             std::string spectrum_digest = {});

    // Draws the coefficient table H_a for (seed, realization_index); entry (l, m) uses
    // counter l * n_S + m of the channel-coefficient stream.
    Eigen::MatrixXcd sample_coefficients(const SynthesisPlan &plan, std::uint64_t seed,
                                         std::uint64_t realization_index);

    // Same draw with an externally supplied sqrt(sigma^2) table (per-user spectra on a shared plan).
    Eigen::MatrixXcd sample_coefficients(const Eigen::MatrixXd &deviation, std::uint64_t seed,
                                         std::uint64_t realization_index);

    ChannelRealization sample_channel(const SynthesisPlan &plan, std::uint64_t seed, std::uint64_t realization_index);

    // W_R^H H W_S for the same draw as sample_channel. Unitary-equivalent to H, so SU capacity
    // is unchanged; plans built from the same BS side share W_S, which also preserves the
    // dual-MAC sum rate across users.
    Eigen::MatrixXcd sample_compact_channel(const SynthesisPlan &plan, const Eigen::MatrixXd &deviation,
                                            std::uint64_t seed, std::uint64_t realization_index);

    // E ||H||_F^2 = N_R N_S sum_{l,m} sigma^2(l, m) ||G_R psi_R(l)||^2 ||G_S psi_S(m)||^2
    double expected_frobenius(const SynthesisPlan &plan);

    // CSV with header row,col,re,im, row-major.
    void save_channel_csv(const Eigen::MatrixXcd &h, const std::string &path);
}

#endif
