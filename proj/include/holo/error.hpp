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

#ifndef HOLO_ERROR_HPP
#define HOLO_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace holo
{
    enum class ErrorCode
    {
        // geometry
        NonIntegerGrid,
        NonPositiveInput,
        IndexOutOfRange,
        // angular spectrum
        SpreadOutOfRange,
        EmptyTable,
        // lattice
        IndexOutsideEllipse,
        QuadratureNotConverged,
        DegenerateSpectrum,
        // coupling
        MalformedPatternFile,
        EmptyFile,
        NonPassive,
        DimensionMismatch,
        // capacity
        EmptyGains,
        ZeroChannel,
        NonPositiveDistance,
        // experiments
        UnknownPreset,
        InvalidConfig,
        MalformedInputFile,
        IoError
    };

    // Coarse grouping used by the CLI to pick an exit code.
    enum class ErrorCategory
    {
        Config,
        InputFile,
        Numerical
    };

    std::string_view error_code_name(ErrorCode code) noexcept;
    ErrorCategory error_category(ErrorCode code) noexcept;

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &message)
            : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

        ErrorCode code() const noexcept { return code_; }
        ErrorCategory category() const noexcept { return error_category(code_); }

    private:
        ErrorCode code_;
    };
}

#endif
