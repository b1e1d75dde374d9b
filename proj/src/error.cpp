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

#include "holo/error.hpp"

namespace holo
{
    std::string_view error_code_name(ErrorCode code) noexcept
    {
        switch (code)
        {
        case ErrorCode::NonIntegerGrid: return "NonIntegerGrid";
        case ErrorCode::NonPositiveInput: return "NonPositiveInput";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::SpreadOutOfRange: return "SpreadOutOfRange";
        case ErrorCode::EmptyTable: return "EmptyTable";
        case ErrorCode::IndexOutsideEllipse: return "IndexOutsideEllipse";
        case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
        case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
        case ErrorCode::MalformedPatternFile: return "MalformedPatternFile";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::NonPassive: return "NonPassive";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::EmptyGains: return "EmptyGains";
        case ErrorCode::ZeroChannel: return "ZeroChannel";
        case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
        case ErrorCode::UnknownPreset: return "UnknownPreset";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::MalformedInputFile: return "MalformedInputFile";
        case ErrorCode::IoError: return "IoError";
        }
        return "UnknownError";
    }

    ErrorCategory error_category(ErrorCode code) noexcept
    {
        switch (code)
        {
        case ErrorCode::MalformedPatternFile:
        case ErrorCode::EmptyFile:
        case ErrorCode::NonPassive:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::MalformedInputFile:
        case ErrorCode::IoError:
            return ErrorCategory::InputFile;
        case ErrorCode::QuadratureNotConverged:
        case ErrorCode::DegenerateSpectrum:
        case ErrorCode::ZeroChannel:
        case ErrorCode::EmptyGains:
            return ErrorCategory::Numerical;
        default:
            return ErrorCategory::Config;
        }
    }
}
