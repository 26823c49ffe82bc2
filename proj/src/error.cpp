/*
 * Copyright 2026 The cmca Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "cmca/error.hpp"

namespace cmca {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::HeaderMismatch: return "HeaderMismatch";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::UnknownLevel: return "UnknownLevel";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::IncompleteMapping: return "IncompleteMapping";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LabelAbsent: return "LabelAbsent";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::CellOutsideVocabulary: return "CellOutsideVocabulary";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ComponentOutOfRange: return "ComponentOutOfRange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::NonpositiveEigenvalue: return "NonpositiveEigenvalue";
    case ErrorCode::NonconvergenceWithinBudget: return "NonconvergenceWithinBudget";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::OutputFailure: return "OutputFailure";
    }
    return "Unknown";
}

ErrorKind kind_of(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::NonFinite:
    case ErrorCode::EigensolverFailure:
    case ErrorCode::NonpositiveEigenvalue:
    case ErrorCode::NonconvergenceWithinBudget:
    case ErrorCode::ZeroDenominator:
        return ErrorKind::Numerical;
    case ErrorCode::OutputFailure:
        return ErrorKind::Io;
    default:
        return ErrorKind::Data;
    }
}

} // namespace cmca
