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
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmca {

enum class ErrorCode {
    // data / contract
    MissingFile,
    HeaderMismatch,
    UnknownVariable,
    UnknownLevel,
    EmptyTable,
    IncompleteMapping,
    InvalidConfig,
    LabelAbsent,
    DegenerateSplit,
    EmptyGroup,
    CellOutsideVocabulary,
    EmptyMatrix,
    DimensionMismatch,
    InvalidArgument,
    ComponentOutOfRange,
    // numerical
    NonFinite,
    EigensolverFailure,
    NonpositiveEigenvalue,
    NonconvergenceWithinBudget,
    ZeroDenominator,
    // io
    OutputFailure,
};

enum class ErrorKind { Data, Numerical, Io };

std::string_view to_string(ErrorCode code) noexcept;
ErrorKind kind_of(ErrorCode code) noexcept;

/// Every module reports failures through this exception; `code()` is the
/// stable machine-readable name surfaced by the CLI and HTTP layers.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorKind kind() const noexcept { return kind_of(code_); }

private:
    ErrorCode code_;
};

} // namespace cmca
