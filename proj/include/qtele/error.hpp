// Copyright 2026 The qtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qtele {

enum class ErrorCode {
    LengthMismatch,
    ZeroVector,
    NonFinite,
    Unnormalized,
    TooManyQubits,
    BadQubitIndex,
    DuplicateQubit,
    DimensionMismatch,
    DegenerateState,
    EmptyOrFullSubset,
    NotProduct,
    NondeterministicCheckBits,
    MalformedLine,
    UnknownKind,
    OversizeLine,
    ConnectionLost,
    BrokerError,
    CheckBitMismatch,
    BadPsiSpec,
};

/// Symbolic name of an error code, e.g. "BadQubitIndex".
constexpr std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::Unnormalized: return "Unnormalized";
        case ErrorCode::TooManyQubits: return "TooManyQubits";
        case ErrorCode::BadQubitIndex: return "BadQubitIndex";
        case ErrorCode::DuplicateQubit: return "DuplicateQubit";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DegenerateState: return "DegenerateState";
        case ErrorCode::EmptyOrFullSubset: return "EmptyOrFullSubset";
        case ErrorCode::NotProduct: return "NotProduct";
        case ErrorCode::NondeterministicCheckBits: return "NondeterministicCheckBits";
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::UnknownKind: return "UnknownKind";
        case ErrorCode::OversizeLine: return "OversizeLine";
        case ErrorCode::ConnectionLost: return "ConnectionLost";
        case ErrorCode::BrokerError: return "BrokerError";
        case ErrorCode::CheckBitMismatch: return "CheckBitMismatch";
        case ErrorCode::BadPsiSpec: return "BadPsiSpec";
    }
    return "Unknown";
}

/// The single exception type thrown by the library. The code is stable and
/// machine-checkable; the message is for humans.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

}  // namespace qtele
