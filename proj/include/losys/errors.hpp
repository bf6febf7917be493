// Copyright 2026 The losys Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace losys {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define LOSYS_DEFINE_ERROR(NAME)                                \
  struct NAME : Error {                                         \
    explicit NAME(const std::string& what = #NAME)              \
        : Error(std::string(#NAME) + ": " + what) {}            \
  }

LOSYS_DEFINE_ERROR(DimensionMismatch);
LOSYS_DEFINE_ERROR(NonHermitianInput);
LOSYS_DEFINE_ERROR(NotAProjection);
LOSYS_DEFINE_ERROR(StageOutOfRange);
LOSYS_DEFINE_ERROR(NonHermitianElement);
LOSYS_DEFINE_ERROR(InvalidGraph);
LOSYS_DEFINE_ERROR(EmptyGrid);
LOSYS_DEFINE_ERROR(InvalidSystem);
LOSYS_DEFINE_ERROR(OracleUnresolved);
LOSYS_DEFINE_ERROR(NoBracket);
LOSYS_DEFINE_ERROR(NotAnOrderUnit);
LOSYS_DEFINE_ERROR(MixedRepresentations);
LOSYS_DEFINE_ERROR(SourceNotFull);
LOSYS_DEFINE_ERROR(DegenerateSeminorm);
LOSYS_DEFINE_ERROR(NotPositiveOnSubsystem);
LOSYS_DEFINE_ERROR(NotCPOnSubsystem);
LOSYS_DEFINE_ERROR(NotContractive);
LOSYS_DEFINE_ERROR(EmptyLimit);
LOSYS_DEFINE_ERROR(CocycleViolation);
LOSYS_DEFINE_ERROR(IncompatibleConnectingMaps);
LOSYS_DEFINE_ERROR(UnrepresentableAtFiniteDimension);
LOSYS_DEFINE_ERROR(ParseError);

#undef LOSYS_DEFINE_ERROR

}  // namespace losys
