// Copyright 2026 The Bosonflow Authors
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

namespace bosonflow {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define BOSONFLOW_DEFINE_ERROR(NAME)                          \
  class NAME : public Error {                                 \
   public:                                                    \
    explicit NAME(const std::string& msg) : Error(msg) {}     \
  }

BOSONFLOW_DEFINE_ERROR(OverflowError);
BOSONFLOW_DEFINE_ERROR(DimensionMismatch);
BOSONFLOW_DEFINE_ERROR(IndexOutOfRange);
BOSONFLOW_DEFINE_ERROR(ArityMismatch);
BOSONFLOW_DEFINE_ERROR(UnknownParameter);
BOSONFLOW_DEFINE_ERROR(ModeOutOfRange);
BOSONFLOW_DEFINE_ERROR(DuplicateMode);
BOSONFLOW_DEFINE_ERROR(DuplicateName);
BOSONFLOW_DEFINE_ERROR(NonUnitaryInput);
BOSONFLOW_DEFINE_ERROR(NonSquare);
BOSONFLOW_DEFINE_ERROR(TooLarge);
BOSONFLOW_DEFINE_ERROR(TooLong);
BOSONFLOW_DEFINE_ERROR(PhotonCountMismatch);
BOSONFLOW_DEFINE_ERROR(NullProjection);
BOSONFLOW_DEFINE_ERROR(InvalidModes);
BOSONFLOW_DEFINE_ERROR(ZeroNorm);
BOSONFLOW_DEFINE_ERROR(NotNormalized);
BOSONFLOW_DEFINE_ERROR(InvalidSpec);
BOSONFLOW_DEFINE_ERROR(MissingIntermediates);
BOSONFLOW_DEFINE_ERROR(StaleIntermediates);
BOSONFLOW_DEFINE_ERROR(LengthMismatch);
BOSONFLOW_DEFINE_ERROR(BadGrouping);
BOSONFLOW_DEFINE_ERROR(ParseError);

#undef BOSONFLOW_DEFINE_ERROR

/// Wraps an error raised while processing one row of a batched call.
class BatchRowError : public Error {
 public:
  BatchRowError(std::size_t row, const std::string& msg)
      : Error("row " + std::to_string(row) + ": " + msg), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

}  // namespace bosonflow
