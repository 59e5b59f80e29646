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

#include <utility>

#include "bosonflow/fock.hpp"
#include "bosonflow/types.hpp"

namespace bosonflow::encoding {

/// Normalizes x and places it on the first x.size() basis states in canonical
/// order, zero elsewhere. Throws TooLong when x exceeds the basis size and
/// ZeroNorm when x has no magnitude to normalize.
AmplitudeVector amplitude_encode(const CVector& x, const FockBasis& basis);
AmplitudeVector amplitude_encode(const RVector& x, const FockBasis& basis);

/// Dual-rail embedding of a k-qubit state (length 2^k, unit norm to 1e-9)
/// into FockBasis(2k, k). Qubit 0 is the most significant bit of the
/// computational index; qubit i in |b> puts its photon in mode 2i+b.
AmplitudeVector qubit_to_fock(const CVector& q);

struct QubitReadout {
  CVector qubit;

  /// Squared norm of the input outside the dual-rail subspace.
  double leakage = 0.0;
};

/// Inverts qubit_to_fock on the dual-rail subspace of FockBasis(2k, k),
/// renormalizing the projected vector. Throws NullProjection when leakage
/// >= 1 - 1e-12 and DimensionMismatch when the basis is not dual-rail shaped.
QubitReadout fock_to_qubit(const AmplitudeVector& a);

}  // namespace bosonflow::encoding
