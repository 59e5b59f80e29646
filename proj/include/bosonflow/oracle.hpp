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

#include <cstdint>

#include "bosonflow/types.hpp"

namespace bosonflow::oracle {

// Brute-force reference for the photon-by-photon evolution engine. Kept
// deliberately simple and independent: it enumerates states and accumulates
// amplitudes with its own helpers, sharing only the public data types.

/// Permanent of a square complex matrix via Ryser's formula with Gray-code
/// subset iteration, O(2^k * k). k is limited to 20.
Complex permanent(const CMatrix& a);

/// Transition amplitude <t| U |s> = Per(U_{t,s}) / sqrt(prod s_i! prod t_j!),
/// where U_{t,s} repeats column p s_p times and row q t_q times.
Complex oracle_amplitude(const CMatrix& u, const FockState& s, const FockState& t);

/// Full output state for input |s>, one permanent per basis element.
/// Basis size is limited to 1e5.
AmplitudeVector oracle_state(const CMatrix& u, const FockState& s);

/// Haar-distributed random unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phases normalized. Deterministic per seed.
CMatrix haar_unitary(int modes, std::uint64_t seed);

}  // namespace bosonflow::oracle
