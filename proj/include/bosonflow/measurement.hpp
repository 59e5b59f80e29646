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

#ifndef BOSONFLOW_MEASUREMENT_HPP_
#define BOSONFLOW_MEASUREMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "bosonflow/fock.hpp"
#include "bosonflow/types.hpp"

namespace bosonflow::measurement {

enum class Detector { PNR, Threshold };

enum class ComputationSpace { Fock, Unbunched };

enum class StrategyKind { Probabilities, PerModeExpectation, Amplitudes, Partial };

/// What to report about the output state: the full outcome distribution, the
/// per-mode occupation expectations, the raw complex amplitudes, or the
/// marginal distribution over a measured subset of modes.
class MeasurementStrategy {
 public:
  static MeasurementStrategy probabilities() {
    return MeasurementStrategy(StrategyKind::Probabilities, {});
  }
  static MeasurementStrategy per_mode_expectation() {
    return MeasurementStrategy(StrategyKind::PerModeExpectation, {});
  }
  static MeasurementStrategy amplitudes() {
    return MeasurementStrategy(StrategyKind::Amplitudes, {});
  }

  /// Measured modes must be strictly increasing, non-negative, nonempty, and
  /// a strict subset of the modes they are later applied to.
  static MeasurementStrategy partial(std::vector<int> measured_modes);

  StrategyKind kind() const { return kind_; }
  const std::vector<int>& measured_modes() const { return measured_modes_; }

 private:
  MeasurementStrategy(StrategyKind kind, std::vector<int> measured_modes)
      : kind_(kind), measured_modes_(std::move(measured_modes)) {}

  StrategyKind kind_;
  std::vector<int> measured_modes_;
};

/// Distribution over discrete outcome keys (occupation vectors, click
/// patterns, or partial patterns), in descending lexicographic key order.
struct KeyedDistribution {
  std::vector<std::vector<int>> keys;
  RVector values;
};

/// p_t = |a_t|^2 per basis state.
RVector probabilities(const AmplitudeVector& a);

/// PNR keeps the Fock-state keys as they are; Threshold coarse-grains them
/// into click patterns b with q_b summing every p_t whose support pattern is
/// b. Keys cover every pattern reachable with the basis photon count, so the
/// output length is fixed even when some entries are zero.
KeyedDistribution apply_detector(const FockBasis& basis, const RVector& p, Detector d);

/// E_i = sum_t p_t t_i.
RVector per_mode_expectation(const FockBasis& basis, const RVector& p);

/// Marginal over the measured modes: keys are the restricted occupation
/// patterns, each value the sum of p over all full states agreeing there.
KeyedDistribution marginal(const FockBasis& basis, const RVector& p,
                           const std::vector<int>& measured_modes);

struct UnbunchedProjection {
  /// Ranks (ascending, within the full basis) of the states with every
  /// occupation <= 1, i.e. the canonical order of the unbunched subbasis.
  std::vector<std::uint64_t> kept_ranks;

  /// Amplitudes over the kept states, renormalized to unit norm.
  CVector values;

  double success_probability = 0.0;
};

/// Projects onto the at-most-one-photon-per-mode subspace and renormalizes.
/// Throws NullProjection when essentially no mass survives (< 1e-300).
UnbunchedProjection project_unbunched(const AmplitudeVector& a);

/// The outcome key a state contributes to under a distribution-valued
/// strategy (Probabilities or Partial) and a detector.
std::vector<int> outcome_key(const FockState& t, const MeasurementStrategy& s,
                             Detector d);

/// Precomputed key table for regrouping a fixed state list: `keys` holds all
/// reachable outcome keys in descending lexicographic order and
/// `state_to_key[i]` the key index of the i-th state. Built once, reused per
/// evaluation.
struct Regrouping {
  std::vector<std::vector<int>> keys;
  std::vector<std::size_t> state_to_key;
};

Regrouping build_regrouping(const std::vector<FockState>& states,
                            const MeasurementStrategy& s, Detector d);

/// JSON object text mapping key strings to values with 17 significant
/// digits, in stored key order.
std::string to_json(const KeyedDistribution& d);

}  // namespace bosonflow::measurement

#endif  // BOSONFLOW_MEASUREMENT_HPP_
