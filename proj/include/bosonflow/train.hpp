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
#include <string>
#include <utility>
#include <vector>

#include "bosonflow/types.hpp"

namespace bosonflow::train {

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment accumulators plus the step counter. Serializable so
/// training runs can resume bit-exactly.
struct AdamState {
  RVector m;
  RVector v;
  std::int64_t step = 0;

  static AdamState init(Eigen::Index size);
};

/// Standard bias-corrected Adam update, in place. Deterministic; throws
/// LengthMismatch unless params, grads, and the state agree on length.
void adam_step(RVector& params, const RVector& grads, AdamState& state,
               const AdamConfig& config = {});

/// Mean squared error and its gradient 2 (pred - target) / len.
std::pair<double, RVector> mse_loss(const RVector& pred, const RVector& target);

/// Output-coordinate indices per class; together the classes must cover
/// every coordinate exactly once.
struct ClassGrouping {
  std::vector<std::vector<int>> class_indices;
};

/// Two-class split of keyed distribution outputs by the parity of each
/// key's leading occupied mode (first index with a positive entry): even
/// leading mode -> class 0, odd -> class 1. Keys with no occupied mode fall
/// in class 0.
ClassGrouping leading_mode_parity_grouping(const std::vector<std::vector<int>>& keys);

/// Negative log of the labeled class's probability mass, clamped to 1e-12.
/// The gradient is -1/mass on the labeled class's coordinates, 0 elsewhere.
std::pair<double, RVector> cross_entropy_from_probs(const RVector& probs,
                                                    const ClassGrouping& grouping,
                                                    int label);

std::string to_json(const AdamState& state);
AdamState adam_state_from_json(const std::string& text);

}  // namespace bosonflow::train
