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
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bosonflow/circuit.hpp"
#include "bosonflow/fock.hpp"
#include "bosonflow/measurement.hpp"
#include "bosonflow/slos.hpp"
#include "bosonflow/types.hpp"

namespace bosonflow::layer {

/// Marks the layer input as amplitude-encoded: each feature row is
/// normalized and placed on the first basis states of the n-photon sector
/// instead of driving phase shifters. Requires a circuit without input
/// features.
struct AmplitudeInput {
  int photons = 1;
};

using LayerInput = std::variant<FockState, AmplitudeInput>;

struct LayerSpec {
  circuit::ParamCircuit circuit;
  LayerInput input;
  measurement::MeasurementStrategy strategy =
      measurement::MeasurementStrategy::probabilities();
  measurement::Detector detector = measurement::Detector::PNR;
  measurement::ComputationSpace space = measurement::ComputationSpace::Fock;
};

/// Length of the output rows the spec produces, computable without running
/// anything: distribution strategies count their reachable outcome keys,
/// per-mode expectation emits one entry per mode, and amplitudes emit
/// interleaved (Re, Im) pairs per computation-space state.
int output_dim(const LayerSpec& spec);

/// One name per output coordinate, aligned with forward's columns.
std::vector<std::string> output_labels(const LayerSpec& spec);

/// Differentiable features-to-outputs map: compiles the circuit per row,
/// evolves the input state over a transition graph cached at construction,
/// projects onto the computation space, and applies the measurement
/// strategy. forward/backward treat rows independently; theta gradients are
/// reduced over rows in ascending order.
class PhotonicLayer {
 public:
  explicit PhotonicLayer(LayerSpec spec);

  const LayerSpec& spec() const { return spec_; }
  int modes() const { return graph_.modes(); }
  int photons() const { return graph_.photons(); }
  int output_dim() const { return output_dim_; }
  const std::vector<std::string>& output_labels() const { return labels_; }
  const slos::TransitionGraph& graph() const { return graph_; }

  RVector& theta() { return theta_; }
  const RVector& theta() const { return theta_; }

  /// X holds one feature row per sample: phase-encoded layers expect exactly
  /// circuit.input_feature_count columns, amplitude-encoded layers between 1
  /// and the sector basis size. With `training` set, intermediates are
  /// retained so backward can run for this exact (theta, X). Rows may be
  /// processed on up to `threads` threads; results do not depend on the
  /// thread count.
  RMatrix forward(const RMatrix& X, bool training = false, int threads = 1);

  /// Chains upstream dL/doutput rows back to (dL/dtheta, dL/dX). Requires a
  /// training-mode forward for this exact (theta, X); throws
  /// StaleIntermediates otherwise. For amplitude-encoded inputs dL/dX flows
  /// through the row normalization; the renormalization denominator of the
  /// unbunched projection is treated as part of the loss path.
  std::pair<RVector, RMatrix> backward(const RMatrix& X, const RMatrix& upstream,
                                       int threads = 1);

 private:
  struct RowCache {
    std::vector<CVector> intermediates;  // phase path: slos levels 0..n
    CVector projected;                   // computation-space amplitudes b
    double space_norm = 1.0;             // pre-renormalization norm (Unbunched)
    RVector encoded;                     // amplitude path: normalized features
    double feature_norm = 1.0;           // amplitude path: input row norm
  };

  CVector project_space(const CVector& a, double& space_norm) const;
  RVector apply_strategy(const CVector& b) const;
  CVector strategy_adjoint(const CVector& b, const RVector& upstream_row) const;
  CVector space_adjoint(const RowCache& rc, const CVector& g_b) const;

  void forward_phase(const RMatrix& X, bool training, int threads, RMatrix& out);
  void forward_amplitude(const RMatrix& X, bool training, int threads, RMatrix& out);

  LayerSpec spec_;
  slos::TransitionGraph graph_;
  RVector theta_;

  std::vector<FockState> space_states_;
  std::vector<std::uint64_t> kept_ranks_;     // Unbunched: ranks into the full basis
  measurement::Regrouping regrouping_;        // Probabilities / Partial
  RMatrix mode_weights_;                      // PerModeExpectation: space x modes
  std::vector<std::string> labels_;
  int output_dim_ = 0;

  bool amplitude_input_ = false;
  std::vector<FockState> sector_states_;      // amplitude path: component states

  // Training cache, valid for exactly (theta_cache_, x_cache_).
  bool has_cache_ = false;
  RVector theta_cache_;
  RMatrix x_cache_;
  std::vector<RowCache> row_cache_;
  std::vector<slos::EvolveResult> component_cache_;  // amplitude path
  CMatrix component_outputs_;                        // basis size x component count
};

}  // namespace bosonflow::layer
