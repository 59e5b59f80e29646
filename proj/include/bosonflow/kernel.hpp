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

#include "bosonflow/circuit.hpp"
#include "bosonflow/fock.hpp"
#include "bosonflow/slos.hpp"
#include "bosonflow/types.hpp"

namespace bosonflow::kernel {

/// Feature map |phi(x)> = U(x)|input_state>. The circuit must read at least
/// one input feature; any trainable parameters are frozen at their initial
/// values when the kernel is constructed, so the map is stationary.
struct KernelSpec {
  circuit::ParamCircuit circuit;
  FockState input_state;
  bool cache_states = true;
};

class FidelityKernel {
 public:
  explicit FidelityKernel(KernelSpec spec);

  const KernelSpec& spec() const { return spec_; }

  /// Evolves the input state under U(x); unit norm.
  AmplitudeVector feature_state(const RVector& x) const;

  /// k(x1, x2) = |<phi(x1)|phi(x2)>|^2, symmetric, 1 on the diagonal.
  double fidelity(const RVector& x1, const RVector& x2) const;

  /// Symmetric Gram matrix over the rows of X: the upper triangle is
  /// computed and mirrored, the diagonal set to exactly 1. With
  /// cache_states each feature state is evolved once; without, states are
  /// recomputed per pair, bit-identically.
  RMatrix gram(const RMatrix& x, int threads = 1) const;

  /// Rectangular Gram block G[i][j] = k(X1[i], X2[j]).
  RMatrix gram(const RMatrix& x1, const RMatrix& x2, int threads = 1) const;

 private:
  CVector state_values(const RVector& x) const;

  KernelSpec spec_;
  RVector theta_;
  slos::TransitionGraph graph_;
};

}  // namespace bosonflow::kernel
