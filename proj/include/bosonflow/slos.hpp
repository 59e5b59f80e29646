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

#ifndef BOSONFLOW_SLOS_HPP_
#define BOSONFLOW_SLOS_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bosonflow/fock.hpp"
#include "bosonflow/types.hpp"

namespace bosonflow::slos {

// Refuse to build bases larger than this unless the caller overrides.
inline constexpr std::uint64_t kDefaultStateCap = 1ull << 26;

// Edges taking (k-1)-photon amplitudes to k-photon amplitudes, stored as
// parallel arrays sorted by (dst, mode) so accumulation is write-contiguous
// and summation order is deterministic.
struct TransitionStep {
  std::vector<std::uint32_t> src;
  std::vector<std::uint32_t> dst;
  std::vector<std::uint32_t> mode;
  std::vector<double> factor;
  std::uint64_t src_size = 0;
  std::uint64_t dst_size = 0;

  std::size_t edge_count() const { return src.size(); }
};

/// Precomputed index structure for photon-by-photon evolution. Content
/// depends only on the mode count and the input state, never on the matrix
/// that is later applied, so one graph serves any number of evaluations.
class TransitionGraph {
 public:
  int modes() const { return modes_; }
  int photons() const { return photons_; }

  /// Injection modes p_1..p_n, nondecreasing.
  const std::vector<int>& input_modes() const { return input_modes_; }

  /// sqrt of the product of input occupation factorials.
  double input_norm() const { return input_norm_; }

  const std::vector<TransitionStep>& steps() const { return steps_; }
  const FockBasis& output_basis() const { return output_basis_; }

  std::uint64_t total_edges() const;
  std::uint64_t max_level_size() const;

 private:
  TransitionGraph() : output_basis_(1, 0) {}

  friend TransitionGraph build_graph(int, const FockState&, std::uint64_t);

  int modes_ = 0;
  int photons_ = 0;
  std::vector<int> input_modes_;
  double input_norm_ = 1.0;
  std::vector<TransitionStep> steps_;
  FockBasis output_basis_;
};

/// Number of build_graph calls since process start; lets tests assert that a
/// graph built once is never rebuilt behind the caller's back.
std::uint64_t graph_build_count();

/// Builds the transition graph for `input` on `modes` modes. Step k holds
/// one edge per ((k-1)-photon state, output mode) pair. Throws OverflowError
/// when the final basis would exceed `max_states`.
TransitionGraph build_graph(int modes, const FockState& input,
                            std::uint64_t max_states = kDefaultStateCap);

struct ForwardOptions {
  bool check_unitary = true;
  bool keep_intermediates = false;
};

/// Scratch buffers reusable across forward calls on the same graph. With
/// keep_intermediates the per-level amplitude arrays (levels 0..n) stay
/// valid until the next forward; otherwise only two ping-pong buffers are
/// held and `levels` stays empty.
struct Workspace {
  std::vector<CVector> levels;
  CVector ping;
  CVector pong;
};

struct EvolveResult {
  AmplitudeVector output;

  // Levels 0..n, populated only when requested going in.
  std::vector<CVector> intermediates;
};

/// Evolves the graph's input state through `u`. Gradient convention for the
/// whole library: a packed complex z carries dL/dRe in real(z) and dL/dIm in
/// imag(z) for a real scalar loss L.
EvolveResult forward(const TransitionGraph& g, const CMatrix& u,
                     const ForwardOptions& options = {});

/// Same evolution with the injection modes and norm taken from `input`
/// instead of the graph's build-time state. `input` must have the graph's
/// mode and photon counts; this is what lets one graph serve every basis
/// state of a photon-number sector.
EvolveResult forward(const TransitionGraph& g, const CMatrix& u,
                     const FockState& input, const ForwardOptions& options = {});

/// Allocation-free variant for hot loops: evolves into `ws` and returns a
/// reference to the final-level amplitudes (length = output basis size,
/// already divided by the input norm). The reference is invalidated by the
/// next call using `ws`.
const CVector& forward(const TransitionGraph& g, const CMatrix& u,
                       Workspace& ws, const ForwardOptions& options = {});

/// Reverse pass over the cached per-level amplitudes of one forward call.
/// `loss_grad` packs (dL/dRe a_t, dL/dIm a_t) per output amplitude; the
/// result packs the same pair per entry of `u`. Entries in columns never
/// injected into are zero. Throws MissingIntermediates unless `cached`
/// holds exactly the levels 0..n a keep_intermediates forward produced.
CMatrix backward(const TransitionGraph& g, const CMatrix& u,
                 const std::vector<CVector>& cached, const CVector& loss_grad);

/// Reverse pass matching the explicit-input forward overload.
CMatrix backward(const TransitionGraph& g, const CMatrix& u,
                 const FockState& input, const std::vector<CVector>& cached,
                 const CVector& loss_grad);

/// Writes one `step,src,dst,mode,factor` row per edge for test tooling.
void dump_csv(const TransitionGraph& g, std::ostream& out);

}  // namespace bosonflow::slos

#endif  // BOSONFLOW_SLOS_HPP_
