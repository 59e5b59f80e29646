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

#include "bosonflow/slos.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <utility>

#include "bosonflow/errors.hpp"

namespace bosonflow::slos {

namespace {

std::atomic<std::uint64_t> g_build_count{0};

constexpr double kUnitarityTolerance = 1e-8;

double sqrt_factorial_product(const FockState& s) {
  double p = 1.0;
  for (int i = 0; i < s.modes(); ++i) {
    for (int c = 2; c <= s.occupation(i); ++c) p *= c;
  }
  return std::sqrt(p);
}

std::vector<int> injection_modes(const FockState& s) {
  std::vector<int> p;
  p.reserve(static_cast<std::size_t>(s.photon_count()));
  for (int i = 0; i < s.modes(); ++i) {
    for (int c = 0; c < s.occupation(i); ++c) p.push_back(i);
  }
  return p;
}

void check_matrix(const TransitionGraph& g, const CMatrix& u,
                  const ForwardOptions& options) {
  if (u.rows() != g.modes() || u.cols() != g.modes()) {
    throw DimensionMismatch("matrix size does not match the graph's mode count");
  }
  if (options.check_unitary && unitarity_defect(u) > kUnitarityTolerance) {
    throw NonUnitaryInput("matrix is not unitary within 1e-8");
  }
}

void check_input(const TransitionGraph& g, const FockState& input) {
  if (input.modes() != g.modes()) {
    throw DimensionMismatch("input state mode count does not match the graph");
  }
  if (input.photon_count() != g.photons()) {
    throw PhotonCountMismatch("input photon count does not match the graph");
  }
}

// One step of the evolution. Edges arrive sorted by dst with every dst rank
// present, so the accumulator can stream: flush on dst change, no zero-fill
// of `next` needed. `scale` folds the final norm division into the flush.
void apply_step(const TransitionStep& st, const Complex* column,
                const Complex* prev, Complex* next, double scale) {
  const std::uint32_t* src = st.src.data();
  const std::uint32_t* dst = st.dst.data();
  const std::uint32_t* mode = st.mode.data();
  const double* factor = st.factor.data();
  const std::size_t count = st.src.size();

  Complex acc(0.0, 0.0);
  std::uint32_t current = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t d = dst[i];
    if (d != current) {
      next[current] = acc * scale;
      current = d;
      acc = Complex(0.0, 0.0);
    }
    acc += column[mode[i]] * factor[i] * prev[src[i]];
  }
  next[current] = acc * scale;
}

const CVector& evolve(const TransitionGraph& g, const CMatrix& u,
                      const std::vector<int>& pmodes, double input_norm,
                      Workspace& ws, const ForwardOptions& options) {
  check_matrix(g, u, options);
  const int n = g.photons();
  const auto& steps = g.steps();
  const double inv_norm = 1.0 / input_norm;

  if (options.keep_intermediates) {
    ws.levels.resize(static_cast<std::size_t>(n) + 1);
    ws.levels[0].resize(1);
    ws.levels[0](0) = Complex(1.0, 0.0);
    for (int k = 1; k <= n; ++k) {
      const TransitionStep& st = steps[static_cast<std::size_t>(k - 1)];
      CVector& next = ws.levels[static_cast<std::size_t>(k)];
      next.resize(static_cast<Eigen::Index>(st.dst_size));
      apply_step(st, u.col(pmodes[static_cast<std::size_t>(k - 1)]).data(),
                 ws.levels[static_cast<std::size_t>(k - 1)].data(), next.data(),
                 1.0);
    }
    ws.ping = ws.levels[static_cast<std::size_t>(n)] * inv_norm;
    return ws.ping;
  }

  const Eigen::Index final_size =
      static_cast<Eigen::Index>(g.output_basis().size());
  ws.ping.resize(final_size);
  ws.pong.resize(final_size);
  CVector* prev = &ws.ping;
  CVector* next = &ws.pong;
  (*prev)(0) = Complex(1.0, 0.0);
  for (int k = 1; k <= n; ++k) {
    const TransitionStep& st = steps[static_cast<std::size_t>(k - 1)];
    apply_step(st, u.col(pmodes[static_cast<std::size_t>(k - 1)]).data(),
               prev->data(), next->data(), k == n ? inv_norm : 1.0);
    std::swap(prev, next);
  }
  return *prev;
}

CMatrix backward_impl(const TransitionGraph& g, const CMatrix& u,
                      const std::vector<int>& pmodes, double input_norm,
                      const std::vector<CVector>& cached,
                      const CVector& loss_grad) {
  if (u.rows() != g.modes() || u.cols() != g.modes()) {
    throw DimensionMismatch("matrix size does not match the graph's mode count");
  }
  const int m = g.modes();
  const int n = g.photons();
  const auto& steps = g.steps();
  if (cached.size() != static_cast<std::size_t>(n) + 1) {
    throw MissingIntermediates("cached level count does not match the graph");
  }
  if (cached[0].size() != 1) {
    throw MissingIntermediates("cached level 0 must hold the single vacuum amplitude");
  }
  for (int k = 1; k <= n; ++k) {
    if (cached[static_cast<std::size_t>(k)].size() !=
        static_cast<Eigen::Index>(steps[static_cast<std::size_t>(k - 1)].dst_size)) {
      throw MissingIntermediates("cached level size does not match the graph");
    }
  }
  if (loss_grad.size() != static_cast<Eigen::Index>(g.output_basis().size())) {
    throw DimensionMismatch("loss gradient length does not match the output basis");
  }

  CMatrix grad_u = CMatrix::Zero(m, m);
  CVector grad_current = loss_grad / input_norm;
  for (int k = n; k >= 1; --k) {
    const TransitionStep& st = steps[static_cast<std::size_t>(k - 1)];
    const int p = pmodes[static_cast<std::size_t>(k - 1)];
    const Complex* column = u.col(p).data();
    const Complex* prev = cached[static_cast<std::size_t>(k - 1)].data();
    const Complex* gnext = grad_current.data();

    CVector grad_prev = CVector::Zero(static_cast<Eigen::Index>(st.src_size));
    CVector grad_column = CVector::Zero(m);
    const std::size_t count = st.src.size();
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t s = st.src[i];
      const std::uint32_t d = st.dst[i];
      const std::uint32_t j = st.mode[i];
      const double f = st.factor[i];
      const Complex gd = gnext[d];
      grad_prev(static_cast<Eigen::Index>(s)) += std::conj(column[j] * f) * gd;
      grad_column(static_cast<Eigen::Index>(j)) += f * std::conj(prev[s]) * gd;
    }
    grad_u.col(p) += grad_column;
    grad_current = std::move(grad_prev);
  }
  return grad_u;
}

}  // namespace

std::uint64_t TransitionGraph::total_edges() const {
  std::uint64_t total = 0;
  for (const auto& st : steps_) total += st.edge_count();
  return total;
}

std::uint64_t TransitionGraph::max_level_size() const {
  return output_basis_.size();
}

std::uint64_t graph_build_count() { return g_build_count.load(); }

TransitionGraph build_graph(int modes, const FockState& input,
                            std::uint64_t max_states) {
  if (input.modes() != modes) {
    throw DimensionMismatch("input state mode count does not match the graph");
  }
  const int n = input.photon_count();
  if (n < 1) {
    throw DimensionMismatch("input state must carry at least one photon");
  }
  const std::uint64_t full_size = basis_size(modes, n);
  if (full_size > max_states) {
    throw OverflowError("final basis size exceeds the configured state cap");
  }

  TransitionGraph g;
  g.modes_ = modes;
  g.photons_ = n;
  g.input_modes_ = injection_modes(input);
  g.input_norm_ = sqrt_factorial_product(input);
  g.output_basis_ = FockBasis(modes, n);
  g.steps_.resize(static_cast<std::size_t>(n));

  for (int k = 1; k <= n; ++k) {
    TransitionStep& st = g.steps_[static_cast<std::size_t>(k - 1)];
    const FockBasis src_basis(modes, k - 1);
    const FockBasis dst_basis(modes, k);
    st.src_size = src_basis.size();
    st.dst_size = dst_basis.size();
    const std::size_t expected =
        static_cast<std::size_t>(st.src_size) * static_cast<std::size_t>(modes);
    st.src.reserve(expected);
    st.dst.reserve(expected);
    st.mode.reserve(expected);
    st.factor.reserve(expected);

    FockState t = dst_basis.first_state();
    std::uint32_t dst_rank = 0;
    do {
      std::vector<int> occ = t.to_vector();
      for (int j = 0; j < modes; ++j) {
        if (occ[static_cast<std::size_t>(j)] == 0) continue;
        occ[static_cast<std::size_t>(j)] -= 1;
        const std::uint64_t src_rank = src_basis.rank(FockState(occ));
        occ[static_cast<std::size_t>(j)] += 1;
        st.src.push_back(static_cast<std::uint32_t>(src_rank));
        st.dst.push_back(dst_rank);
        st.mode.push_back(static_cast<std::uint32_t>(j));
        st.factor.push_back(std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(j)])));
      }
      ++dst_rank;
    } while (dst_basis.next_state(t));
  }

  g_build_count.fetch_add(1);
  return g;
}

EvolveResult forward(const TransitionGraph& g, const CMatrix& u,
                     const ForwardOptions& options) {
  Workspace ws;
  const CVector& final_values = evolve(g, u, g.input_modes(), g.input_norm(), ws, options);
  EvolveResult result{AmplitudeVector(g.output_basis(), final_values), {}};
  if (options.keep_intermediates) result.intermediates = std::move(ws.levels);
  return result;
}

EvolveResult forward(const TransitionGraph& g, const CMatrix& u,
                     const FockState& input, const ForwardOptions& options) {
  check_input(g, input);
  Workspace ws;
  const CVector& final_values =
      evolve(g, u, injection_modes(input), sqrt_factorial_product(input), ws, options);
  EvolveResult result{AmplitudeVector(g.output_basis(), final_values), {}};
  if (options.keep_intermediates) result.intermediates = std::move(ws.levels);
  return result;
}

const CVector& forward(const TransitionGraph& g, const CMatrix& u,
                       Workspace& ws, const ForwardOptions& options) {
  return evolve(g, u, g.input_modes(), g.input_norm(), ws, options);
}

CMatrix backward(const TransitionGraph& g, const CMatrix& u,
                 const std::vector<CVector>& cached, const CVector& loss_grad) {
  return backward_impl(g, u, g.input_modes(), g.input_norm(), cached, loss_grad);
}

CMatrix backward(const TransitionGraph& g, const CMatrix& u,
                 const FockState& input, const std::vector<CVector>& cached,
                 const CVector& loss_grad) {
  check_input(g, input);
  return backward_impl(g, u, injection_modes(input), sqrt_factorial_product(input),
                       cached, loss_grad);
}

void dump_csv(const TransitionGraph& g, std::ostream& out) {
  out << "step,src,dst,mode,factor\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < g.steps().size(); ++k) {
    const TransitionStep& st = g.steps()[k];
    for (std::size_t i = 0; i < st.src.size(); ++i) {
      out << (k + 1) << ',' << st.src[i] << ',' << st.dst[i] << ','
          << st.mode[i] << ',' << st.factor[i] << '\n';
    }
  }
}

}  // namespace bosonflow::slos
