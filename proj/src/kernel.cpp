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

#include "bosonflow/kernel.hpp"

#include <algorithm>
#include <complex>
#include <thread>
#include <vector>

#include "bosonflow/errors.hpp"

namespace bosonflow::kernel {

namespace {

KernelSpec validated(KernelSpec spec) {
  if (spec.circuit.input_feature_count() < 1) {
    throw InvalidSpec("kernel circuits must read at least one input feature");
  }
  if (spec.input_state.modes() != spec.circuit.modes()) {
    throw InvalidSpec("input state mode count does not match the circuit");
  }
  return spec;
}

double overlap_probability(const CVector& a, const CVector& b) {
  const Complex inner = a.dot(b);
  return std::norm(inner);
}

template <typename Fn>
void parallel_index(Eigen::Index count, int threads, Fn&& fn) {
  threads = std::max(1, static_cast<int>(std::min<Eigen::Index>(threads, count)));
  if (count == 0) return;
  if (threads == 1) {
    for (Eigen::Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<Eigen::Index> failed(static_cast<std::size_t>(threads), -1);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (Eigen::Index i = t; i < count; i += threads) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
          failed[static_cast<std::size_t>(t)] = i;
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  int first = -1;
  for (int t = 0; t < threads; ++t) {
    if (errors[static_cast<std::size_t>(t)] &&
        (first < 0 || failed[static_cast<std::size_t>(t)] <
                          failed[static_cast<std::size_t>(first)])) {
      first = t;
    }
  }
  if (first >= 0) std::rethrow_exception(errors[static_cast<std::size_t>(first)]);
}

void check_feature_arity(const circuit::ParamCircuit& c, Eigen::Index cols) {
  if (cols < c.input_feature_count()) {
    throw ArityMismatch("kernel inputs provide fewer features than the circuit reads");
  }
}

}  // namespace

FidelityKernel::FidelityKernel(KernelSpec spec)
    : spec_(validated(std::move(spec))),
      graph_(slos::build_graph(spec_.circuit.modes(), spec_.input_state)) {
  const std::vector<double>& inits = spec_.circuit.trainable_inits();
  theta_ = RVector(static_cast<Eigen::Index>(inits.size()));
  for (std::size_t i = 0; i < inits.size(); ++i) {
    theta_(static_cast<Eigen::Index>(i)) = inits[i];
  }
}

CVector FidelityKernel::state_values(const RVector& x) const {
  const CMatrix u = circuit::compile_unitary(spec_.circuit, theta_, x);
  return slos::forward(graph_, u).output.values;
}

AmplitudeVector FidelityKernel::feature_state(const RVector& x) const {
  return AmplitudeVector(graph_.output_basis(), state_values(x));
}

double FidelityKernel::fidelity(const RVector& x1, const RVector& x2) const {
  check_feature_arity(spec_.circuit, std::min(x1.size(), x2.size()));
  return overlap_probability(state_values(x1), state_values(x2));
}

RMatrix FidelityKernel::gram(const RMatrix& x, int threads) const {
  if (x.rows() == 0) throw DimensionMismatch("gram needs a nonempty batch");
  check_feature_arity(spec_.circuit, x.cols());
  const Eigen::Index rows = x.rows();
  std::vector<CVector> states;
  if (spec_.cache_states) {
    states.resize(static_cast<std::size_t>(rows));
    parallel_index(rows, threads, [&](Eigen::Index i) {
      states[static_cast<std::size_t>(i)] = state_values(RVector(x.row(i).transpose()));
    });
  }
  RMatrix g(rows, rows);
  parallel_index(rows, threads, [&](Eigen::Index i) {
    g(i, i) = 1.0;
    const CVector lhs = spec_.cache_states
                            ? states[static_cast<std::size_t>(i)]
                            : state_values(RVector(x.row(i).transpose()));
    for (Eigen::Index j = i + 1; j < rows; ++j) {
      const CVector rhs = spec_.cache_states
                              ? states[static_cast<std::size_t>(j)]
                              : state_values(RVector(x.row(j).transpose()));
      const double k = overlap_probability(lhs, rhs);
      g(i, j) = k;
      g(j, i) = k;
    }
  });
  return g;
}

RMatrix FidelityKernel::gram(const RMatrix& x1, const RMatrix& x2, int threads) const {
  if (x1.rows() == 0 || x2.rows() == 0) {
    throw DimensionMismatch("gram needs nonempty batches");
  }
  check_feature_arity(spec_.circuit, std::min(x1.cols(), x2.cols()));
  std::vector<CVector> lhs(static_cast<std::size_t>(x1.rows()));
  std::vector<CVector> rhs(static_cast<std::size_t>(x2.rows()));
  parallel_index(x1.rows(), threads, [&](Eigen::Index i) {
    lhs[static_cast<std::size_t>(i)] = state_values(RVector(x1.row(i).transpose()));
  });
  parallel_index(x2.rows(), threads, [&](Eigen::Index i) {
    rhs[static_cast<std::size_t>(i)] = state_values(RVector(x2.row(i).transpose()));
  });
  RMatrix g(x1.rows(), x2.rows());
  parallel_index(x1.rows(), threads, [&](Eigen::Index i) {
    for (Eigen::Index j = 0; j < x2.rows(); ++j) {
      g(i, j) = overlap_probability(lhs[static_cast<std::size_t>(i)],
                                    rhs[static_cast<std::size_t>(j)]);
    }
  });
  return g;
}

}  // namespace bosonflow::kernel
