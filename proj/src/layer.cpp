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

#include "bosonflow/layer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bosonflow/errors.hpp"

namespace bosonflow::layer {

namespace {

constexpr double kNullProjectionFloor = 1e-300;

int spec_modes(const LayerSpec& spec) { return spec.circuit.modes(); }

int spec_photons(const LayerSpec& spec) {
  if (const FockState* state = std::get_if<FockState>(&spec.input)) {
    return state->photon_count();
  }
  return std::get<AmplitudeInput>(spec.input).photons;
}

void validate_spec(const LayerSpec& spec) {
  if (const FockState* state = std::get_if<FockState>(&spec.input)) {
    if (state->modes() != spec.circuit.modes()) {
      throw InvalidSpec("input state mode count does not match the circuit");
    }
  } else if (spec.circuit.input_feature_count() != 0) {
    throw InvalidSpec(
        "amplitude-encoded input requires a circuit without input features");
  }
  if (spec_photons(spec) < 1) {
    throw InvalidSpec("layer input needs at least one photon");
  }
  if (spec.space == measurement::ComputationSpace::Unbunched &&
      spec_photons(spec) > spec_modes(spec)) {
    throw InvalidSpec("unbunched space needs at least as many modes as photons");
  }
}

std::string key_label(const std::vector<int>& key) {
  std::string out = "[";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(key[i]);
  }
  out += ']';
  return out;
}

struct Tables {
  std::vector<FockState> space_states;
  std::vector<std::uint64_t> kept_ranks;
  measurement::Regrouping regrouping;
  RMatrix mode_weights;
  std::vector<std::string> labels;
  int output_dim = 0;
};

Tables build_tables(const LayerSpec& spec) {
  validate_spec(spec);
  Tables t;
  FockBasis basis(spec_modes(spec), spec_photons(spec));
  if (spec.space == measurement::ComputationSpace::Fock) {
    t.space_states = basis.enumerate();
  } else {
    FockState s = basis.first_state();
    std::uint64_t rank = 0;
    do {
      bool unbunched = true;
      for (int j = 0; j < s.modes() && unbunched; ++j) {
        unbunched = s.occupation(j) <= 1;
      }
      if (unbunched) {
        t.space_states.push_back(s);
        t.kept_ranks.push_back(rank);
      }
      ++rank;
    } while (basis.next_state(s));
  }

  const measurement::StrategyKind kind = spec.strategy.kind();
  if (kind == measurement::StrategyKind::Probabilities ||
      kind == measurement::StrategyKind::Partial) {
    t.regrouping =
        measurement::build_regrouping(t.space_states, spec.strategy, spec.detector);
    t.output_dim = static_cast<int>(t.regrouping.keys.size());
    for (const auto& key : t.regrouping.keys) t.labels.push_back(key_label(key));
  } else if (kind == measurement::StrategyKind::PerModeExpectation) {
    const int m = spec_modes(spec);
    t.mode_weights = RMatrix(static_cast<Eigen::Index>(t.space_states.size()), m);
    for (std::size_t i = 0; i < t.space_states.size(); ++i) {
      for (int j = 0; j < m; ++j) {
        int w = t.space_states[i].occupation(j);
        if (spec.detector == measurement::Detector::Threshold) w = std::min(w, 1);
        t.mode_weights(static_cast<Eigen::Index>(i), j) = static_cast<double>(w);
      }
    }
    t.output_dim = m;
    for (int j = 0; j < m; ++j) t.labels.push_back("n" + std::to_string(j));
  } else {
    t.output_dim = static_cast<int>(2 * t.space_states.size());
    for (const FockState& s : t.space_states) {
      t.labels.push_back("Re" + key_label(s.to_vector()));
      t.labels.push_back("Im" + key_label(s.to_vector()));
    }
  }
  return t;
}

slos::TransitionGraph make_graph(const LayerSpec& spec) {
  validate_spec(spec);
  if (const FockState* state = std::get_if<FockState>(&spec.input)) {
    return slos::build_graph(spec.circuit.modes(), *state);
  }
  FockBasis basis(spec_modes(spec), spec_photons(spec));
  return slos::build_graph(spec.circuit.modes(), basis.first_state());
}

double pair_dot(const CMatrix& a, const CMatrix& b) {
  return (a.real().cwiseProduct(b.real()) + a.imag().cwiseProduct(b.imag())).sum();
}

double pair_dot(const CVector& a, const CVector& b) {
  return (a.real().cwiseProduct(b.real()) + a.imag().cwiseProduct(b.imag())).sum();
}

// Runs fn(row) for every row on up to `threads` threads; the lowest-row
// failure wins and is rethrown with its row index attached.
template <typename Fn>
void for_each_row(Eigen::Index rows, int threads, Fn&& fn) {
  if (rows == 0) return;
  threads = std::max(1, static_cast<int>(std::min<Eigen::Index>(threads, rows)));
  if (threads == 1) {
    for (Eigen::Index row = 0; row < rows; ++row) {
      try {
        fn(row);
      } catch (const BatchRowError&) {
        throw;
      } catch (const std::exception& e) {
        throw BatchRowError(static_cast<std::size_t>(row), e.what());
      }
    }
    return;
  }
  std::vector<Eigen::Index> failed_row(static_cast<std::size_t>(threads), -1);
  std::vector<std::exception_ptr> failure(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (Eigen::Index row = t; row < rows; row += threads) {
        try {
          fn(row);
        } catch (...) {
          failed_row[static_cast<std::size_t>(t)] = row;
          failure[static_cast<std::size_t>(t)] = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  Eigen::Index first = -1;
  std::exception_ptr chosen;
  for (int t = 0; t < threads; ++t) {
    if (failure[static_cast<std::size_t>(t)] &&
        (first < 0 || failed_row[static_cast<std::size_t>(t)] < first)) {
      first = failed_row[static_cast<std::size_t>(t)];
      chosen = failure[static_cast<std::size_t>(t)];
    }
  }
  if (chosen) {
    try {
      std::rethrow_exception(chosen);
    } catch (const BatchRowError&) {
      throw;
    } catch (const std::exception& e) {
      throw BatchRowError(static_cast<std::size_t>(first), e.what());
    }
  }
}

}  // namespace

int output_dim(const LayerSpec& spec) { return build_tables(spec).output_dim; }

std::vector<std::string> output_labels(const LayerSpec& spec) {
  return build_tables(spec).labels;
}

PhotonicLayer::PhotonicLayer(LayerSpec spec)
    : spec_(std::move(spec)), graph_(make_graph(spec_)) {
  Tables t = build_tables(spec_);
  space_states_ = std::move(t.space_states);
  kept_ranks_ = std::move(t.kept_ranks);
  regrouping_ = std::move(t.regrouping);
  mode_weights_ = std::move(t.mode_weights);
  labels_ = std::move(t.labels);
  output_dim_ = t.output_dim;

  const std::vector<double>& inits = spec_.circuit.trainable_inits();
  theta_ = RVector(static_cast<Eigen::Index>(inits.size()));
  for (std::size_t i = 0; i < inits.size(); ++i) {
    theta_(static_cast<Eigen::Index>(i)) = inits[i];
  }

  amplitude_input_ = std::holds_alternative<AmplitudeInput>(spec_.input);
  if (amplitude_input_) {
    sector_states_ = graph_.output_basis().enumerate();
  }
}

CVector PhotonicLayer::project_space(const CVector& a, double& space_norm) const {
  if (spec_.space == measurement::ComputationSpace::Fock) {
    space_norm = 1.0;
    return a;
  }
  CVector kept(static_cast<Eigen::Index>(kept_ranks_.size()));
  for (std::size_t i = 0; i < kept_ranks_.size(); ++i) {
    kept(static_cast<Eigen::Index>(i)) =
        a(static_cast<Eigen::Index>(kept_ranks_[i]));
  }
  const double mass = kept.squaredNorm();
  if (mass < kNullProjectionFloor) {
    throw NullProjection("state has no unbunched component");
  }
  space_norm = std::sqrt(mass);
  kept *= 1.0 / space_norm;
  return kept;
}

RVector PhotonicLayer::apply_strategy(const CVector& b) const {
  const measurement::StrategyKind kind = spec_.strategy.kind();
  if (kind == measurement::StrategyKind::Probabilities ||
      kind == measurement::StrategyKind::Partial) {
    RVector out = RVector::Zero(output_dim_);
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      out(static_cast<Eigen::Index>(
          regrouping_.state_to_key[static_cast<std::size_t>(i)])) += std::norm(b(i));
    }
    return out;
  }
  if (kind == measurement::StrategyKind::PerModeExpectation) {
    RVector out = RVector::Zero(output_dim_);
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      const double p = std::norm(b(i));
      for (Eigen::Index j = 0; j < out.size(); ++j) {
        out(j) += p * mode_weights_(i, j);
      }
    }
    return out;
  }
  RVector out(output_dim_);
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    out(2 * i) = b(i).real();
    out(2 * i + 1) = b(i).imag();
  }
  return out;
}

CVector PhotonicLayer::strategy_adjoint(const CVector& b,
                                        const RVector& upstream_row) const {
  const measurement::StrategyKind kind = spec_.strategy.kind();
  CVector g(b.size());
  if (kind == measurement::StrategyKind::Probabilities ||
      kind == measurement::StrategyKind::Partial) {
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      const double u = upstream_row(static_cast<Eigen::Index>(
          regrouping_.state_to_key[static_cast<std::size_t>(i)]));
      g(i) = 2.0 * u * b(i);
    }
    return g;
  }
  if (kind == measurement::StrategyKind::PerModeExpectation) {
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      double w = 0.0;
      for (Eigen::Index j = 0; j < upstream_row.size(); ++j) {
        w += upstream_row(j) * mode_weights_(i, j);
      }
      g(i) = 2.0 * w * b(i);
    }
    return g;
  }
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    g(i) = Complex(upstream_row(2 * i), upstream_row(2 * i + 1));
  }
  return g;
}

CVector PhotonicLayer::space_adjoint(const RowCache& rc, const CVector& g_b) const {
  if (spec_.space == measurement::ComputationSpace::Fock) {
    return g_b;
  }
  const CVector& b = rc.projected;
  const double rho = pair_dot(g_b, b);
  CVector g_a = CVector::Zero(static_cast<Eigen::Index>(graph_.output_basis().size()));
  const double inv = 1.0 / rc.space_norm;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    g_a(static_cast<Eigen::Index>(kept_ranks_[static_cast<std::size_t>(i)])) =
        (g_b(i) - b(i) * rho) * inv;
  }
  return g_a;
}

void PhotonicLayer::forward_phase(const RMatrix& X, bool training, int threads,
                                  RMatrix& out) {
  const int fcount = spec_.circuit.input_feature_count();
  if (X.cols() != fcount) {
    throw ArityMismatch("feature rows must have exactly " +
                        std::to_string(fcount) + " columns");
  }
  CMatrix shared_u;
  if (fcount == 0) {
    shared_u = circuit::compile_unitary(spec_.circuit, theta_, RVector());
  }
  slos::ForwardOptions opts;
  opts.keep_intermediates = training;
  for_each_row(X.rows(), threads, [&](Eigen::Index row) {
    thread_local slos::Workspace ws;
    CMatrix local_u;
    if (fcount > 0) {
      local_u = circuit::compile_unitary(spec_.circuit, theta_,
                                         RVector(X.row(row).transpose()));
    }
    const CMatrix& u = fcount > 0 ? local_u : shared_u;
    RowCache rc;
    if (training) {
      slos::EvolveResult res = slos::forward(graph_, u, opts);
      rc.intermediates = std::move(res.intermediates);
      rc.projected = project_space(res.output.values, rc.space_norm);
    } else {
      const CVector& values = slos::forward(graph_, u, ws, opts);
      rc.projected = project_space(values, rc.space_norm);
    }
    out.row(row) = apply_strategy(rc.projected).transpose();
    if (training) {
      row_cache_[static_cast<std::size_t>(row)] = std::move(rc);
    }
  });
}

void PhotonicLayer::forward_amplitude(const RMatrix& X, bool training, int threads,
                                      RMatrix& out) {
  const FockBasis& basis = graph_.output_basis();
  const Eigen::Index count = X.cols();
  if (count < 1) {
    throw ArityMismatch("amplitude rows need at least one feature");
  }
  if (static_cast<std::uint64_t>(count) > basis.size()) {
    throw TooLong("feature vector longer than the photon-number sector");
  }
  const CMatrix u = circuit::compile_unitary(spec_.circuit, theta_, RVector());
  slos::ForwardOptions opts;
  opts.keep_intermediates = training;
  CMatrix outputs(static_cast<Eigen::Index>(basis.size()), count);
  component_cache_.clear();
  for (Eigen::Index s = 0; s < count; ++s) {
    slos::EvolveResult res =
        slos::forward(graph_, u, sector_states_[static_cast<std::size_t>(s)], opts);
    outputs.col(s) = res.output.values;
    if (training) component_cache_.push_back(std::move(res));
  }
  for_each_row(X.rows(), threads, [&](Eigen::Index row) {
    RowCache rc;
    rc.feature_norm = X.row(row).norm();
    if (rc.feature_norm == 0.0) {
      throw ZeroNorm("cannot normalize a zero feature row");
    }
    rc.encoded = X.row(row).transpose() * (1.0 / rc.feature_norm);
    CVector a = outputs * rc.encoded.cast<Complex>();
    rc.projected = project_space(a, rc.space_norm);
    out.row(row) = apply_strategy(rc.projected).transpose();
    if (training) {
      row_cache_[static_cast<std::size_t>(row)] = std::move(rc);
    }
  });
  if (training) component_outputs_ = std::move(outputs);
}

RMatrix PhotonicLayer::forward(const RMatrix& X, bool training, int threads) {
  RMatrix out(X.rows(), output_dim_);
  if (training) {
    has_cache_ = false;
    row_cache_.assign(static_cast<std::size_t>(X.rows()), RowCache{});
  }
  if (amplitude_input_) {
    forward_amplitude(X, training, threads, out);
  } else {
    forward_phase(X, training, threads, out);
  }
  if (training) {
    theta_cache_ = theta_;
    x_cache_ = X;
    has_cache_ = true;
  }
  return out;
}

std::pair<RVector, RMatrix> PhotonicLayer::backward(const RMatrix& X,
                                                    const RMatrix& upstream,
                                                    int threads) {
  const bool theta_match =
      has_cache_ && theta_cache_.size() == theta_.size() &&
      (theta_cache_.array() == theta_.array()).all();
  const bool x_match = has_cache_ && x_cache_.rows() == X.rows() &&
                       x_cache_.cols() == X.cols() &&
                       (x_cache_.array() == X.array()).all();
  if (!theta_match || !x_match) {
    throw StaleIntermediates(
        "backward needs a training-mode forward for this exact theta and X");
  }
  if (upstream.rows() != X.rows() || upstream.cols() != output_dim_) {
    throw DimensionMismatch("upstream gradient shape does not match the output");
  }

  const Eigen::Index rows = X.rows();
  const int tcount = spec_.circuit.trainable_count();
  RVector dtheta = RVector::Zero(tcount);

  if (!amplitude_input_) {
    const int fcount = spec_.circuit.input_feature_count();
    RMatrix dx(rows, fcount);
    RMatrix dtheta_rows(rows, tcount);
    if (tcount == 0 && fcount == 0) {
      return {dtheta, dx};
    }
    circuit::UnitaryWithDerivatives shared;
    if (fcount == 0) {
      shared = circuit::compile_all_derivatives(spec_.circuit, theta_, RVector());
    }
    for_each_row(rows, threads, [&](Eigen::Index row) {
      const RowCache& rc = row_cache_[static_cast<std::size_t>(row)];
      const CVector g_b =
          strategy_adjoint(rc.projected, RVector(upstream.row(row).transpose()));
      const CVector g_a = space_adjoint(rc, g_b);
      circuit::UnitaryWithDerivatives local;
      const circuit::UnitaryWithDerivatives& all =
          fcount > 0 ? (local = circuit::compile_all_derivatives(
                            spec_.circuit, theta_,
                            RVector(X.row(row).transpose())))
                     : shared;
      const CMatrix g_u = slos::backward(graph_, all.value, rc.intermediates, g_a);
      for (int r = 0; r < tcount; ++r) {
        dtheta_rows(row, r) = pair_dot(g_u, all.dtheta[static_cast<std::size_t>(r)]);
      }
      for (int f = 0; f < fcount; ++f) {
        dx(row, f) = pair_dot(g_u, all.dfeature[static_cast<std::size_t>(f)]);
      }
    });
    for (Eigen::Index row = 0; row < rows; ++row) {
      dtheta += dtheta_rows.row(row).transpose();
    }
    return {dtheta, dx};
  }

  const Eigen::Index count = X.cols();
  const Eigen::Index basis_size = component_outputs_.rows();
  CMatrix loss_grads(basis_size, rows);
  for_each_row(rows, threads, [&](Eigen::Index row) {
    const RowCache& rc = row_cache_[static_cast<std::size_t>(row)];
    const CVector g_b =
        strategy_adjoint(rc.projected, RVector(upstream.row(row).transpose()));
    loss_grads.col(row) = space_adjoint(rc, g_b);
  });

  RMatrix dx(rows, count);
  for_each_row(rows, threads, [&](Eigen::Index row) {
    const RowCache& rc = row_cache_[static_cast<std::size_t>(row)];
    RVector g_enc(count);
    for (Eigen::Index s = 0; s < count; ++s) {
      g_enc(s) = pair_dot(CVector(component_outputs_.col(s)),
                          CVector(loss_grads.col(row)));
    }
    const double along = g_enc.dot(rc.encoded);
    dx.row(row) =
        ((g_enc - rc.encoded * along) / rc.feature_norm).transpose();
  });

  if (tcount > 0) {
    const circuit::UnitaryWithDerivatives all =
        circuit::compile_all_derivatives(spec_.circuit, theta_, RVector());
    CMatrix g_u = CMatrix::Zero(modes(), modes());
    for (Eigen::Index s = 0; s < count; ++s) {
      CVector combined = CVector::Zero(basis_size);
      for (Eigen::Index row = 0; row < rows; ++row) {
        combined += row_cache_[static_cast<std::size_t>(row)].encoded(s) *
                    loss_grads.col(row);
      }
      g_u += slos::backward(graph_, all.value,
                            sector_states_[static_cast<std::size_t>(s)],
                            component_cache_[static_cast<std::size_t>(s)].intermediates,
                            combined);
    }
    for (int r = 0; r < tcount; ++r) {
      dtheta(r) = pair_dot(g_u, all.dtheta[static_cast<std::size_t>(r)]);
    }
  }
  return {dtheta, dx};
}

}  // namespace bosonflow::layer
