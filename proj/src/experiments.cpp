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

#include "bosonflow/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "bosonflow/circuit.hpp"
#include "bosonflow/errors.hpp"
#include "bosonflow/fock.hpp"
#include "bosonflow/layer.hpp"
#include "bosonflow/measurement.hpp"
#include "bosonflow/oracle.hpp"
#include "bosonflow/slos.hpp"
#include "bosonflow/train.hpp"

namespace bosonflow::experiments {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr int kFourierGrid = 64;

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  a ^= b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
  return a;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

/// n photons spread round-robin over the modes, e.g. 4 photons on 3 modes
/// -> [2,1,1].
FockState spread_state(int modes, int photons) {
  std::vector<int> occ(static_cast<std::size_t>(modes), 0);
  for (int i = 0; i < photons; ++i) occ[static_cast<std::size_t>(i % modes)] += 1;
  return FockState(occ);
}

/// Trainable mesh, phase encoding of the scalar feature on mode 0,
/// trainable mesh. With n photons the outputs are trigonometric polynomials
/// of degree at most n in the feature.
circuit::ParamCircuit sandwich_circuit(std::uint64_t seed) {
  circuit::ParamCircuit c(3);
  c.append(circuit::universal_mesh(3, "a", mix(seed, 1)));
  c.add_phase_shifter(0, circuit::InputFeature{"x", 0, 1.0});
  c.append(circuit::universal_mesh(3, "b", mix(seed, 2)));
  return c;
}

double class_mass(const RVector& probs, const std::vector<int>& indices) {
  double mass = 0.0;
  for (int idx : indices) mass += probs(idx);
  return mass;
}

}  // namespace

VerifyReport verify_slos_vs_oracle(int max_m, int max_n, int trials_per_case,
                                   std::uint64_t seed, double perturb) {
  VerifyReport report;
  slos::ForwardOptions options;
  options.check_unitary = perturb == 0.0;
  for (int m = 1; m <= max_m; ++m) {
    for (int n = 1; n <= max_n; ++n) {
      report.cases += 1;
      const slos::TransitionGraph graph = slos::build_graph(m, spread_state(m, n));
      std::mt19937_64 rng(mix(seed, mix(static_cast<std::uint64_t>(m),
                                        static_cast<std::uint64_t>(n))));
      std::uniform_int_distribution<int> mode_dist(0, m - 1);
      for (int trial = 0; trial < trials_per_case; ++trial) {
        std::vector<int> occ(static_cast<std::size_t>(m), 0);
        for (int i = 0; i < n; ++i) occ[static_cast<std::size_t>(mode_dist(rng))] += 1;
        const FockState input(occ);
        const CMatrix u = oracle::haar_unitary(m, rng());
        CMatrix engine_u = u;
        engine_u(0, 0) += perturb;
        const CVector got =
            slos::forward(graph, engine_u, input, options).output.values;
        const CVector want = oracle::oracle_state(u, input).values;
        const double dev = (got - want).cwiseAbs().maxCoeff();
        report.max_deviation = std::max(report.max_deviation, dev);
        report.trials += 1;
      }
    }
  }
  report.passed = report.max_deviation <= report.tolerance;
  return report;
}

double FourierTarget::eval(double x) const {
  double y = constant;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    const double w = static_cast<double>(k + 1) * x;
    y += cos_coeffs[k] * std::cos(w) + sin_coeffs[k] * std::sin(w);
  }
  return y;
}

FourierTarget random_fourier_target(int degree, std::uint64_t seed) {
  if (degree < 0) throw InvalidSpec("fourier target degree must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  FourierTarget t;
  t.constant = dist(rng);
  for (int k = 0; k < degree; ++k) {
    t.cos_coeffs.push_back(dist(rng));
    t.sin_coeffs.push_back(dist(rng));
  }
  return t;
}

FourierFitResult fit_fourier(int photons, const FourierTarget& target, int steps,
                             double lr, std::uint64_t seed, int threads) {
  if (photons < 1 || photons > 6) {
    throw InvalidSpec("fit_fourier supports 1 to 6 photons");
  }
  if (steps < 0) throw InvalidSpec("fit_fourier needs a nonnegative step count");

  layer::LayerSpec spec{sandwich_circuit(seed), spread_state(3, photons)};
  layer::PhotonicLayer model(spec);
  const int dim = model.output_dim();
  const int tcount = static_cast<int>(model.theta().size());

  FourierFitResult result;
  result.grid = RVector(kFourierGrid);
  result.target = RVector(kFourierGrid);
  RMatrix x(kFourierGrid, 1);
  for (int g = 0; g < kFourierGrid; ++g) {
    result.grid(g) = kTwoPi * static_cast<double>(g) / kFourierGrid;
    result.target(g) = target.eval(result.grid(g));
    x(g, 0) = result.grid(g);
  }

  std::mt19937_64 rng(mix(seed, 3));
  std::uniform_real_distribution<double> wdist(-0.1, 0.1);
  RVector readout(dim);
  for (int i = 0; i < dim; ++i) readout(i) = wdist(rng);
  double bias = result.target.mean();

  train::AdamState adam = train::AdamState::init(tcount + dim + 1);
  train::AdamConfig config;
  config.lr = lr;

  for (int step = 0; step < steps; ++step) {
    // Step-decay schedule: halving every 500 steps lets the run settle from
    // the coarse early rate to machine-precision fits.
    if (step > 0 && step % 500 == 0) config.lr *= 0.5;
    const RMatrix probs = model.forward(x, true, threads);
    const RVector pred = probs * readout + RVector::Constant(kFourierGrid, bias);
    auto [loss, dpred] = train::mse_loss(pred, result.target);
    result.losses.push_back(loss);

    const RMatrix upstream = dpred * readout.transpose();
    auto [dtheta, dx] = model.backward(x, upstream, threads);
    RVector packed_grad(tcount + dim + 1);
    packed_grad.head(tcount) = dtheta;
    packed_grad.segment(tcount, dim) = probs.transpose() * dpred;
    packed_grad(tcount + dim) = dpred.sum();

    RVector packed(tcount + dim + 1);
    packed.head(tcount) = model.theta();
    packed.segment(tcount, dim) = readout;
    packed(tcount + dim) = bias;
    train::adam_step(packed, packed_grad, adam, config);
    model.theta() = packed.head(tcount);
    readout = packed.segment(tcount, dim);
    bias = packed(tcount + dim);
  }

  const RMatrix probs = model.forward(x, false, threads);
  result.fit = probs * readout + RVector::Constant(kFourierGrid, bias);
  result.mse = train::mse_loss(result.fit, result.target).first;
  return result;
}

double least_squares_fourier_mse(const RVector& grid, const RVector& target,
                                 int degree) {
  if (grid.size() != target.size() || grid.size() == 0) {
    throw LengthMismatch("least_squares_fourier_mse: grid and target must match");
  }
  const Eigen::Index rows = grid.size();
  RMatrix design(rows, 2 * degree + 1);
  design.col(0).setOnes();
  for (int k = 1; k <= degree; ++k) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      design(i, 2 * k - 1) = std::cos(k * grid(i));
      design(i, 2 * k) = std::sin(k * grid(i));
    }
  }
  const RVector coeffs = design.colPivHouseholderQr().solve(target);
  const RVector residual = design * coeffs - target;
  return residual.squaredNorm() / static_cast<double>(rows);
}

MoonsDataset make_moons(int samples, double noise, std::uint64_t seed) {
  if (samples < 2) throw InvalidSpec("make_moons needs at least 2 samples");
  if (noise < 0.0) throw InvalidSpec("make_moons noise must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tdist(0.0, kPi);
  std::normal_distribution<double> ndist(0.0, 1.0);

  MoonsDataset data;
  data.features = RMatrix(samples, 2);
  data.labels.resize(static_cast<std::size_t>(samples));
  const int class0 = (samples + 1) / 2;
  for (int i = 0; i < samples; ++i) {
    const int label = i < class0 ? 0 : 1;
    const double t = tdist(rng);
    double px = label == 0 ? std::cos(t) : 1.0 - std::cos(t);
    double py = label == 0 ? std::sin(t) : 0.5 - std::sin(t);
    if (noise > 0.0) {
      px += noise * ndist(rng);
      py += noise * ndist(rng);
    }
    data.features(i, 0) = px;
    data.features(i, 1) = py;
    data.labels[static_cast<std::size_t>(i)] = label;
  }

  std::vector<int> order(static_cast<std::size_t>(samples));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  RMatrix shuffled(samples, 2);
  std::vector<int> labels(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    shuffled.row(i) = data.features.row(order[static_cast<std::size_t>(i)]);
    labels[static_cast<std::size_t>(i)] =
        data.labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  }
  data.features = std::move(shuffled);
  data.labels = std::move(labels);

  data.encoded = RMatrix(samples, 2);
  for (int d = 0; d < 2; ++d) {
    data.lo[d] = data.features.col(d).minCoeff();
    data.hi[d] = data.features.col(d).maxCoeff();
    const double span = data.hi[d] - data.lo[d];
    for (int i = 0; i < samples; ++i) {
      data.encoded(i, d) =
          span > 0.0 ? (data.features(i, d) - data.lo[d]) / span * kPi : 0.0;
    }
  }
  return data;
}

MoonsResult classify_moons(int samples, double noise, int epochs, double lr,
                           std::uint64_t seed, int threads, int grid_size) {
  if (epochs < 0) throw InvalidSpec("classify_moons needs a nonnegative epoch count");
  if (grid_size < 2) throw InvalidSpec("classify_moons grid needs at least 2 points");

  MoonsResult result;
  result.data = make_moons(samples, noise, mix(seed, 1001));
  const int total = samples;
  result.train_size = (total * 3) / 4;
  result.test_size = total - result.train_size;
  if (result.train_size < 1 || result.test_size < 1) {
    throw InvalidSpec("classify_moons needs enough samples for a 75/25 split");
  }

  // Two encoding passes (data re-uploading) between three trainable meshes;
  // a single pass leaves the boundary too rigid for the interleaved moons.
  circuit::ParamCircuit c(3);
  c.append(circuit::universal_mesh(3, "a", mix(seed, 1)));
  c.add_angle_encoding({0, 1});
  c.append(circuit::universal_mesh(3, "b", mix(seed, 2)));
  c.add_phase_shifter(0, circuit::InputFeature{"xr0", 0, 1.0});
  c.add_phase_shifter(1, circuit::InputFeature{"xr1", 1, 1.0});
  c.append(circuit::universal_mesh(3, "c", mix(seed, 3)));
  layer::LayerSpec spec{c, FockState({1, 1, 1})};
  layer::PhotonicLayer model(spec);

  const auto states = model.graph().output_basis().enumerate();
  const auto keys = measurement::build_regrouping(states, spec.strategy, spec.detector).keys;
  // Classes read out the parity of the photon count in mode 0: an even
  // count is class 0, odd is class 1. Unlike the generic leading-mode
  // default this splits the 3-photon mass into halves either class can
  // dominate, which the mass-argmax decision rule needs.
  train::ClassGrouping grouping;
  grouping.class_indices.assign(2, {});
  for (std::size_t i = 0; i < keys.size(); ++i) {
    grouping.class_indices[static_cast<std::size_t>(keys[i][0] % 2)].push_back(
        static_cast<int>(i));
  }

  const RMatrix x_train = result.data.encoded.topRows(result.train_size);
  const RMatrix x_test = result.data.encoded.bottomRows(result.test_size);

  train::AdamState adam = train::AdamState::init(model.theta().size());
  train::AdamConfig config;
  config.lr = lr;
  const double inv_train = 1.0 / static_cast<double>(result.train_size);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    const RMatrix probs = model.forward(x_train, true, threads);
    RMatrix upstream(result.train_size, model.output_dim());
    double loss = 0.0;
    for (int r = 0; r < result.train_size; ++r) {
      auto [l, g] = train::cross_entropy_from_probs(
          RVector(probs.row(r).transpose()), grouping,
          result.data.labels[static_cast<std::size_t>(r)]);
      loss += l;
      upstream.row(r) = g.transpose() * inv_train;
    }
    result.losses.push_back(loss * inv_train);
    auto [dtheta, dx] = model.backward(x_train, upstream, threads);
    train::adam_step(model.theta(), dtheta, adam, config);
  }

  const auto accuracy = [&](const RMatrix& x, int offset, int count) {
    const RMatrix probs = model.forward(x, false, threads);
    int hits = 0;
    for (int r = 0; r < count; ++r) {
      const RVector row = probs.row(r).transpose();
      const int pred = class_mass(row, grouping.class_indices[1]) >
                               class_mass(row, grouping.class_indices[0])
                           ? 1
                           : 0;
      hits += pred == result.data.labels[static_cast<std::size_t>(offset + r)] ? 1 : 0;
    }
    return static_cast<double>(hits) / count;
  };
  result.train_accuracy = accuracy(x_train, 0, result.train_size);
  result.test_accuracy = accuracy(x_test, result.train_size, result.test_size);

  result.grid_size = grid_size;
  RMatrix grid_points(grid_size * grid_size, 2);
  for (int i = 0; i < grid_size; ++i) {
    const double frac_y = static_cast<double>(i) / (grid_size - 1);
    for (int j = 0; j < grid_size; ++j) {
      const double frac_x = static_cast<double>(j) / (grid_size - 1);
      const int row = i * grid_size + j;
      grid_points(row, 0) = frac_x * kPi;
      grid_points(row, 1) = frac_y * kPi;
    }
  }
  const RMatrix grid_probs = model.forward(grid_points, false, threads);
  result.grid = RMatrix(grid_size, grid_size);
  for (int i = 0; i < grid_size; ++i) {
    for (int j = 0; j < grid_size; ++j) {
      const RVector row = grid_probs.row(i * grid_size + j).transpose();
      const double m0 = class_mass(row, grouping.class_indices[0]);
      const double m1 = class_mass(row, grouping.class_indices[1]);
      result.grid(i, j) = m1 / (m0 + m1);
    }
  }
  return result;
}

BenchReport bench(int modes, int photons, int batch, int repeats,
                  std::uint64_t seed) {
  if (batch < 1 || repeats < 1) {
    throw InvalidSpec("bench needs batch >= 1 and repeats >= 1");
  }
  BenchReport report;
  report.modes = modes;
  report.photons = photons;
  const int total = batch * repeats;
  report.forwards = total;

  std::vector<CMatrix> unitaries;
  unitaries.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    unitaries.push_back(oracle::haar_unitary(modes, mix(seed, static_cast<std::uint64_t>(i))));
  }

  const std::uint64_t builds_before = slos::graph_build_count();
  const auto build_start = std::chrono::steady_clock::now();
  const slos::TransitionGraph graph = slos::build_graph(modes, spread_state(modes, photons));
  report.build_seconds = seconds_since(build_start);
  report.basis_size = graph.output_basis().size();
  report.edges = graph.total_edges();

  slos::Workspace ws;
  std::vector<double> times(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    const auto start = std::chrono::steady_clock::now();
    slos::forward(graph, unitaries[static_cast<std::size_t>(i)], ws);
    times[static_cast<std::size_t>(i)] = seconds_since(start);
  }
  report.build_count = slos::graph_build_count() - builds_before;

  report.first_forward_seconds = times[0];
  double sum = 0.0;
  double min = std::numeric_limits<double>::infinity();
  const int rest = total - 1;
  for (int i = 1; i < total; ++i) {
    sum += times[static_cast<std::size_t>(i)];
    min = std::min(min, times[static_cast<std::size_t>(i)]);
  }
  if (rest > 0) {
    report.mean_forward_seconds = sum / rest;
    report.min_forward_seconds = min;
    double var = 0.0;
    for (int i = 1; i < total; ++i) {
      const double d = times[static_cast<std::size_t>(i)] - report.mean_forward_seconds;
      var += d * d;
    }
    report.forward_seconds_variance = var / rest;
  } else {
    report.mean_forward_seconds = times[0];
    report.min_forward_seconds = times[0];
  }
  return report;
}

}  // namespace bosonflow::experiments
