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
#include <vector>

#include "bosonflow/types.hpp"

namespace bosonflow::experiments {

// Deterministic experiment drivers behind the CLI. Every function is a pure
// map from (arguments, seed) to a result struct; repeated calls with the
// same arguments produce identical results.

/// Cross-check of the evolution engine against the permanent-based oracle
/// over Haar-random unitaries and random input states.
struct VerifyReport {
  double max_deviation = 0.0;
  double tolerance = 1e-10;
  int cases = 0;
  int trials = 0;
  bool passed = false;
};

/// Runs `trials_per_case` trials for every (m, n) with 1 <= m <= max_m and
/// 1 <= n <= max_n. `perturb` is a fault-injection hook: it is added to the
/// U(0,0) seen by the engine only, so a nonzero value must break the
/// comparison and prove the check can fail.
VerifyReport verify_slos_vs_oracle(int max_m, int max_n, int trials_per_case,
                                   std::uint64_t seed, double perturb = 0.0);

/// Real Fourier series c + sum_k (a_k cos(kx) + b_k sin(kx)).
struct FourierTarget {
  double constant = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  int degree() const { return static_cast<int>(cos_coeffs.size()); }
  double eval(double x) const;
};

/// Coefficients drawn uniformly from [-0.5, 0.5].
FourierTarget random_fourier_target(int degree, std::uint64_t seed);

struct FourierFitResult {
  RVector grid;
  RVector target;
  RVector fit;
  std::vector<double> losses;
  double mse = 0.0;
};

/// Trains the 3-mode sandwich model (trainable mesh, phase encoding on mode
/// 0, trainable mesh) with `photons` photons plus a linear readout against
/// the target series on a 64-point grid over [0, 2pi), using Adam on the
/// mean squared error. 1 <= photons <= 6.
FourierFitResult fit_fourier(int photons, const FourierTarget& target, int steps,
                             double lr, std::uint64_t seed, int threads = 1);

/// Residual MSE of the best degree-`degree` Fourier series fitted to
/// (grid, target) by least squares. Lower-bounds what any band-limited
/// model of that degree can reach on the same grid.
double least_squares_fourier_mse(const RVector& grid, const RVector& target,
                                 int degree);

/// Two interleaving half-circles: class 0 at (cos t, sin t), class 1 at
/// (1 - cos t, 0.5 - sin t), t uniform on [0, pi], plus isotropic Gaussian
/// noise. `encoded` holds the features affinely mapped to [0, pi] per
/// dimension; `lo`/`hi` record the raw per-dimension ranges used.
struct MoonsDataset {
  RMatrix features;
  RMatrix encoded;
  std::vector<int> labels;
  double lo[2] = {0.0, 0.0};
  double hi[2] = {0.0, 0.0};
};

MoonsDataset make_moons(int samples, double noise, std::uint64_t seed);

struct MoonsResult {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  int train_size = 0;
  int test_size = 0;
  std::vector<double> losses;
  MoonsDataset data;
  /// Class-1 probability mass over a grid_size x grid_size raster of the
  /// raw feature bounding box, row i = x sweep at the i-th y value.
  RMatrix grid;
  int grid_size = 0;
};

/// Trains a 3-mode layer (trainable meshes around two passes of the
/// two-feature angle encoding; input [1,1,1]; full PNR distribution) on the
/// moons dataset with Adam on the class-mass cross entropy. Classes read
/// the parity of the mode-0 photon count: even is class 0, odd is class 1.
/// The dataset is shuffled once, then split 75/25 into train/test.
MoonsResult classify_moons(int samples, double noise, int epochs, double lr,
                           std::uint64_t seed, int threads = 1, int grid_size = 100);

struct BenchReport {
  int modes = 0;
  int photons = 0;
  std::uint64_t basis_size = 0;
  std::uint64_t edges = 0;
  double build_seconds = 0.0;
  /// build_graph invocations observed process-wide during this run; the
  /// forwards all reuse one graph, so this must be 1.
  std::uint64_t build_count = 0;
  int forwards = 0;
  double first_forward_seconds = 0.0;
  double mean_forward_seconds = 0.0;
  double min_forward_seconds = 0.0;
  double forward_seconds_variance = 0.0;
};

/// Builds the (m, n) graph once, then times `batch * repeats` forwards with
/// a fresh Haar unitary each. Mean/min/variance cover all forwards after
/// the first.
BenchReport bench(int modes, int photons, int batch, int repeats,
                  std::uint64_t seed);

}  // namespace bosonflow::experiments
