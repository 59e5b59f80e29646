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

#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "bosonflow/circuit.hpp"
#include "bosonflow/errors.hpp"
#include "bosonflow/kernel.hpp"
#include "bosonflow/oracle.hpp"

namespace bf = bosonflow;

namespace {

bf::circuit::ParamCircuit encoded_mesh(int modes, const std::vector<int>& feature_modes,
                                       std::uint64_t seed) {
  bf::circuit::ParamCircuit c(modes);
  c.add_angle_encoding(feature_modes);
  c.append(bf::circuit::universal_mesh(modes, "w", seed));
  return c;
}

bf::RMatrix random_features(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 3.141592653589793);
  bf::RMatrix x(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) x(i, j) = dist(rng);
  }
  return x;
}

// Reference fidelity through the permanent-based evolution.
double oracle_fidelity(const bf::circuit::ParamCircuit& c, const bf::FockState& input,
                       const bf::RVector& x1, const bf::RVector& x2) {
  bf::RVector theta(c.trainable_count());
  for (int i = 0; i < c.trainable_count(); ++i) theta(i) = c.trainable_inits()[i];
  const bf::CMatrix u1 = bf::circuit::compile_unitary(c, theta, x1);
  const bf::CMatrix u2 = bf::circuit::compile_unitary(c, theta, x2);
  const bf::AmplitudeVector a = bf::oracle::oracle_state(u1, input);
  const bf::AmplitudeVector b = bf::oracle::oracle_state(u2, input);
  return std::norm(a.values.dot(b.values));
}

}  // namespace

TEST_CASE("kernel spec validation") {
  SUBCASE("featureless circuit") {
    bf::kernel::KernelSpec spec{bf::circuit::universal_mesh(3, "w", 7),
                                bf::FockState({1, 1, 0})};
    CHECK_THROWS_AS(bf::kernel::FidelityKernel{spec}, bf::InvalidSpec);
  }
  SUBCASE("mode count mismatch") {
    bf::kernel::KernelSpec spec{encoded_mesh(3, {0, 1}, 7), bf::FockState({1, 1})};
    CHECK_THROWS_AS(bf::kernel::FidelityKernel{spec}, bf::InvalidSpec);
  }
}

TEST_CASE("fidelity of a point with itself is 1") {
  bf::kernel::FidelityKernel k({encoded_mesh(3, {0, 1, 2}, 11), bf::FockState({1, 1, 0})});
  for (std::uint64_t s = 0; s < 10; ++s) {
    const bf::RMatrix x = random_features(1, 3, 100 + s);
    const bf::RVector row = x.row(0).transpose();
    CHECK(std::abs(k.fidelity(row, row) - 1.0) < 1e-10);
  }
}

TEST_CASE("feature states stay normalized") {
  bf::kernel::FidelityKernel k({encoded_mesh(4, {0, 2}, 12), bf::FockState({1, 0, 1, 0})});
  const bf::RMatrix x = random_features(100, 2, 13);
  for (int i = 0; i < x.rows(); ++i) {
    const bf::AmplitudeVector phi = k.feature_state(x.row(i).transpose());
    CHECK(std::abs(phi.values.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("fidelity matches the permanent-based reference") {
  const bf::FockState input({1, 1, 0});
  const auto c = encoded_mesh(3, {0, 1, 2}, 21);
  bf::kernel::FidelityKernel k({c, input});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const bf::RMatrix x = random_features(2, 3, 300 + s);
    const bf::RVector x1 = x.row(0).transpose();
    const bf::RVector x2 = x.row(1).transpose();
    const double got = k.fidelity(x1, x2);
    const double want = oracle_fidelity(c, input, x1, x2);
    CHECK(std::abs(got - want) < 1e-10);
    CHECK(got >= 0.0);
    CHECK(got <= 1.0 + 1e-12);
  }
}

TEST_CASE("fidelity is symmetric") {
  bf::kernel::FidelityKernel k({encoded_mesh(3, {0, 1}, 31), bf::FockState({2, 0, 0})});
  const bf::RMatrix x = random_features(2, 2, 32);
  const bf::RVector x1 = x.row(0).transpose();
  const bf::RVector x2 = x.row(1).transpose();
  CHECK(std::abs(k.fidelity(x1, x2) - k.fidelity(x2, x1)) < 1e-14);
}

TEST_CASE("single-row gram") {
  bf::kernel::FidelityKernel k({encoded_mesh(3, {0}, 41), bf::FockState({1, 0, 0})});
  const bf::RMatrix g = k.gram(random_features(1, 1, 42));
  REQUIRE(g.rows() == 1);
  REQUIRE(g.cols() == 1);
  CHECK(g(0, 0) == 1.0);
}

TEST_CASE("gram is exactly symmetric with unit diagonal") {
  bf::kernel::FidelityKernel k({encoded_mesh(3, {0, 1, 2}, 51), bf::FockState({1, 1, 0})});
  const bf::RMatrix x = random_features(9, 3, 52);
  const bf::RMatrix g = k.gram(x);
  CHECK((g - bf::RMatrix(g.transpose())).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < g.rows(); ++i) CHECK(g(i, i) == 1.0);
}

TEST_CASE("gram entries match pairwise fidelity calls") {
  bf::kernel::FidelityKernel k({encoded_mesh(3, {0, 2}, 61), bf::FockState({1, 0, 1})});
  const bf::RMatrix x = random_features(5, 2, 62);
  const bf::RMatrix g = k.gram(x);
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = i + 1; j < x.rows(); ++j) {
      CHECK(g(i, j) == k.fidelity(x.row(i).transpose(), x.row(j).transpose()));
    }
  }
}

TEST_CASE("duplicated rows give near-unit off-diagonal entries") {
  bf::kernel::FidelityKernel k({encoded_mesh(3, {0, 1}, 71), bf::FockState({1, 1, 0})});
  bf::RMatrix x = random_features(4, 2, 72);
  x.row(2) = x.row(0);
  const bf::RMatrix g = k.gram(x);
  CHECK(std::abs(g(0, 2) - 1.0) < 1e-10);
  CHECK(g(0, 1) == g(2, 1));
}

TEST_CASE("state caching does not change results") {
  const auto c = encoded_mesh(4, {0, 1, 2, 3}, 81);
  const bf::FockState input({1, 1, 0, 0});
  bf::kernel::FidelityKernel cached({c, input, true});
  bf::kernel::FidelityKernel uncached({c, input, false});
  const bf::RMatrix x = random_features(6, 4, 82);
  const bf::RMatrix g1 = cached.gram(x);
  const bf::RMatrix g2 = uncached.gram(x);
  CHECK((g1 - g2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gram is thread-count invariant") {
  bf::kernel::FidelityKernel k({encoded_mesh(3, {0, 1, 2}, 91), bf::FockState({1, 1, 1})});
  const bf::RMatrix x = random_features(7, 3, 92);
  const bf::RMatrix g1 = k.gram(x, 1);
  const bf::RMatrix g4 = k.gram(x, 4);
  CHECK((g1 - g4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gram is positive semidefinite") {
  bf::kernel::FidelityKernel k({encoded_mesh(3, {0, 1, 2}, 101), bf::FockState({1, 1, 0})});
  const bf::RMatrix x = random_features(12, 3, 102);
  const bf::RMatrix g = k.gram(x);
  Eigen::SelfAdjointEigenSolver<bf::RMatrix> eig(g);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
}

TEST_CASE("rectangular gram block") {
  bf::kernel::FidelityKernel k({encoded_mesh(3, {0, 1}, 111), bf::FockState({1, 0, 1})});
  const bf::RMatrix x1 = random_features(3, 2, 112);
  const bf::RMatrix x2 = random_features(5, 2, 113);
  const bf::RMatrix g = k.gram(x1, x2, 2);
  REQUIRE(g.rows() == 3);
  REQUIRE(g.cols() == 5);
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      CHECK(g(i, j) == k.fidelity(x1.row(i).transpose(), x2.row(j).transpose()));
    }
  }
}

TEST_CASE("kernel input validation") {
  bf::kernel::FidelityKernel k({encoded_mesh(3, {0, 1}, 121), bf::FockState({1, 1, 0})});
  CHECK_THROWS_AS(k.gram(bf::RMatrix(0, 2)), bf::DimensionMismatch);
  CHECK_THROWS_AS(k.gram(random_features(3, 1, 122), 2), bf::ArityMismatch);
  CHECK_THROWS_AS(k.gram(random_features(3, 2, 123), bf::RMatrix(0, 2)),
                  bf::DimensionMismatch);
  CHECK_THROWS_AS(
      k.fidelity(bf::RVector(bf::RVector::Zero(1)), bf::RVector(bf::RVector::Zero(2))),
      bf::ArityMismatch);
}
