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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "bosonflow/errors.hpp"
#include "bosonflow/oracle.hpp"

using bosonflow::CMatrix;
using bosonflow::Complex;
using bosonflow::FockState;

namespace {

// Textbook expansion-by-first-row permanent, quadratic-time-per-minor slow;
// only job is to disagree with the Gray-code path if either is wrong.
Complex naive_permanent(const CMatrix& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return Complex(1.0, 0.0);
  if (n == 1) return a(0, 0);
  Complex total(0.0, 0.0);
  for (int j = 0; j < n; ++j) {
    CMatrix minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    total += a(0, j) * naive_permanent(minor);
  }
  return total;
}

}  // namespace

TEST_CASE("permanent closed forms") {
  CMatrix one(1, 1);
  one << Complex(2.0, -1.0);
  CHECK(bosonflow::oracle::permanent(one) == Complex(2.0, -1.0));

  CMatrix two(2, 2);
  two << Complex(1.0, 0.0), Complex(2.0, 0.0), Complex(3.0, 0.0), Complex(4.0, 0.0);
  CHECK(std::abs(bosonflow::oracle::permanent(two) - Complex(10.0, 0.0)) < 1e-14);

  CHECK(std::abs(bosonflow::oracle::permanent(CMatrix::Identity(5, 5)) -
                 Complex(1.0, 0.0)) < 1e-13);

  CMatrix ones = CMatrix::Ones(4, 4);
  CHECK(std::abs(bosonflow::oracle::permanent(ones) - Complex(24.0, 0.0)) < 1e-12);
}

TEST_CASE("permanent agrees with row expansion on random complex matrices") {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next = [&state] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  };
  for (int n = 2; n <= 6; ++n) {
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = Complex(next(), next());
    }
    const Complex fast = bosonflow::oracle::permanent(a);
    const Complex slow = naive_permanent(a);
    CHECK(std::abs(fast - slow) < 1e-12 * std::max(1.0, std::abs(slow)));
  }
}

TEST_CASE("permanent input validation") {
  CHECK_THROWS_AS(bosonflow::oracle::permanent(CMatrix::Zero(2, 3)),
                  bosonflow::NonSquare);
  CHECK_THROWS_AS(bosonflow::oracle::permanent(CMatrix::Identity(21, 21)),
                  bosonflow::TooLarge);
}

TEST_CASE("oracle amplitudes reproduce the two-photon interference closed form") {
  CMatrix u(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  u << Complex(r, 0.0), Complex(0.0, r), Complex(0.0, r), Complex(r, 0.0);
  const FockState in(std::vector<int>{1, 1});
  const Complex a20 =
      bosonflow::oracle::oracle_amplitude(u, in, FockState(std::vector<int>{2, 0}));
  const Complex a11 =
      bosonflow::oracle::oracle_amplitude(u, in, FockState(std::vector<int>{1, 1}));
  const Complex a02 =
      bosonflow::oracle::oracle_amplitude(u, in, FockState(std::vector<int>{0, 2}));
  CHECK(std::abs(a20 - Complex(0.0, r)) < 1e-14);
  CHECK(std::abs(a02 - Complex(0.0, r)) < 1e-14);
  CHECK(std::abs(a11) < 1e-14);
}

TEST_CASE("oracle amplitude on the identity is a Kronecker delta") {
  const CMatrix u = CMatrix::Identity(3, 3);
  const FockState in(std::vector<int>{1, 0, 2});
  CHECK(std::abs(bosonflow::oracle::oracle_amplitude(u, in, in) - Complex(1.0, 0.0)) <
        1e-14);
  CHECK(std::abs(bosonflow::oracle::oracle_amplitude(
            u, in, FockState(std::vector<int>{2, 0, 1}))) < 1e-14);
}

TEST_CASE("oracle states of unitaries are normalized") {
  for (const std::uint64_t seed : {7ull, 8ull, 9ull}) {
    const CMatrix u = bosonflow::oracle::haar_unitary(4, seed);
    const auto state =
        bosonflow::oracle::oracle_state(u, FockState(std::vector<int>{2, 1, 0, 0}));
    CHECK(state.values.norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("oracle amplitude validates photon counts") {
  const CMatrix u = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(
      bosonflow::oracle::oracle_amplitude(u, FockState(std::vector<int>{1, 1}),
                                          FockState(std::vector<int>{1, 0})),
      bosonflow::PhotonCountMismatch);
}

TEST_CASE("haar_unitary is unitary and seed-deterministic") {
  for (const int m : {1, 2, 5, 9}) {
    const CMatrix u = bosonflow::oracle::haar_unitary(m, 123);
    CHECK(bosonflow::unitarity_defect(u) < 1e-12);
  }
  const CMatrix a = bosonflow::oracle::haar_unitary(4, 5);
  const CMatrix b = bosonflow::oracle::haar_unitary(4, 5);
  const CMatrix c = bosonflow::oracle::haar_unitary(4, 6);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - c).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("haar_unitary matches the first moment of the uniform measure") {
  // |u_00|^2 is Beta(1, m-1) under Haar, mean 1/m, var (m-1)/(m^2 (m+1)).
  const int m = 4;
  const int samples = 2000;
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CMatrix u = bosonflow::oracle::haar_unitary(m, 1000 + static_cast<std::uint64_t>(s));
    sum += std::norm(u(0, 0));
  }
  const double mean = sum / samples;
  const double sigma = std::sqrt((m - 1.0) / (static_cast<double>(m) * m * (m + 1.0)) / samples);
  CHECK(std::abs(mean - 1.0 / m) < 3.0 * sigma);
}
