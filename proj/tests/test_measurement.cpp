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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <doctest.h>

#include "bosonflow/errors.hpp"
#include "bosonflow/fock.hpp"
#include "bosonflow/measurement.hpp"
#include "bosonflow/types.hpp"

namespace {

using namespace bosonflow;
using measurement::ComputationSpace;
using measurement::Detector;
using measurement::KeyedDistribution;
using measurement::MeasurementStrategy;
using measurement::StrategyKind;

RVector random_distribution(const FockBasis& basis, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  RVector p(basis.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    p(i) = uni(gen);
    total += p(i);
  }
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) /= total;
  return p;
}

// Regroups by linear key search and a final descending-lex sort, touching
// states in rank order so per-key sums are added in the same order as the
// library path. Exact equality between the two is then meaningful.
KeyedDistribution regroup_by_search(
    const std::vector<FockState>& states, const RVector& p,
    const std::function<std::vector<int>(const FockState&)>& key_of) {
  std::vector<std::vector<int>> keys;
  std::vector<double> sums;
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<int> key = key_of(states[i]);
    std::size_t slot = keys.size();
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (keys[k] == key) {
        slot = k;
        break;
      }
    }
    if (slot == keys.size()) {
      keys.push_back(key);
      sums.push_back(0.0);
    }
    sums[slot] += p(static_cast<Eigen::Index>(i));
  }
  std::vector<std::size_t> order(keys.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return keys[a] > keys[b];
  });
  KeyedDistribution out;
  out.values = RVector(static_cast<Eigen::Index>(keys.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.keys.push_back(keys[order[i]]);
    out.values(static_cast<Eigen::Index>(i)) = sums[order[i]];
  }
  return out;
}

std::vector<int> clicks_of(const FockState& t) {
  std::vector<int> key(static_cast<std::size_t>(t.modes()));
  for (int j = 0; j < t.modes(); ++j) key[static_cast<std::size_t>(j)] = t.occupation(j) > 0 ? 1 : 0;
  return key;
}

}  // namespace

TEST_CASE("probabilities are squared moduli") {
  FockBasis basis(2, 2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CVector a(3);
  a << Complex(0.0, inv_sqrt2), Complex(0.0, 0.0), Complex(0.0, inv_sqrt2);
  RVector p = measurement::probabilities(AmplitudeVector(basis, a));
  CHECK(p(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p(1) == 0.0);
  CHECK(p(2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("photon-number detector keeps canonical keys and values") {
  FockBasis basis(3, 2);
  RVector p = random_distribution(basis, 11);
  KeyedDistribution d = measurement::apply_detector(basis, p, Detector::PNR);
  std::vector<FockState> states = basis.enumerate();
  REQUIRE(d.keys.size() == states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK(d.keys[i] == states[i].to_vector());
    CHECK(d.values(static_cast<Eigen::Index>(i)) == p(static_cast<Eigen::Index>(i)));
  }
}

TEST_CASE("threshold detector equals photon-number detector for one photon") {
  FockBasis basis(4, 1);
  RVector p = random_distribution(basis, 12);
  KeyedDistribution pnr = measurement::apply_detector(basis, p, Detector::PNR);
  KeyedDistribution thr = measurement::apply_detector(basis, p, Detector::Threshold);
  REQUIRE(pnr.keys.size() == thr.keys.size());
  for (std::size_t i = 0; i < pnr.keys.size(); ++i) {
    CHECK(pnr.keys[i] == thr.keys[i]);
    CHECK(pnr.values(static_cast<Eigen::Index>(i)) == thr.values(static_cast<Eigen::Index>(i)));
  }
}

TEST_CASE("threshold detector on two modes and two photons") {
  FockBasis basis(2, 2);
  RVector p(3);
  p << 0.5, 0.0, 0.5;
  KeyedDistribution d = measurement::apply_detector(basis, p, Detector::Threshold);
  REQUIRE(d.keys.size() == 3);
  CHECK(d.keys[0] == std::vector<int>{1, 1});
  CHECK(d.keys[1] == std::vector<int>{1, 0});
  CHECK(d.keys[2] == std::vector<int>{0, 1});
  CHECK(d.values(0) == 0.0);
  CHECK(d.values(1) == 0.5);
  CHECK(d.values(2) == 0.5);
}

TEST_CASE("threshold key count matches the reachable-pattern formula") {
  // Patterns with c clicked modes, 1 <= c <= min(m, n): sum of C(m, c).
  auto choose = [](int a, int b) {
    double v = 1.0;
    for (int i = 0; i < b; ++i) v = v * (a - i) / (i + 1);
    return static_cast<std::size_t>(std::llround(v));
  };
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 4; ++n) {
      FockBasis basis(m, n);
      RVector p = random_distribution(basis, static_cast<std::uint64_t>(100 * m + n));
      KeyedDistribution d = measurement::apply_detector(basis, p, Detector::Threshold);
      std::size_t expected = 0;
      for (int c = 1; c <= std::min(m, n); ++c) expected += choose(m, c);
      CHECK(d.keys.size() == expected);
    }
  }
}

TEST_CASE("threshold detector equals exhaustive regrouping exactly") {
  for (int m = 1; m <= 4; ++m) {
    for (int n = 1; n <= 3; ++n) {
      FockBasis basis(m, n);
      std::vector<FockState> states = basis.enumerate();
      for (int trial = 0; trial < 20; ++trial) {
        RVector p = random_distribution(
            basis, static_cast<std::uint64_t>(1000 * m + 100 * n + trial));
        KeyedDistribution got = measurement::apply_detector(basis, p, Detector::Threshold);
        KeyedDistribution want = regroup_by_search(states, p, clicks_of);
        REQUIRE(got.keys.size() == want.keys.size());
        for (std::size_t i = 0; i < got.keys.size(); ++i) {
          CHECK(got.keys[i] == want.keys[i]);
          CHECK(got.values(static_cast<Eigen::Index>(i)) ==
                want.values(static_cast<Eigen::Index>(i)));
        }
      }
    }
  }
}

TEST_CASE("per-mode expectations of a point distribution are its occupations") {
  FockBasis basis(3, 3);
  RVector p = RVector::Zero(static_cast<Eigen::Index>(basis.size()));
  FockState t({2, 1, 0});
  p(static_cast<Eigen::Index>(basis.rank(t))) = 1.0;
  RVector e = measurement::per_mode_expectation(basis, p);
  CHECK(e(0) == 2.0);
  CHECK(e(1) == 1.0);
  CHECK(e(2) == 0.0);
}

TEST_CASE("per-mode expectations sum to the photon count") {
  for (int m = 2; m <= 4; ++m) {
    for (int n = 1; n <= 3; ++n) {
      FockBasis basis(m, n);
      RVector p = random_distribution(basis, static_cast<std::uint64_t>(7 * m + n));
      RVector e = measurement::per_mode_expectation(basis, p);
      CHECK(e.sum() == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("marginal over the first mode of the balanced-splitter output") {
  FockBasis basis(2, 2);
  RVector p(3);
  p << 0.5, 0.0, 0.5;
  KeyedDistribution d = measurement::marginal(basis, p, {0});
  REQUIRE(d.keys.size() == 3);
  CHECK(d.keys[0] == std::vector<int>{2});
  CHECK(d.keys[1] == std::vector<int>{1});
  CHECK(d.keys[2] == std::vector<int>{0});
  CHECK(d.values(0) == 0.5);
  CHECK(d.values(1) == 0.0);
  CHECK(d.values(2) == 0.5);
}

TEST_CASE("marginal equals exhaustive regrouping exactly") {
  FockBasis basis(4, 3);
  std::vector<FockState> states = basis.enumerate();
  std::vector<int> measured{0, 2};
  auto key_of = [&](const FockState& t) {
    return std::vector<int>{t.occupation(0), t.occupation(2)};
  };
  for (int trial = 0; trial < 20; ++trial) {
    RVector p = random_distribution(basis, static_cast<std::uint64_t>(40 + trial));
    KeyedDistribution got = measurement::marginal(basis, p, measured);
    KeyedDistribution want = regroup_by_search(states, p, key_of);
    REQUIRE(got.keys.size() == want.keys.size());
    for (std::size_t i = 0; i < got.keys.size(); ++i) {
      CHECK(got.keys[i] == want.keys[i]);
      CHECK(got.values(static_cast<Eigen::Index>(i)) ==
            want.values(static_cast<Eigen::Index>(i)));
    }
  }
}

TEST_CASE("partial strategy with a threshold detector regroups exactly") {
  FockBasis basis(4, 3);
  std::vector<FockState> states = basis.enumerate();
  MeasurementStrategy s = MeasurementStrategy::partial({1, 3});
  auto key_of = [](const FockState& t) {
    return std::vector<int>{t.occupation(1) > 0 ? 1 : 0, t.occupation(3) > 0 ? 1 : 0};
  };
  measurement::Regrouping r = measurement::build_regrouping(states, s, Detector::Threshold);
  for (int trial = 0; trial < 20; ++trial) {
    RVector p = random_distribution(basis, static_cast<std::uint64_t>(90 + trial));
    RVector acc = RVector::Zero(static_cast<Eigen::Index>(r.keys.size()));
    for (std::size_t i = 0; i < states.size(); ++i) {
      acc(static_cast<Eigen::Index>(r.state_to_key[i])) += p(static_cast<Eigen::Index>(i));
    }
    KeyedDistribution want = regroup_by_search(states, p, key_of);
    REQUIRE(r.keys.size() == want.keys.size());
    for (std::size_t i = 0; i < r.keys.size(); ++i) {
      CHECK(r.keys[i] == want.keys[i]);
      CHECK(acc(static_cast<Eigen::Index>(i)) == want.values(static_cast<Eigen::Index>(i)));
    }
  }
}

TEST_CASE("unbunched projection keeps one-photon states unchanged") {
  FockBasis basis(3, 1);
  CVector a(3);
  a << Complex(0.6, 0.0), Complex(0.0, 0.8), Complex(0.0, 0.0);
  measurement::UnbunchedProjection proj = measurement::project_unbunched(AmplitudeVector(basis, a));
  REQUIRE(proj.kept_ranks.size() == 3);
  CHECK(proj.kept_ranks[0] == 0);
  CHECK(proj.kept_ranks[1] == 1);
  CHECK(proj.kept_ranks[2] == 2);
  CHECK(proj.success_probability == doctest::Approx(1.0).epsilon(1e-15));
  for (int i = 0; i < 3; ++i) CHECK(proj.values(i) == a(i));
}

TEST_CASE("unbunched projection renormalizes a partly bunched state") {
  FockBasis basis(3, 2);
  CVector a = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
  a(static_cast<Eigen::Index>(basis.rank(FockState({2, 0, 0})))) = Complex(0.6, 0.0);
  a(static_cast<Eigen::Index>(basis.rank(FockState({1, 1, 0})))) = Complex(0.0, 0.8);
  measurement::UnbunchedProjection proj = measurement::project_unbunched(AmplitudeVector(basis, a));
  REQUIRE(proj.kept_ranks.size() == 3);
  CHECK(basis.unrank(proj.kept_ranks[0]) == FockState({1, 1, 0}));
  CHECK(basis.unrank(proj.kept_ranks[1]) == FockState({1, 0, 1}));
  CHECK(basis.unrank(proj.kept_ranks[2]) == FockState({0, 1, 1}));
  CHECK(proj.success_probability == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(proj.values(0).real() == doctest::Approx(0.0));
  CHECK(proj.values(0).imag() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(proj.values(1) == Complex(0.0, 0.0));
  CHECK(proj.values(2) == Complex(0.0, 0.0));
}

TEST_CASE("unbunched projection of a fully bunched state fails") {
  FockBasis basis(2, 2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CVector a(3);
  a << Complex(0.0, inv_sqrt2), Complex(0.0, 0.0), Complex(0.0, inv_sqrt2);
  CHECK_THROWS_AS(measurement::project_unbunched(AmplitudeVector(basis, a)), NullProjection);
}

TEST_CASE("unbunched projection rejects more photons than modes") {
  FockBasis basis(2, 3);
  CVector a = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
  a(0) = Complex(1.0, 0.0);
  CHECK_THROWS_AS(measurement::project_unbunched(AmplitudeVector(basis, a)), DimensionMismatch);
}

TEST_CASE("outcome keys by strategy and detector") {
  FockState t({2, 0, 1});
  MeasurementStrategy prob = MeasurementStrategy::probabilities();
  CHECK(measurement::outcome_key(t, prob, Detector::PNR) == std::vector<int>{2, 0, 1});
  CHECK(measurement::outcome_key(t, prob, Detector::Threshold) == std::vector<int>{1, 0, 1});
  MeasurementStrategy part = MeasurementStrategy::partial({0, 2});
  CHECK(measurement::outcome_key(t, part, Detector::PNR) == std::vector<int>{2, 1});
  CHECK(measurement::outcome_key(t, part, Detector::Threshold) == std::vector<int>{1, 1});
}

TEST_CASE("outcome key rejects non-distribution strategies") {
  FockState t({1, 0});
  CHECK_THROWS_AS(
      measurement::outcome_key(t, MeasurementStrategy::per_mode_expectation(), Detector::PNR),
      InvalidSpec);
  CHECK_THROWS_AS(
      measurement::outcome_key(t, MeasurementStrategy::amplitudes(), Detector::PNR),
      InvalidSpec);
}

TEST_CASE("partial strategy validates its mode list") {
  CHECK_THROWS_AS(MeasurementStrategy::partial({}), InvalidModes);
  CHECK_THROWS_AS(MeasurementStrategy::partial({-1, 0}), InvalidModes);
  CHECK_THROWS_AS(MeasurementStrategy::partial({1, 1}), InvalidModes);
  CHECK_THROWS_AS(MeasurementStrategy::partial({2, 1}), InvalidModes);
}

TEST_CASE("partial mode list must fit strictly inside the state modes") {
  FockBasis basis(3, 1);
  std::vector<FockState> states = basis.enumerate();
  MeasurementStrategy all_modes = MeasurementStrategy::partial({0, 1, 2});
  CHECK_THROWS_AS(
      measurement::build_regrouping(states, all_modes, Detector::PNR), InvalidModes);
  MeasurementStrategy out_of_range = MeasurementStrategy::partial({0, 3});
  CHECK_THROWS_AS(
      measurement::outcome_key(states[0], out_of_range, Detector::PNR), InvalidModes);
  CHECK_THROWS_AS(measurement::marginal(basis, RVector::Ones(3) / 3.0, {0, 1, 2}),
                  InvalidModes);
}

TEST_CASE("distributions serialize to compact json") {
  KeyedDistribution d;
  d.keys = {{2, 0}, {1, 1}, {0, 2}};
  d.values = RVector(3);
  d.values << 0.5, 0.0, 0.25;
  CHECK(measurement::to_json(d) == "{\"[2,0]\":0.5,\"[1,1]\":0,\"[0,2]\":0.25}");
}
