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

#include "bosonflow/measurement.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "bosonflow/errors.hpp"

namespace bosonflow::measurement {

namespace {

constexpr double kNullProjectionFloor = 1e-300;

void check_length(const FockBasis& basis, const RVector& p) {
  if (p.size() != static_cast<Eigen::Index>(basis.size())) {
    throw DimensionMismatch("probability vector length does not match the basis");
  }
}

RVector accumulate(const Regrouping& rg, const RVector& p) {
  RVector values = RVector::Zero(static_cast<Eigen::Index>(rg.keys.size()));
  for (std::size_t i = 0; i < rg.state_to_key.size(); ++i) {
    values(static_cast<Eigen::Index>(rg.state_to_key[i])) +=
        p(static_cast<Eigen::Index>(i));
  }
  return values;
}

}  // namespace

MeasurementStrategy MeasurementStrategy::partial(std::vector<int> measured_modes) {
  if (measured_modes.empty()) {
    throw InvalidModes("measured mode list must be nonempty");
  }
  for (std::size_t i = 0; i < measured_modes.size(); ++i) {
    if (measured_modes[i] < 0) {
      throw InvalidModes("measured modes must be non-negative");
    }
    if (i > 0 && measured_modes[i] <= measured_modes[i - 1]) {
      throw InvalidModes("measured modes must be strictly increasing");
    }
  }
  return MeasurementStrategy(StrategyKind::Partial, std::move(measured_modes));
}

RVector probabilities(const AmplitudeVector& a) { return a.values.cwiseAbs2(); }

std::vector<int> outcome_key(const FockState& t, const MeasurementStrategy& s,
                             Detector d) {
  std::vector<int> key;
  if (s.kind() == StrategyKind::Probabilities) {
    key = t.to_vector();
  } else if (s.kind() == StrategyKind::Partial) {
    key.reserve(s.measured_modes().size());
    for (const int mode : s.measured_modes()) {
      if (mode >= t.modes()) throw InvalidModes("measured mode out of range");
      key.push_back(t.occupation(mode));
    }
  } else {
    throw InvalidSpec("only distribution-valued strategies have outcome keys");
  }
  if (d == Detector::Threshold) {
    for (int& v : key) v = v > 0 ? 1 : 0;
  }
  return key;
}

Regrouping build_regrouping(const std::vector<FockState>& states,
                            const MeasurementStrategy& s, Detector d) {
  if (s.kind() == StrategyKind::Partial && !states.empty()) {
    const int m = states.front().modes();
    if (static_cast<int>(s.measured_modes().size()) >= m) {
      throw InvalidModes("measured modes must be a strict subset of all modes");
    }
  }
  std::map<std::vector<int>, std::size_t, std::greater<std::vector<int>>> order;
  std::vector<std::vector<int>> state_keys;
  state_keys.reserve(states.size());
  for (const FockState& t : states) {
    state_keys.push_back(outcome_key(t, s, d));
    order.emplace(state_keys.back(), 0);
  }
  Regrouping rg;
  rg.keys.reserve(order.size());
  for (auto& entry : order) {
    entry.second = rg.keys.size();
    rg.keys.push_back(entry.first);
  }
  rg.state_to_key.reserve(state_keys.size());
  for (const auto& key : state_keys) {
    rg.state_to_key.push_back(order.find(key)->second);
  }
  return rg;
}

KeyedDistribution apply_detector(const FockBasis& basis, const RVector& p,
                                 Detector d) {
  check_length(basis, p);
  const Regrouping rg =
      build_regrouping(basis.enumerate(), MeasurementStrategy::probabilities(), d);
  return KeyedDistribution{rg.keys, accumulate(rg, p)};
}

RVector per_mode_expectation(const FockBasis& basis, const RVector& p) {
  check_length(basis, p);
  RVector e = RVector::Zero(basis.modes());
  FockState t = basis.first_state();
  Eigen::Index index = 0;
  do {
    for (int i = 0; i < basis.modes(); ++i) {
      e(i) += p(index) * t.occupation(i);
    }
    ++index;
  } while (basis.next_state(t));
  return e;
}

KeyedDistribution marginal(const FockBasis& basis, const RVector& p,
                           const std::vector<int>& measured_modes) {
  check_length(basis, p);
  const auto strategy = MeasurementStrategy::partial(measured_modes);
  if (!measured_modes.empty() && measured_modes.back() >= basis.modes()) {
    throw InvalidModes("measured mode out of range");
  }
  const Regrouping rg =
      build_regrouping(basis.enumerate(), strategy, Detector::PNR);
  return KeyedDistribution{rg.keys, accumulate(rg, p)};
}

UnbunchedProjection project_unbunched(const AmplitudeVector& a) {
  const FockBasis& basis = a.basis;
  if (basis.photons() > basis.modes()) {
    throw DimensionMismatch("more photons than modes leaves no unbunched states");
  }
  UnbunchedProjection proj;
  std::vector<Complex> kept_values;
  FockState t = basis.first_state();
  std::uint64_t rank = 0;
  do {
    bool unbunched = true;
    for (int i = 0; i < basis.modes(); ++i) {
      if (t.occupation(i) > 1) {
        unbunched = false;
        break;
      }
    }
    if (unbunched) {
      proj.kept_ranks.push_back(rank);
      kept_values.push_back(a.values(static_cast<Eigen::Index>(rank)));
    }
    ++rank;
  } while (basis.next_state(t));

  double success = 0.0;
  for (const Complex& v : kept_values) success += std::norm(v);
  if (success < kNullProjectionFloor) {
    throw NullProjection("no probability mass in the unbunched subspace");
  }
  proj.success_probability = success;
  const double scale = 1.0 / std::sqrt(success);
  proj.values.resize(static_cast<Eigen::Index>(kept_values.size()));
  for (std::size_t i = 0; i < kept_values.size(); ++i) {
    proj.values(static_cast<Eigen::Index>(i)) = kept_values[i] * scale;
  }
  return proj;
}

std::string to_json(const KeyedDistribution& d) {
  std::string out = "{";
  char buffer[64];
  for (std::size_t i = 0; i < d.keys.size(); ++i) {
    if (i > 0) out += ',';
    out += '"';
    out += '[';
    for (std::size_t j = 0; j < d.keys[i].size(); ++j) {
      if (j > 0) out += ',';
      out += std::to_string(d.keys[i][j]);
    }
    out += ']';
    out += "\":";
    std::snprintf(buffer, sizeof buffer, "%.17g", d.values(static_cast<Eigen::Index>(i)));
    out += buffer;
  }
  out += '}';
  return out;
}

}  // namespace bosonflow::measurement
