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

#include "bosonflow/train.hpp"

#include <cmath>
#include <vector>

#include <json.hpp>

#include "bosonflow/errors.hpp"

namespace bosonflow::train {
namespace {

constexpr double kProbFloor = 1e-12;

}  // namespace

AdamState AdamState::init(Eigen::Index size) {
  AdamState state;
  state.m = RVector::Zero(size);
  state.v = RVector::Zero(size);
  state.step = 0;
  return state;
}

void adam_step(RVector& params, const RVector& grads, AdamState& state,
               const AdamConfig& config) {
  const Eigen::Index n = params.size();
  if (grads.size() != n || state.m.size() != n || state.v.size() != n) {
    throw LengthMismatch("adam_step: params, grads, and state sizes must agree");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (Eigen::Index i = 0; i < n; ++i) {
    state.m(i) = config.beta1 * state.m(i) + (1.0 - config.beta1) * grads(i);
    state.v(i) = config.beta2 * state.v(i) + (1.0 - config.beta2) * grads(i) * grads(i);
    const double m_hat = state.m(i) / bc1;
    const double v_hat = state.v(i) / bc2;
    params(i) -= config.lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

std::pair<double, RVector> mse_loss(const RVector& pred, const RVector& target) {
  if (pred.size() != target.size()) {
    throw LengthMismatch("mse_loss: pred and target sizes must agree");
  }
  if (pred.size() == 0) {
    throw LengthMismatch("mse_loss: empty input");
  }
  const double inv_len = 1.0 / static_cast<double>(pred.size());
  RVector diff = pred - target;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < diff.size(); ++i) {
    loss += diff(i) * diff(i);
  }
  loss *= inv_len;
  RVector grad = diff * (2.0 * inv_len);
  return {loss, std::move(grad)};
}

ClassGrouping leading_mode_parity_grouping(const std::vector<std::vector<int>>& keys) {
  ClassGrouping grouping;
  grouping.class_indices.assign(2, {});
  for (std::size_t i = 0; i < keys.size(); ++i) {
    int leading = 0;
    for (std::size_t j = 0; j < keys[i].size(); ++j) {
      if (keys[i][j] > 0) {
        leading = static_cast<int>(j);
        break;
      }
    }
    grouping.class_indices[leading % 2].push_back(static_cast<int>(i));
  }
  return grouping;
}

std::pair<double, RVector> cross_entropy_from_probs(const RVector& probs,
                                                    const ClassGrouping& grouping,
                                                    int label) {
  const Eigen::Index n = probs.size();
  if (label < 0 || static_cast<std::size_t>(label) >= grouping.class_indices.size()) {
    throw BadGrouping("cross_entropy_from_probs: label out of range");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const auto& cls : grouping.class_indices) {
    for (int idx : cls) {
      if (idx < 0 || idx >= n) {
        throw BadGrouping("cross_entropy_from_probs: index out of range");
      }
      if (seen[static_cast<std::size_t>(idx)]) {
        throw BadGrouping("cross_entropy_from_probs: index assigned twice");
      }
      seen[static_cast<std::size_t>(idx)] = 1;
    }
  }
  for (char s : seen) {
    if (!s) {
      throw BadGrouping("cross_entropy_from_probs: classes must cover every coordinate");
    }
  }
  double mass = 0.0;
  for (int idx : grouping.class_indices[static_cast<std::size_t>(label)]) {
    mass += probs(idx);
  }
  const double clamped = mass < kProbFloor ? kProbFloor : mass;
  const double loss = -std::log(clamped);
  RVector grad = RVector::Zero(n);
  const double g = -1.0 / clamped;
  for (int idx : grouping.class_indices[static_cast<std::size_t>(label)]) {
    grad(idx) = g;
  }
  return {loss, std::move(grad)};
}

std::string to_json(const AdamState& state) {
  nlohmann::ordered_json j;
  j["step"] = state.step;
  j["m"] = std::vector<double>(state.m.data(), state.m.data() + state.m.size());
  j["v"] = std::vector<double>(state.v.data(), state.v.data() + state.v.size());
  return j.dump();
}

AdamState adam_state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("adam state: ") + e.what());
  }
  if (!j.is_object() || !j.contains("step") || !j.contains("m") || !j.contains("v")) {
    throw ParseError("adam state: expected object with step, m, v");
  }
  AdamState state;
  try {
    state.step = j.at("step").get<std::int64_t>();
    const auto m = j.at("m").get<std::vector<double>>();
    const auto v = j.at("v").get<std::vector<double>>();
    if (m.size() != v.size()) {
      throw ParseError("adam state: m and v lengths differ");
    }
    state.m = Eigen::Map<const RVector>(m.data(), static_cast<Eigen::Index>(m.size()));
    state.v = Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("adam state: ") + e.what());
  }
  return state;
}

}  // namespace bosonflow::train
