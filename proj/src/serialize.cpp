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

#include "bosonflow/serialize.hpp"

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bosonflow/errors.hpp"
#include "bosonflow/measurement.hpp"

namespace bosonflow::serialize {
namespace {

using Json = nlohmann::ordered_json;

Json param_to_json(const circuit::ParamSource& source) {
  Json j;
  if (const auto* t = std::get_if<circuit::Trainable>(&source)) {
    j["kind"] = "trainable";
    j["name"] = t->name;
    j["value"] = t->init;
  } else if (const auto* f = std::get_if<circuit::InputFeature>(&source)) {
    j["kind"] = "input";
    j["name"] = f->name;
    j["index"] = f->feature_index;
    j["scale"] = f->scale;
  } else {
    j["kind"] = "fixed";
    j["value"] = std::get<circuit::Fixed>(source).value;
  }
  return j;
}

circuit::ParamSource param_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ParseError("param: expected an object with a \"kind\" string");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "trainable") {
    circuit::Trainable t;
    t.name = j.at("name").get<std::string>();
    t.init = j.at("value").get<double>();
    return t;
  }
  if (kind == "input") {
    circuit::InputFeature f;
    f.name = j.at("name").get<std::string>();
    f.feature_index = j.at("index").get<int>();
    f.scale = j.at("scale").get<double>();
    return f;
  }
  if (kind == "fixed") {
    return circuit::Fixed{j.at("value").get<double>()};
  }
  throw ParseError("param: unknown kind \"" + kind + "\"");
}

Json matrix_to_json(const CMatrix& u) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      row.push_back(Json::array({u(r, c).real(), u(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) {
    throw ParseError("matrix: expected a nonempty array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  CMatrix u(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("matrix: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& cell = row.at(static_cast<std::size_t>(c));
      if (!cell.is_array() || cell.size() != 2) {
        throw ParseError("matrix: each entry must be [re, im]");
      }
      u(r, c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return u;
}

Json circuit_to_json_object(const circuit::ParamCircuit& c) {
  Json j;
  j["modes"] = c.modes();
  Json components = Json::array();
  for (const circuit::Component& comp : c.components()) {
    Json cj;
    if (const auto* ps = std::get_if<circuit::PhaseShifter>(&comp)) {
      cj["type"] = "ps";
      cj["modes"] = Json::array({ps->mode});
      cj["param"] = param_to_json(ps->phase);
    } else if (const auto* bs = std::get_if<circuit::BeamSplitter>(&comp)) {
      cj["type"] = "bs";
      cj["modes"] = Json::array({bs->mode, bs->mode + 1});
      cj["param"] = param_to_json(bs->theta);
    } else {
      const auto& st = std::get<circuit::StaticUnitary>(comp);
      cj["type"] = "static";
      Json modes = Json::array();
      for (Eigen::Index k = 0; k < st.matrix.rows(); ++k) {
        modes.push_back(st.first_mode + static_cast<int>(k));
      }
      cj["modes"] = std::move(modes);
      cj["matrix"] = matrix_to_json(st.matrix);
    }
    components.push_back(std::move(cj));
  }
  j["components"] = std::move(components);
  return j;
}

circuit::ParamCircuit circuit_from_json_object(const Json& j) {
  if (!j.is_object() || !j.contains("modes") || !j.contains("components")) {
    throw ParseError("circuit: expected an object with modes and components");
  }
  if (!j.at("modes").is_number_integer()) {
    throw ParseError("circuit: modes must be an integer");
  }
  if (!j.at("components").is_array()) {
    throw ParseError("circuit: components must be an array");
  }
  circuit::ParamCircuit c(j.at("modes").get<int>());
  for (const Json& cj : j.at("components")) {
    if (!cj.is_object() || !cj.contains("type") || !cj.at("type").is_string() ||
        !cj.contains("modes") || !cj.at("modes").is_array()) {
      throw ParseError("component: expected an object with type and modes");
    }
    const std::string type = cj.at("type").get<std::string>();
    const auto modes = cj.at("modes").get<std::vector<int>>();
    if (type == "ps") {
      if (modes.size() != 1) throw ParseError("ps: expected one mode");
      c.add_phase_shifter(modes[0], param_from_json(cj.at("param")));
    } else if (type == "bs") {
      if (modes.size() != 2 || modes[1] != modes[0] + 1) {
        throw ParseError("bs: expected two adjacent modes");
      }
      c.add_beam_splitter(modes[0], param_from_json(cj.at("param")));
    } else if (type == "static") {
      if (!cj.contains("matrix")) throw ParseError("static: missing matrix");
      const CMatrix u = matrix_from_json(cj.at("matrix"));
      if (modes.empty() || static_cast<Eigen::Index>(modes.size()) != u.rows()) {
        throw ParseError("static: modes list must match the matrix size");
      }
      for (std::size_t i = 1; i < modes.size(); ++i) {
        if (modes[i] != modes[0] + static_cast<int>(i)) {
          throw ParseError("static: modes must be consecutive");
        }
      }
      c.add_static(modes[0], u);
    } else {
      throw ParseError("component: unknown type \"" + type + "\"");
    }
  }
  return c;
}

Json strategy_to_json(const measurement::MeasurementStrategy& s) {
  switch (s.kind()) {
    case measurement::StrategyKind::Probabilities:
      return "probabilities";
    case measurement::StrategyKind::PerModeExpectation:
      return "per_mode_expectation";
    case measurement::StrategyKind::Amplitudes:
      return "amplitudes";
    case measurement::StrategyKind::Partial:
    default: {
      Json j;
      j["partial"] = s.measured_modes();
      return j;
    }
  }
}

measurement::MeasurementStrategy strategy_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "probabilities") return measurement::MeasurementStrategy::probabilities();
    if (name == "per_mode_expectation") {
      return measurement::MeasurementStrategy::per_mode_expectation();
    }
    if (name == "amplitudes") return measurement::MeasurementStrategy::amplitudes();
    throw ParseError("strategy: unknown name \"" + name + "\"");
  }
  if (j.is_object() && j.contains("partial") && j.at("partial").is_array()) {
    return measurement::MeasurementStrategy::partial(
        j.at("partial").get<std::vector<int>>());
  }
  throw ParseError("strategy: expected a name or {\"partial\": [modes]}");
}

Json layer_spec_to_json_object(const layer::LayerSpec& spec) {
  Json j = circuit_to_json_object(spec.circuit);
  if (const auto* fock = std::get_if<FockState>(&spec.input)) {
    j["input_state"] = fock->to_string();
  } else {
    Json amp;
    amp["amplitude"] = std::get<layer::AmplitudeInput>(spec.input).photons;
    j["input_state"] = std::move(amp);
  }
  j["strategy"] = strategy_to_json(spec.strategy);
  j["detector"] = spec.detector == measurement::Detector::PNR ? "pnr" : "threshold";
  j["space"] =
      spec.space == measurement::ComputationSpace::Fock ? "fock" : "unbunched";
  return j;
}

layer::LayerSpec layer_spec_from_json_object(const Json& j) {
  if (!j.is_object() || !j.contains("input_state")) {
    throw ParseError("layer spec: expected an object with an input_state");
  }
  layer::LayerSpec spec{circuit_from_json_object(j), FockState({1})};
  const Json& input = j.at("input_state");
  if (input.is_string()) {
    spec.input = FockState::parse(input.get<std::string>());
  } else if (input.is_object() && input.contains("amplitude")) {
    spec.input = layer::AmplitudeInput{input.at("amplitude").get<int>()};
  } else {
    throw ParseError("input_state: expected \"[n0,n1,...]\" or {\"amplitude\": n}");
  }
  if (j.contains("strategy")) spec.strategy = strategy_from_json(j.at("strategy"));
  if (j.contains("detector")) {
    const std::string d = j.at("detector").get<std::string>();
    if (d == "pnr") {
      spec.detector = measurement::Detector::PNR;
    } else if (d == "threshold") {
      spec.detector = measurement::Detector::Threshold;
    } else {
      throw ParseError("detector: expected \"pnr\" or \"threshold\"");
    }
  }
  if (j.contains("space")) {
    const std::string s = j.at("space").get<std::string>();
    if (s == "fock") {
      spec.space = measurement::ComputationSpace::Fock;
    } else if (s == "unbunched") {
      spec.space = measurement::ComputationSpace::Unbunched;
    } else {
      throw ParseError("space: expected \"fock\" or \"unbunched\"");
    }
  }
  return spec;
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

/// Reconstruction goes through the regular builders, whose errors indicate
/// an invalid document rather than a library fault; surface them as parse
/// failures with the original message.
template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

std::string to_json(const circuit::ParamCircuit& c) {
  return circuit_to_json_object(c).dump(2);
}

circuit::ParamCircuit circuit_from_json(const std::string& text) {
  const Json j = parse_text(text);
  return guarded([&] { return circuit_from_json_object(j); });
}

std::string to_json(const layer::LayerSpec& spec) {
  return layer_spec_to_json_object(spec).dump(2);
}

layer::LayerSpec layer_spec_from_json(const std::string& text) {
  const Json j = parse_text(text);
  return guarded([&] { return layer_spec_from_json_object(j); });
}

}  // namespace bosonflow::serialize
