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

#include <string>

#include "bosonflow/circuit.hpp"
#include "bosonflow/layer.hpp"

namespace bosonflow::serialize {

// JSON forms for circuits and layer specs. Serialization is deterministic
// (fixed field order, shortest round-trip doubles), so parse -> serialize is
// byte-stable and serialized parameter values survive exactly.

std::string to_json(const circuit::ParamCircuit& c);

/// Rebuilds a circuit through the regular builder calls, so every circuit
/// invariant (mode ranges, name uniqueness, static-block unitarity) is
/// re-checked. Throws ParseError on malformed text or an invalid circuit.
circuit::ParamCircuit circuit_from_json(const std::string& text);

std::string to_json(const layer::LayerSpec& spec);

/// Accepts the layer fields of a config object; unknown extra fields such as
/// an experiment section are ignored. Throws ParseError on malformed input.
layer::LayerSpec layer_spec_from_json(const std::string& text);

}  // namespace bosonflow::serialize
