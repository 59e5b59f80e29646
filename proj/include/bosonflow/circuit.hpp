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

#ifndef BOSONFLOW_CIRCUIT_HPP_
#define BOSONFLOW_CIRCUIT_HPP_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bosonflow/types.hpp"

namespace bosonflow::circuit {

/// Where a component's angle comes from: a named trainable parameter (with
/// its initialization value in radians), a feature of the data vector scaled
/// by a constant, or a fixed constant.
struct Trainable {
  std::string name;
  double init = 0.0;
};

struct InputFeature {
  std::string name;
  int feature_index = 0;
  double scale = 1.0;
};

struct Fixed {
  double value = 0.0;
};

using ParamSource = std::variant<Trainable, InputFeature, Fixed>;

/// Phase shifter on one mode: diagonal factor e^{i phi} at (mode, mode).
struct PhaseShifter {
  int mode = 0;
  ParamSource phase;
};

/// Beam splitter on the adjacent pair (mode, mode+1) with the symmetric
/// convention [[cos(t/2), i sin(t/2)], [i sin(t/2), cos(t/2)]] and
/// reflectivity cos^2(t/2).
struct BeamSplitter {
  int mode = 0;
  ParamSource theta;
};

/// Fixed k-mode unitary block starting at first_mode. Checked unitary to
/// 1e-10 when added.
struct StaticUnitary {
  int first_mode = 0;
  CMatrix matrix;
};

using Component = std::variant<PhaseShifter, BeamSplitter, StaticUnitary>;

/// Ordered list of components on a fixed mode count. Component order is the
/// physical left-to-right application order; the compiled matrix composes
/// right-to-left (the last component's matrix is the leftmost factor).
/// Parameter names are unique across the whole circuit.
class ParamCircuit {
 public:
  explicit ParamCircuit(int modes);

  int modes() const { return modes_; }
  const std::vector<Component>& components() const { return components_; }
  const std::vector<std::string>& trainable_names() const { return trainable_names_; }
  const std::vector<double>& trainable_inits() const { return trainable_inits_; }
  int trainable_count() const { return static_cast<int>(trainable_names_.size()); }
  int input_feature_count() const { return input_feature_count_; }

  ParamCircuit& add_phase_shifter(int mode, ParamSource phase);
  ParamCircuit& add_beam_splitter(int mode, ParamSource theta);
  ParamCircuit& add_static(int first_mode, CMatrix matrix);

  /// Appends one phase shifter per listed mode, bound to consecutive
  /// feature indices starting at the current input_feature_count. Names are
  /// `<name_prefix><feature_index>`.
  ParamCircuit& add_angle_encoding(const std::vector<int>& modes,
                                   const std::string& name_prefix = "x",
                                   double scale = 1.0);

  /// Appends all of `other`'s components. Mode counts must match and names
  /// must stay unique; feature indices are taken as-is (both circuits read
  /// the same feature vector).
  ParamCircuit& append(const ParamCircuit& other);

  /// Index of a trainable name in the theta vector; -1 if absent.
  int trainable_index(const std::string& name) const;

 private:
  void register_source(const ParamSource& source);
  void claim_name(const std::string& name);

  int modes_ = 0;
  std::vector<Component> components_;
  std::vector<std::string> trainable_names_;
  std::vector<double> trainable_inits_;
  std::unordered_map<std::string, int> trainable_lookup_;
  std::unordered_map<std::string, bool> used_names_;
  int input_feature_count_ = 0;
};

/// Compiles the component chain at the given parameter values into the m x m
/// unitary. theta must have exactly trainable_count entries (matched by
/// position to trainable_names); x must have at least input_feature_count.
CMatrix compile_unitary(const ParamCircuit& c, const RVector& theta, const RVector& x);

/// Analytic dU with respect to one trainable parameter (by name) or one
/// feature index, via the product rule over the chain.
CMatrix compile_unitary_derivative(const ParamCircuit& c, const RVector& theta,
                                   const RVector& x, const std::string& wrt_name);
CMatrix compile_unitary_derivative(const ParamCircuit& c, const RVector& theta,
                                   const RVector& x, int wrt_feature);

/// The unitary together with every parameter and feature derivative from a
/// single prefix/suffix sweep; cost O(components * m^2) for all of them.
struct UnitaryWithDerivatives {
  CMatrix value;
  std::vector<CMatrix> dtheta;
  std::vector<CMatrix> dfeature;
};

UnitaryWithDerivatives compile_all_derivatives(const ParamCircuit& c,
                                               const RVector& theta,
                                               const RVector& x);

/// Rectangular brick-wall mesh: m layers of beam splitters over adjacent
/// pairs (m(m-1)/2 in total), each preceded by a trainable phase shifter on
/// its upper mode, plus a final column of m trainable phase shifters. Total
/// trainables m(m-1) + m; reaches any m x m unitary up to global phase.
/// Initial values are independent uniform draws from [0, 2pi) seeded by
/// `seed`; names are `<name_prefix>_<k>` in creation order.
ParamCircuit universal_mesh(int modes, const std::string& name_prefix = "w",
                            std::uint64_t seed = 0);

}  // namespace bosonflow::circuit

#endif  // BOSONFLOW_CIRCUIT_HPP_
