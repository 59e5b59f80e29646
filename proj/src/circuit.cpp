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

#include "bosonflow/circuit.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "bosonflow/errors.hpp"

namespace bosonflow::circuit {

namespace {

constexpr double kStaticUnitarityTolerance = 1e-10;
constexpr double kTwoPi = 6.283185307179586476925286766559;

const ParamSource* component_source(const Component& comp) {
  if (const auto* ps = std::get_if<PhaseShifter>(&comp)) return &ps->phase;
  if (const auto* bs = std::get_if<BeamSplitter>(&comp)) return &bs->theta;
  return nullptr;
}

// Resolved view of one component's angle: its value plus which parameter or
// feature (if any) it differentiates against.
struct Resolved {
  double angle = 0.0;
  int theta_index = -1;
  int feature_index = -1;
  double chain_scale = 1.0;
};

Resolved resolve(const ParamCircuit& c, const ParamSource& source,
                 const RVector& theta, const RVector& x) {
  Resolved r;
  if (const auto* t = std::get_if<Trainable>(&source)) {
    r.theta_index = c.trainable_index(t->name);
    r.angle = theta(r.theta_index);
  } else if (const auto* f = std::get_if<InputFeature>(&source)) {
    r.feature_index = f->feature_index;
    r.chain_scale = f->scale;
    r.angle = f->scale * x(f->feature_index);
  } else {
    r.angle = std::get<Fixed>(source).value;
  }
  return r;
}

void check_arity(const ParamCircuit& c, const RVector& theta, const RVector& x) {
  if (theta.size() != c.trainable_count()) {
    throw ArityMismatch("theta length does not match the trainable count");
  }
  if (x.size() < c.input_feature_count()) {
    throw ArityMismatch("feature vector is shorter than the bound feature count");
  }
}

// M <- C * M, touching only the rows the component acts on.
void apply_left(CMatrix& m, const Component& comp, double angle) {
  if (const auto* ps = std::get_if<PhaseShifter>(&comp)) {
    m.row(ps->mode) *= Complex(std::cos(angle), std::sin(angle));
  } else if (const auto* bs = std::get_if<BeamSplitter>(&comp)) {
    const Complex a(std::cos(0.5 * angle), 0.0);
    const Complex b(0.0, std::sin(0.5 * angle));
    const int i = bs->mode;
    const Eigen::RowVectorXcd top = m.row(i);
    const Eigen::RowVectorXcd bottom = m.row(i + 1);
    m.row(i) = a * top + b * bottom;
    m.row(i + 1) = b * top + a * bottom;
  } else {
    const auto& st = std::get<StaticUnitary>(comp);
    const auto k = st.matrix.rows();
    m.middleRows(st.first_mode, k) = (st.matrix * m.middleRows(st.first_mode, k)).eval();
  }
}

// M <- M * C, touching only the columns the component acts on.
void apply_right(CMatrix& m, const Component& comp, double angle) {
  if (const auto* ps = std::get_if<PhaseShifter>(&comp)) {
    m.col(ps->mode) *= Complex(std::cos(angle), std::sin(angle));
  } else if (const auto* bs = std::get_if<BeamSplitter>(&comp)) {
    const Complex a(std::cos(0.5 * angle), 0.0);
    const Complex b(0.0, std::sin(0.5 * angle));
    const int i = bs->mode;
    const CVector left = m.col(i);
    const CVector right = m.col(i + 1);
    m.col(i) = a * left + b * right;
    m.col(i + 1) = b * left + a * right;
  } else {
    const auto& st = std::get<StaticUnitary>(comp);
    const auto k = st.matrix.rows();
    m.middleCols(st.first_mode, k) = (m.middleCols(st.first_mode, k) * st.matrix).eval();
  }
}

// suffix * dC/dangle * prefix for the component at `angle`.
CMatrix derivative_contribution(const CMatrix& suffix, const Component& comp,
                                double angle, const CMatrix& prefix) {
  if (const auto* ps = std::get_if<PhaseShifter>(&comp)) {
    const Complex d = Complex(0.0, 1.0) * Complex(std::cos(angle), std::sin(angle));
    return d * (suffix.col(ps->mode) * prefix.row(ps->mode));
  }
  const auto& bs = std::get<BeamSplitter>(comp);
  Eigen::Matrix2cd db;
  const double c2 = 0.5 * std::cos(0.5 * angle);
  const double s2 = 0.5 * std::sin(0.5 * angle);
  db << Complex(-s2, 0.0), Complex(0.0, c2), Complex(0.0, c2), Complex(-s2, 0.0);
  return suffix.middleCols(bs.mode, 2) * db * prefix.middleRows(bs.mode, 2);
}

}  // namespace

ParamCircuit::ParamCircuit(int modes) : modes_(modes) {
  if (modes < 1) throw DimensionMismatch("circuit needs at least one mode");
}

int ParamCircuit::trainable_index(const std::string& name) const {
  const auto it = trainable_lookup_.find(name);
  return it == trainable_lookup_.end() ? -1 : it->second;
}

void ParamCircuit::claim_name(const std::string& name) {
  if (name.empty()) throw InvalidSpec("parameter name must be non-empty");
  if (used_names_.count(name) > 0) {
    throw DuplicateName("parameter name already used: " + name);
  }
  used_names_[name] = true;
}

void ParamCircuit::register_source(const ParamSource& source) {
  if (const auto* t = std::get_if<Trainable>(&source)) {
    claim_name(t->name);
    trainable_lookup_[t->name] = static_cast<int>(trainable_names_.size());
    trainable_names_.push_back(t->name);
    trainable_inits_.push_back(t->init);
  } else if (const auto* f = std::get_if<InputFeature>(&source)) {
    if (f->feature_index < 0) throw IndexOutOfRange("feature index must be >= 0");
    claim_name(f->name);
    if (f->feature_index + 1 > input_feature_count_) {
      input_feature_count_ = f->feature_index + 1;
    }
  }
}

ParamCircuit& ParamCircuit::add_phase_shifter(int mode, ParamSource phase) {
  if (mode < 0 || mode >= modes_) throw ModeOutOfRange("phase shifter mode out of range");
  register_source(phase);
  components_.push_back(PhaseShifter{mode, std::move(phase)});
  return *this;
}

ParamCircuit& ParamCircuit::add_beam_splitter(int mode, ParamSource theta) {
  if (mode < 0 || mode + 1 >= modes_) {
    throw ModeOutOfRange("beam splitter needs an adjacent in-range pair");
  }
  register_source(theta);
  components_.push_back(BeamSplitter{mode, std::move(theta)});
  return *this;
}

ParamCircuit& ParamCircuit::add_static(int first_mode, CMatrix matrix) {
  if (matrix.rows() != matrix.cols()) throw NonSquare("static block must be square");
  if (first_mode < 0 || first_mode + matrix.rows() > modes_) {
    throw ModeOutOfRange("static block does not fit the mode range");
  }
  if (unitarity_defect(matrix) > kStaticUnitarityTolerance) {
    throw NonUnitaryInput("static block is not unitary within 1e-10");
  }
  components_.push_back(StaticUnitary{first_mode, std::move(matrix)});
  return *this;
}

ParamCircuit& ParamCircuit::add_angle_encoding(const std::vector<int>& modes,
                                               const std::string& name_prefix,
                                               double scale) {
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] < 0 || modes[i] >= modes_) {
      throw ModeOutOfRange("encoding mode out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (modes[j] == modes[i]) throw DuplicateMode("encoding modes must be distinct");
    }
  }
  for (const int mode : modes) {
    const int index = input_feature_count_;
    add_phase_shifter(mode, InputFeature{name_prefix + std::to_string(index), index, scale});
  }
  return *this;
}

ParamCircuit& ParamCircuit::append(const ParamCircuit& other) {
  if (other.modes_ != modes_) {
    throw DimensionMismatch("appended circuit has a different mode count");
  }
  for (const Component& comp : other.components_) {
    if (const ParamSource* source = component_source(comp)) register_source(*source);
    components_.push_back(comp);
  }
  return *this;
}

CMatrix compile_unitary(const ParamCircuit& c, const RVector& theta, const RVector& x) {
  check_arity(c, theta, x);
  CMatrix u = CMatrix::Identity(c.modes(), c.modes());
  for (const Component& comp : c.components()) {
    const ParamSource* source = component_source(comp);
    const double angle = source ? resolve(c, *source, theta, x).angle : 0.0;
    apply_left(u, comp, angle);
  }
  return u;
}

UnitaryWithDerivatives compile_all_derivatives(const ParamCircuit& c,
                                               const RVector& theta,
                                               const RVector& x) {
  check_arity(c, theta, x);
  const auto& comps = c.components();
  const int m = c.modes();
  const std::size_t count = comps.size();

  std::vector<Resolved> resolved(count);
  for (std::size_t r = 0; r < count; ++r) {
    if (const ParamSource* source = component_source(comps[r])) {
      resolved[r] = resolve(c, *source, theta, x);
    }
  }

  std::vector<CMatrix> prefix(count + 1);
  prefix[0] = CMatrix::Identity(m, m);
  for (std::size_t r = 0; r < count; ++r) {
    prefix[r + 1] = prefix[r];
    apply_left(prefix[r + 1], comps[r], resolved[r].angle);
  }

  UnitaryWithDerivatives out{
      prefix[count],
      std::vector<CMatrix>(static_cast<std::size_t>(c.trainable_count()),
                           CMatrix::Zero(m, m)),
      std::vector<CMatrix>(static_cast<std::size_t>(c.input_feature_count()),
                           CMatrix::Zero(m, m))};

  CMatrix suffix = CMatrix::Identity(m, m);
  for (std::size_t r = count; r-- > 0;) {
    const Resolved& rs = resolved[r];
    if (rs.theta_index >= 0) {
      out.dtheta[static_cast<std::size_t>(rs.theta_index)] +=
          derivative_contribution(suffix, comps[r], rs.angle, prefix[r]);
    } else if (rs.feature_index >= 0) {
      out.dfeature[static_cast<std::size_t>(rs.feature_index)] +=
          rs.chain_scale * derivative_contribution(suffix, comps[r], rs.angle, prefix[r]);
    }
    apply_right(suffix, comps[r], rs.angle);
  }
  return out;
}

CMatrix compile_unitary_derivative(const ParamCircuit& c, const RVector& theta,
                                   const RVector& x, const std::string& wrt_name) {
  const int index = c.trainable_index(wrt_name);
  if (index < 0) throw UnknownParameter("no trainable parameter named " + wrt_name);
  return compile_all_derivatives(c, theta, x).dtheta[static_cast<std::size_t>(index)];
}

CMatrix compile_unitary_derivative(const ParamCircuit& c, const RVector& theta,
                                   const RVector& x, int wrt_feature) {
  if (wrt_feature < 0 || wrt_feature >= c.input_feature_count()) {
    throw UnknownParameter("feature index is not bound by the circuit");
  }
  return compile_all_derivatives(c, theta, x).dfeature[static_cast<std::size_t>(wrt_feature)];
}

ParamCircuit universal_mesh(int modes, const std::string& name_prefix,
                            std::uint64_t seed) {
  if (modes < 2) throw DimensionMismatch("mesh needs at least two modes");
  ParamCircuit mesh(modes);
  std::mt19937_64 gen(seed);
  auto draw = [&gen] {
    return kTwoPi * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
  };
  int next = 0;
  auto name = [&next, &name_prefix] { return name_prefix + "_" + std::to_string(next++); };
  for (int layer = 0; layer < modes; ++layer) {
    for (int i = layer % 2; i + 1 < modes; i += 2) {
      mesh.add_phase_shifter(i, Trainable{name(), draw()});
      mesh.add_beam_splitter(i, Trainable{name(), draw()});
    }
  }
  for (int i = 0; i < modes; ++i) {
    mesh.add_phase_shifter(i, Trainable{name(), draw()});
  }
  return mesh;
}

}  // namespace bosonflow::circuit
