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

#include <Eigen/Dense>
#include <complex>

#include "bosonflow/fock.hpp"

namespace bosonflow {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Dense state vector over a Fock basis, indexed by canonical rank.
struct AmplitudeVector {
  FockBasis basis;
  CVector values;

  AmplitudeVector(FockBasis b, CVector v) : basis(b), values(std::move(v)) {
    if (static_cast<std::uint64_t>(values.size()) != basis.size()) {
      throw DimensionMismatch("amplitude vector length does not match basis size");
    }
  }
};

/// Max-norm distance of U from unitarity, ||U^dag U - I||_max.
inline double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return 1.0;
  if (u.rows() == 0) return 0.0;
  CMatrix g = u.adjoint() * u;
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

}  // namespace bosonflow
