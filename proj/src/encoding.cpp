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

#include "bosonflow/encoding.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "bosonflow/errors.hpp"

namespace bosonflow::encoding {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kLeakageCeiling = 1.0 - 1e-12;

// Rank of the dual-rail Fock state for computational index `index` over k
// qubits, with qubit 0 the most significant bit.
std::uint64_t dual_rail_rank(const FockBasis& basis, std::uint64_t index, int k) {
  std::vector<int> occ(static_cast<std::size_t>(2 * k), 0);
  for (int i = 0; i < k; ++i) {
    const int bit = static_cast<int>((index >> (k - 1 - i)) & 1u);
    occ[static_cast<std::size_t>(2 * i + bit)] = 1;
  }
  return basis.rank(FockState(occ));
}

int qubit_count(const CVector& q) {
  const std::uint64_t len = static_cast<std::uint64_t>(q.size());
  if (len < 2 || (len & (len - 1)) != 0) {
    throw DimensionMismatch("qubit vector length must be a power of two, at least 2");
  }
  int k = 0;
  while ((1ull << k) < len) ++k;
  return k;
}

}  // namespace

AmplitudeVector amplitude_encode(const CVector& x, const FockBasis& basis) {
  if (static_cast<std::uint64_t>(x.size()) > basis.size()) {
    throw TooLong("feature vector longer than the target basis");
  }
  const double norm = x.norm();
  if (norm == 0.0) {
    throw ZeroNorm("cannot normalize a zero feature vector");
  }
  CVector values = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
  values.head(x.size()) = x * (1.0 / norm);
  return AmplitudeVector(basis, std::move(values));
}

AmplitudeVector amplitude_encode(const RVector& x, const FockBasis& basis) {
  return amplitude_encode(CVector(x.cast<Complex>()), basis);
}

AmplitudeVector qubit_to_fock(const CVector& q) {
  const int k = qubit_count(q);
  if (std::abs(q.norm() - 1.0) > kNormTolerance) {
    throw NotNormalized("qubit vector is not unit norm");
  }
  FockBasis basis(2 * k, k);
  CVector values = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index b = 0; b < q.size(); ++b) {
    const std::uint64_t rank =
        dual_rail_rank(basis, static_cast<std::uint64_t>(b), k);
    values(static_cast<Eigen::Index>(rank)) = q(b);
  }
  return AmplitudeVector(basis, std::move(values));
}

QubitReadout fock_to_qubit(const AmplitudeVector& a) {
  const FockBasis& basis = a.basis;
  if (basis.modes() % 2 != 0 || basis.photons() != basis.modes() / 2 ||
      basis.photons() < 1) {
    throw DimensionMismatch("basis is not dual-rail shaped (2k modes, k photons)");
  }
  const int k = basis.photons();
  const std::uint64_t dim = 1ull << k;
  CVector qubit(static_cast<Eigen::Index>(dim));
  std::vector<bool> in_subspace(basis.size(), false);
  for (std::uint64_t b = 0; b < dim; ++b) {
    const std::uint64_t rank = dual_rail_rank(basis, b, k);
    in_subspace[rank] = true;
    qubit(static_cast<Eigen::Index>(b)) = a.values(static_cast<Eigen::Index>(rank));
  }
  double leakage = 0.0;
  for (std::uint64_t rank = 0; rank < basis.size(); ++rank) {
    if (!in_subspace[rank]) {
      leakage += std::norm(a.values(static_cast<Eigen::Index>(rank)));
    }
  }
  if (leakage >= kLeakageCeiling) {
    throw NullProjection("no amplitude left in the dual-rail subspace");
  }
  const double kept = qubit.norm();
  if (kept == 0.0) {
    throw NullProjection("no amplitude left in the dual-rail subspace");
  }
  qubit *= 1.0 / kept;
  return QubitReadout{std::move(qubit), leakage};
}

}  // namespace bosonflow::encoding
