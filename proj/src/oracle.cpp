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

#include "bosonflow/oracle.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace bosonflow::oracle {

namespace {

// Local state enumeration in canonical (descending-lex) order, kept separate
// from FockBasis on purpose: a reference path must not reuse the machinery it
// checks.
bool local_next_state(std::vector<int>& occ) {
  const int m = static_cast<int>(occ.size());
  int pivot = -1;
  for (int i = m - 2; i >= 0; --i) {
    if (occ[static_cast<std::size_t>(i)] > 0) {
      pivot = i;
      break;
    }
  }
  if (pivot < 0) return false;
  int moved = 1;
  for (int i = pivot + 1; i < m; ++i) {
    moved += occ[static_cast<std::size_t>(i)];
    occ[static_cast<std::size_t>(i)] = 0;
  }
  occ[static_cast<std::size_t>(pivot)] -= 1;
  occ[static_cast<std::size_t>(pivot + 1)] = moved;
  return true;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// Uniform double in [0, 1) built from the top 53 bits of the generator, so
// the stream does not depend on library distribution internals.
double uniform53(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

Complex permanent(const CMatrix& a) {
  if (a.rows() != a.cols()) throw NonSquare("permanent requires a square matrix");
  const int k = static_cast<int>(a.rows());
  if (k > 20) throw TooLarge("permanent limited to 20x20");
  if (k == 0) return Complex(1.0, 0.0);

  // Ryser: Per(A) = (-1)^k sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij,
  // walking subsets in Gray-code order so each step updates one column.
  std::vector<Complex> row_sums(static_cast<std::size_t>(k), Complex(0.0, 0.0));
  Complex total(0.0, 0.0);
  std::uint32_t gray = 0;
  const std::uint64_t count = 1ull << k;
  for (std::uint64_t idx = 1; idx < count; ++idx) {
    const std::uint32_t next_gray =
        static_cast<std::uint32_t>(idx ^ (idx >> 1));
    const std::uint32_t changed = gray ^ next_gray;
    const int col = __builtin_ctz(changed);
    const double sign_col = (next_gray & changed) ? 1.0 : -1.0;
    for (int i = 0; i < k; ++i) {
      row_sums[static_cast<std::size_t>(i)] += sign_col * a(i, col);
    }
    gray = next_gray;

    Complex prod(1.0, 0.0);
    for (int i = 0; i < k; ++i) prod *= row_sums[static_cast<std::size_t>(i)];
    const int bits = __builtin_popcount(gray);
    const double subset_sign = ((k - bits) % 2 == 0) ? 1.0 : -1.0;
    total += subset_sign * prod;
  }
  return total;
}

Complex oracle_amplitude(const CMatrix& u, const FockState& s, const FockState& t) {
  const int n = s.photon_count();
  if (t.photon_count() != n) {
    throw PhotonCountMismatch("input and output photon counts differ");
  }
  if (s.modes() != u.cols() || t.modes() != u.rows()) {
    throw DimensionMismatch("state mode count does not match matrix size");
  }
  if (n == 0) return Complex(1.0, 0.0);

  // Column p repeated s_p times, row q repeated t_q times.
  std::vector<int> cols, rows;
  cols.reserve(static_cast<std::size_t>(n));
  rows.reserve(static_cast<std::size_t>(n));
  for (int p = 0; p < s.modes(); ++p) {
    for (int c = 0; c < s.occupation(p); ++c) cols.push_back(p);
  }
  for (int q = 0; q < t.modes(); ++q) {
    for (int c = 0; c < t.occupation(q); ++c) rows.push_back(q);
  }
  CMatrix sub(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      sub(i, j) = u(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
    }
  }
  double norm = 1.0;
  for (int p = 0; p < s.modes(); ++p) norm *= factorial(s.occupation(p));
  for (int q = 0; q < t.modes(); ++q) norm *= factorial(t.occupation(q));
  return permanent(sub) / std::sqrt(norm);
}

AmplitudeVector oracle_state(const CMatrix& u, const FockState& s) {
  const int m = s.modes();
  const int n = s.photon_count();
  FockBasis basis(m, n);
  if (basis.size() > 100000ull) throw TooLarge("oracle limited to 1e5 basis states");
  CVector values(static_cast<Eigen::Index>(basis.size()));
  std::vector<int> occ(static_cast<std::size_t>(m), 0);
  occ[0] = n;
  std::uint64_t idx = 0;
  while (true) {
    values(static_cast<Eigen::Index>(idx)) = oracle_amplitude(u, s, FockState(occ));
    ++idx;
    if (!local_next_state(occ)) break;
  }
  return AmplitudeVector(basis, std::move(values));
}

CMatrix haar_unitary(int modes, std::uint64_t seed) {
  if (modes < 1) throw DimensionMismatch("mode count must be >= 1");
  std::mt19937_64 gen(seed);
  CMatrix g(modes, modes);
  for (int i = 0; i < modes; ++i) {
    for (int j = 0; j < modes; ++j) {
      // Box-Muller on explicitly constructed uniforms.
      const double u1 = 1.0 - uniform53(gen);
      const double u2 = uniform53(gen);
      const double r = std::sqrt(-2.0 * std::log(u1));
      g(i, j) = Complex(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < modes; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    const Complex phase = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    q.col(j) *= std::conj(phase);
  }
  return q;
}

}  // namespace bosonflow::oracle
