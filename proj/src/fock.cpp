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

#include "bosonflow/fock.hpp"

#include <numeric>

namespace bosonflow {

namespace {

// a + b with overflow detection.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw OverflowError("Fock basis size exceeds 64-bit range");
  }
  return r;
}

}  // namespace

std::uint64_t basis_size(int modes, int photons) {
  if (modes < 1) throw DimensionMismatch("mode count must be >= 1");
  if (photons < 0) throw DimensionMismatch("photon count must be >= 0");
  // C(modes+photons-1, photons), multiplying small factors first so every
  // intermediate quotient is an exact integer.
  unsigned __int128 r = 1;
  for (int i = 1; i <= photons; ++i) {
    r = r * static_cast<unsigned>(modes - 1 + i) / static_cast<unsigned>(i);
    if (r > static_cast<unsigned __int128>(UINT64_MAX)) {
      throw OverflowError("Fock basis size exceeds 64-bit range");
    }
  }
  return static_cast<std::uint64_t>(r);
}

FockState::FockState(const std::vector<int>& occupations) {
  occ_.reserve(occupations.size());
  for (int v : occupations) {
    if (v < 0) throw DimensionMismatch("occupation must be non-negative");
    if (v > 255) throw OverflowError("occupation above 255 is not supported");
    occ_.push_back(static_cast<std::uint8_t>(v));
  }
}

FockState FockState::parse(std::string_view text) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip_ws();
  if (i >= text.size() || text[i] != '[') {
    throw ParseError("Fock state text must start with '['");
  }
  ++i;
  std::vector<int> occ;
  skip_ws();
  if (i < text.size() && text[i] == ']') {
    ++i;
  } else {
    while (true) {
      skip_ws();
      bool any = false;
      int v = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        v = v * 10 + (text[i] - '0');
        if (v > 100000) throw ParseError("occupation out of range");
        ++i;
        any = true;
      }
      if (!any) throw ParseError("expected occupation number");
      occ.push_back(v);
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ']') {
        ++i;
        break;
      }
      throw ParseError("expected ',' or ']' in Fock state text");
    }
  }
  skip_ws();
  if (i != text.size()) throw ParseError("trailing characters after ']'");
  return FockState(occ);
}

int FockState::occupation(int mode) const {
  if (mode < 0 || mode >= modes()) throw ModeOutOfRange("mode out of range");
  return occ_[static_cast<std::size_t>(mode)];
}

int FockState::photon_count() const {
  return std::accumulate(occ_.begin(), occ_.end(), 0);
}

std::vector<int> FockState::to_vector() const {
  return std::vector<int>(occ_.begin(), occ_.end());
}

std::string FockState::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < occ_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(static_cast<int>(occ_[i]));
  }
  out += ']';
  return out;
}

FockBasis::FockBasis(int modes, int photons) : m_(modes), n_(photons) {
  size_ = basis_size(modes, photons);
  comp_.assign(static_cast<std::size_t>(m_ + 1) * (n_ + 1), 0);
  // comp[k][t] = comp[k-1][t] + comp[k][t-1]; every entry is bounded by
  // comp[m][n] = size_, which fits by construction.
  for (int k = 0; k <= m_; ++k) comp_[static_cast<std::size_t>(k) * (n_ + 1)] = 1;
  for (int k = 1; k <= m_; ++k) {
    for (int t = 1; t <= n_; ++t) {
      comp_[static_cast<std::size_t>(k) * (n_ + 1) + t] =
          checked_add(comp_[static_cast<std::size_t>(k - 1) * (n_ + 1) + t],
                      comp_[static_cast<std::size_t>(k) * (n_ + 1) + t - 1]);
    }
  }
}

std::uint64_t FockBasis::compositions(int modes, int photons) const {
  if (modes < 0 || modes > m_ || photons < 0 || photons > n_) {
    throw IndexOutOfRange("composition table index out of range");
  }
  return comp_[static_cast<std::size_t>(modes) * (n_ + 1) + photons];
}

std::uint64_t FockBasis::rank(const FockState& s) const {
  if (s.modes() != m_) throw DimensionMismatch("mode count mismatch");
  if (s.photon_count() != n_) throw DimensionMismatch("photon count mismatch");
  std::uint64_t r = 0;
  int rem = n_;
  for (int i = 0; i + 1 < m_; ++i) {
    const int si = s.raw()[static_cast<std::size_t>(i)];
    // States with a larger entry at mode i precede s.
    for (int j = si + 1; j <= rem; ++j) {
      r += comp_[static_cast<std::size_t>(m_ - 1 - i) * (n_ + 1) + (rem - j)];
    }
    rem -= si;
  }
  return r;
}

FockState FockBasis::unrank(std::uint64_t index) const {
  if (index >= size_) throw IndexOutOfRange("rank out of range");
  std::vector<int> occ(static_cast<std::size_t>(m_), 0);
  int rem = n_;
  for (int i = 0; i < m_; ++i) {
    if (i == m_ - 1) {
      occ[static_cast<std::size_t>(i)] = rem;
      break;
    }
    for (int j = rem; j >= 0; --j) {
      const std::uint64_t cnt =
          comp_[static_cast<std::size_t>(m_ - 1 - i) * (n_ + 1) + (rem - j)];
      if (index < cnt) {
        occ[static_cast<std::size_t>(i)] = j;
        rem -= j;
        break;
      }
      index -= cnt;
    }
  }
  return FockState(occ);
}

FockState FockBasis::first_state() const {
  std::vector<int> occ(static_cast<std::size_t>(m_), 0);
  occ[0] = n_;
  return FockState(occ);
}

bool FockBasis::next_state(FockState& s) const {
  // Descending-lex successor: decrement the rightmost nonzero entry left of
  // the final mode and move everything to its right (plus one) just after it.
  std::vector<int> occ = s.to_vector();
  int pivot = -1;
  for (int i = m_ - 2; i >= 0; --i) {
    if (occ[static_cast<std::size_t>(i)] > 0) {
      pivot = i;
      break;
    }
  }
  if (pivot < 0) return false;
  int moved = 1;
  for (int i = pivot + 1; i < m_; ++i) {
    moved += occ[static_cast<std::size_t>(i)];
    occ[static_cast<std::size_t>(i)] = 0;
  }
  occ[static_cast<std::size_t>(pivot)] -= 1;
  occ[static_cast<std::size_t>(pivot + 1)] = moved;
  s = FockState(occ);
  return true;
}

std::vector<FockState> FockBasis::enumerate() const {
  std::vector<FockState> out;
  out.reserve(static_cast<std::size_t>(size_));
  FockState s = first_state();
  out.push_back(s);
  while (next_state(s)) out.push_back(s);
  return out;
}

}  // namespace bosonflow
