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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bosonflow/errors.hpp"

namespace bosonflow {

/// Number of n-photon Fock states on `modes` modes: C(modes+n-1, n).
/// Throws OverflowError if the count does not fit in 64 bits.
std::uint64_t basis_size(int modes, int photons);

/// Occupation-number state of a fixed number of optical modes.
///
/// Occupations are stored as 8-bit counts; more than 255 photons in a
/// single mode is rejected at construction.
class FockState {
 public:
  FockState() = default;
  explicit FockState(const std::vector<int>& occupations);

  /// Parses the bracketed text form, e.g. "[1,0,2]".
  static FockState parse(std::string_view text);

  int modes() const { return static_cast<int>(occ_.size()); }
  int occupation(int mode) const;
  int photon_count() const;
  std::vector<int> to_vector() const;
  std::string to_string() const;

  const std::vector<std::uint8_t>& raw() const { return occ_; }

  bool operator==(const FockState& other) const { return occ_ == other.occ_; }
  bool operator!=(const FockState& other) const { return occ_ != other.occ_; }

 private:
  std::vector<std::uint8_t> occ_;
};

/// The n-photon, m-mode Fock basis under the canonical total order:
/// lexicographically descending on the occupation vector with mode 0 most
/// significant, so (n,0,...,0) has rank 0 and (0,...,0,n) has rank size-1.
///
/// Immutable after construction; all operations are pure and safe to call
/// from concurrent readers.
class FockBasis {
 public:
  FockBasis(int modes, int photons);

  int modes() const { return m_; }
  int photons() const { return n_; }
  std::uint64_t size() const { return size_; }

  /// Position of `s` in the canonical order. O(m*n) arithmetic.
  std::uint64_t rank(const FockState& s) const;

  /// Inverse of rank.
  FockState unrank(std::uint64_t index) const;

  /// All states in canonical order (strictly increasing rank).
  std::vector<FockState> enumerate() const;

  /// First state of the canonical order: (n, 0, ..., 0).
  FockState first_state() const;

  /// Advances `s` to its successor in canonical order.
  /// Returns false (leaving `s` untouched) when `s` is the last state.
  bool next_state(FockState& s) const;

  /// Weak compositions of `photons` into `modes` parts; entries of the
  /// table backing rank/unrank.
  std::uint64_t compositions(int modes, int photons) const;

  bool operator==(const FockBasis& other) const {
    return m_ == other.m_ && n_ == other.n_;
  }

 private:
  int m_ = 0;
  int n_ = 0;
  std::uint64_t size_ = 1;
  // comp_[k * (n_+1) + t] = number of weak compositions of t into k parts.
  std::vector<std::uint64_t> comp_;
};

}  // namespace bosonflow
