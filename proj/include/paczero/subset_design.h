//
// Copyright 2026 The paczero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PACZERO_SUBSET_DESIGN_H_
#define PACZERO_SUBSET_DESIGN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace paczero {

// M candidate training subsets over a universe of N records, every record
// belonging to exactly M/2 of them and no subset empty.
class SubsetDesign {
 public:
  // membership is N x M row-major (record-major). Throws DomainError when the
  // balance or nonempty invariants fail.
  SubsetDesign(std::size_t num_records, std::size_t num_subsets,
               std::vector<std::uint8_t> membership);

  std::size_t num_records() const { return num_records_; }
  std::size_t num_subsets() const { return num_subsets_; }

  bool Contains(std::size_t subset, std::size_t record) const {
    return membership_[record * num_subsets_ + subset] != 0;
  }
  // Members of subset m in ascending record order.
  std::span<const std::size_t> members(std::size_t subset) const {
    return members_[subset];
  }

  // FNV-1a over (N, M, membership); stable across platforms.
  std::uint64_t Hash() const;

 private:
  std::size_t num_records_;
  std::size_t num_subsets_;
  std::vector<std::uint8_t> membership_;
  std::vector<std::vector<std::size_t>> members_;
};

// Each record independently receives a uniformly random size-M/2 set of
// subsets. Redraws (next sub-seed) while any subset is empty, at most 100
// times. Throws DomainError for odd M, M < 2, N < 1 or exhausted attempts.
SubsetDesign BuildBalancedDesign(std::size_t num_records,
                                 std::size_t num_subsets, std::uint64_t seed);

}  // namespace paczero

#endif  // PACZERO_SUBSET_DESIGN_H_
