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

#include "paczero/subset_design.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "paczero/errors.h"
#include "paczero/random.h"

namespace paczero {
namespace {

constexpr int kMaxDesignAttempts = 100;

void CheckShape(std::size_t num_records, std::size_t num_subsets) {
  if (num_records < 1) throw DomainError("design needs N >= 1");
  if (num_subsets < 2 || num_subsets % 2 != 0) {
    throw DomainError("design needs an even M >= 2, got " +
                      std::to_string(num_subsets));
  }
}

}  // namespace

SubsetDesign::SubsetDesign(std::size_t num_records, std::size_t num_subsets,
                           std::vector<std::uint8_t> membership)
    : num_records_(num_records),
      num_subsets_(num_subsets),
      membership_(std::move(membership)),
      members_(num_subsets) {
  CheckShape(num_records, num_subsets);
  if (membership_.size() != num_records * num_subsets) {
    throw DomainError("membership matrix has the wrong size");
  }
  for (std::size_t i = 0; i < num_records_; ++i) {
    std::size_t row_sum = 0;
    for (std::size_t m = 0; m < num_subsets_; ++m) {
      if (Contains(m, i)) {
        ++row_sum;
        members_[m].push_back(i);
      }
    }
    if (row_sum != num_subsets_ / 2) {
      throw DomainError("record " + std::to_string(i) + " belongs to " +
                        std::to_string(row_sum) + " subsets, expected M/2");
    }
  }
  for (std::size_t m = 0; m < num_subsets_; ++m) {
    if (members_[m].empty()) {
      throw DomainError("subset " + std::to_string(m) + " is empty");
    }
  }
}

std::uint64_t SubsetDesign::Hash() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](std::uint64_t byte) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  };
  for (std::uint64_t value : {static_cast<std::uint64_t>(num_records_),
                              static_cast<std::uint64_t>(num_subsets_)}) {
    for (int shift = 0; shift < 64; shift += 8) mix((value >> shift) & 0xff);
  }
  for (std::uint8_t cell : membership_) mix(cell);
  return hash;
}

SubsetDesign BuildBalancedDesign(std::size_t num_records,
                                 std::size_t num_subsets, std::uint64_t seed) {
  CheckShape(num_records, num_subsets);
  std::vector<std::size_t> order(num_subsets);
  for (int attempt = 0; attempt < kMaxDesignAttempts; ++attempt) {
    Engine engine = MakeEngine(seed, Stream::kDesign,
                               {static_cast<std::uint64_t>(attempt)});
    std::vector<std::uint8_t> membership(num_records * num_subsets, 0);
    std::vector<std::size_t> column_sums(num_subsets, 0);
    for (std::size_t i = 0; i < num_records; ++i) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), engine);
      for (std::size_t k = 0; k < num_subsets / 2; ++k) {
        membership[i * num_subsets + order[k]] = 1;
        ++column_sums[order[k]];
      }
    }
    if (std::find(column_sums.begin(), column_sums.end(), 0) ==
        column_sums.end()) {
      return SubsetDesign(num_records, num_subsets, std::move(membership));
    }
  }
  throw DomainError("could not draw a design without empty subsets in " +
                    std::to_string(kMaxDesignAttempts) + " attempts");
}

}  // namespace paczero
