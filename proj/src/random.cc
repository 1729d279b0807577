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

#include "paczero/random.h"

#include <vector>

namespace paczero {
namespace {

std::vector<std::uint32_t> KeyWords(
    std::uint64_t seed, Stream stream,
    std::initializer_list<std::uint64_t> counters) {
  std::vector<std::uint32_t> words;
  words.reserve(3 + 2 * counters.size());
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  words.push_back(static_cast<std::uint32_t>(stream));
  for (std::uint64_t c : counters) {
    words.push_back(static_cast<std::uint32_t>(c));
    words.push_back(static_cast<std::uint32_t>(c >> 32));
  }
  return words;
}

}  // namespace

Engine MakeEngine(std::uint64_t seed, Stream stream,
                  std::initializer_list<std::uint64_t> counters) {
  const std::vector<std::uint32_t> words = KeyWords(seed, stream, counters);
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

std::uint64_t DeriveSeed(std::uint64_t seed, Stream stream,
                         std::initializer_list<std::uint64_t> counters) {
  Engine engine = MakeEngine(seed, stream, counters);
  return engine();
}

}  // namespace paczero
