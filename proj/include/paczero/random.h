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

#ifndef PACZERO_RANDOM_H_
#define PACZERO_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace paczero {

using Engine = std::mt19937_64;

// Independent sub-streams derived from one master seed. Directions are
// public; the adversary regenerates them without touching the others.
enum class Stream : std::uint32_t {
  kDirections = 1,
  kMechanism = 2,
  kDesign = 3,
  kSecret = 4,
  kTaskData = 5,
  kAttack = 6,
  kTrial = 7,
};

// Engine keyed by (seed, stream, counters...). Keys are mixed through
// std::seed_seq, so any counter tuple gives random access into the stream.
Engine MakeEngine(std::uint64_t seed, Stream stream,
                  std::initializer_list<std::uint64_t> counters = {});

// Derives a 64-bit child seed, e.g. one per trial of an experiment.
std::uint64_t DeriveSeed(std::uint64_t seed, Stream stream,
                         std::initializer_list<std::uint64_t> counters = {});

}  // namespace paczero

#endif  // PACZERO_RANDOM_H_
