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

#ifndef PACZERO_TRANSCRIPT_H_
#define PACZERO_TRANSCRIPT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "paczero/mechanism.h"

namespace paczero {

inline constexpr const char* kTranscriptFormat = "paczero-transcript/1";

struct TranscriptHeader {
  Variant variant = Variant::kPacZeroMi;
  std::optional<SurrogateMode> surrogate;
  double mi_total = 0.0;
  int steps = 0;
  int k = 1;
  std::size_t num_records = 0;
  std::size_t num_subsets = 0;
  double unanimity_tolerance = kDefaultUnanimityTolerance;
  double clip = kNoClip;
  std::uint64_t seed = 0;
  std::uint64_t design_hash = 0;
  nlohmann::json config = nlohmann::json::object();  // full config echo

  bool IsPrivate() const { return variant != Variant::kSurrogate; }
};

struct Transcript {
  TranscriptHeader header;
  std::vector<StepRecord> records;

  // Releases at 1-based step t (K records for aggregated runs).
  std::vector<const StepRecord*> RecordsAt(int step) const;
};

nlohmann::json ToJson(const TranscriptHeader& header);
nlohmann::json ToJson(const StepRecord& record);
// Strict: missing, mistyped or unknown fields throw SchemaError.
TranscriptHeader HeaderFromJson(const nlohmann::json& object);
StepRecord StepRecordFromJson(const nlohmann::json& object);

// One JSON object per line: the header, then one line per release.
void WriteTranscript(std::ostream& out, const Transcript& transcript);
Transcript ReadTranscript(std::istream& in);
void WriteTranscriptFile(const std::string& path, const Transcript& transcript);
Transcript ReadTranscriptFile(const std::string& path);

std::string HashToHex(std::uint64_t hash);

}  // namespace paczero

#endif  // PACZERO_TRANSCRIPT_H_
