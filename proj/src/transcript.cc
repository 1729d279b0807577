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

#include "paczero/transcript.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <set>
#include <string_view>

#include "paczero/errors.h"

namespace paczero {
namespace {

using nlohmann::json;

void RequireExactFields(const json& object,
                        std::initializer_list<std::string_view> fields,
                        std::string_view what) {
  if (!object.is_object()) {
    throw SchemaError(std::string(what) + " must be a JSON object");
  }
  const std::set<std::string_view> allowed(fields);
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw SchemaError("unknown field '" + key + "' in " + std::string(what));
    }
  }
  for (std::string_view field : fields) {
    if (!object.contains(field)) {
      throw SchemaError("missing field '" + std::string(field) + "' in " +
                        std::string(what));
    }
  }
}

template <typename T>
T Get(const json& object, const char* field) {
  try {
    return object.at(field).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("field '") + field + "': " + e.what());
  }
}

std::optional<double> GetOptionalNumber(const json& object, const char* field) {
  const json& value = object.at(field);
  if (value.is_null()) return std::nullopt;
  if (!value.is_number()) {
    throw SchemaError(std::string("field '") + field + "' must be a number");
  }
  return value.get<double>();
}

json OptionalToJson(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

std::uint64_t HexToHash(const std::string& hex) {
  if (hex.size() != 16) throw SchemaError("design_hash must be 16 hex digits");
  std::uint64_t hash = 0;
  for (char c : hex) {
    hash <<= 4;
    if (c >= '0' && c <= '9') {
      hash |= static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      hash |= static_cast<std::uint64_t>(c - 'a' + 10);
    } else {
      throw SchemaError("design_hash must be lowercase hex");
    }
  }
  return hash;
}

}  // namespace

std::string HashToHex(std::uint64_t hash) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

std::vector<const StepRecord*> Transcript::RecordsAt(int step) const {
  std::vector<const StepRecord*> out;
  for (const StepRecord& record : records) {
    if (record.step == step) out.push_back(&record);
  }
  return out;
}

json ToJson(const TranscriptHeader& header) {
  json object;
  object["type"] = "header";
  object["format"] = kTranscriptFormat;
  object["variant"] = ToString(header.variant);
  object["surrogate"] =
      header.surrogate ? json(ToString(*header.surrogate)) : json(nullptr);
  object["mi_total"] = header.mi_total;
  object["steps"] = header.steps;
  object["k"] = header.k;
  object["num_records"] = header.num_records;
  object["num_subsets"] = header.num_subsets;
  object["unanimity_tolerance"] = header.unanimity_tolerance;
  object["clip"] = std::isinf(header.clip) ? json(nullptr) : json(header.clip);
  object["seed"] = header.seed;
  object["design_hash"] = HashToHex(header.design_hash);
  object["private"] = header.IsPrivate();
  object["config"] = header.config;
  return object;
}

json ToJson(const StepRecord& record) {
  json object;
  object["type"] = "step";
  object["step"] = record.step;
  object["direction"] = record.direction;
  object["branch"] = ToString(record.branch);
  object["q_plus"] = record.q_plus;
  object["beta"] = record.beta;
  object["sigma"] = OptionalToJson(record.sigma);
  object["released_bit"] = record.released_bit;
  object["release"] = record.release;
  object["pre_quant_release"] = OptionalToJson(record.pre_quant_release);
  object["beta_used"] = record.beta_used;
  object["cumulative_mi"] = record.cumulative_mi;
  object["unanimity_count"] = record.unanimity_count;
  object["signs"] = record.signs;
  return object;
}

TranscriptHeader HeaderFromJson(const json& object) {
  RequireExactFields(object,
                     {"type", "format", "variant", "surrogate", "mi_total",
                      "steps", "k", "num_records", "num_subsets",
                      "unanimity_tolerance", "clip", "seed", "design_hash",
                      "private", "config"},
                     "transcript header");
  if (Get<std::string>(object, "type") != "header") {
    throw SchemaError("first transcript line must be the header");
  }
  if (Get<std::string>(object, "format") != kTranscriptFormat) {
    throw SchemaError("unsupported transcript format");
  }
  TranscriptHeader header;
  header.variant = ParseVariant(Get<std::string>(object, "variant"));
  if (!object.at("surrogate").is_null()) {
    header.surrogate =
        ParseSurrogateMode(Get<std::string>(object, "surrogate"));
  }
  header.mi_total = Get<double>(object, "mi_total");
  header.steps = Get<int>(object, "steps");
  header.k = Get<int>(object, "k");
  header.num_records = Get<std::size_t>(object, "num_records");
  header.num_subsets = Get<std::size_t>(object, "num_subsets");
  header.unanimity_tolerance = Get<double>(object, "unanimity_tolerance");
  header.clip = GetOptionalNumber(object, "clip").value_or(kNoClip);
  header.seed = Get<std::uint64_t>(object, "seed");
  header.design_hash = HexToHash(Get<std::string>(object, "design_hash"));
  if (Get<bool>(object, "private") != header.IsPrivate()) {
    throw SchemaError("'private' flag contradicts the variant");
  }
  header.config = object.at("config");
  return header;
}

StepRecord StepRecordFromJson(const json& object) {
  RequireExactFields(object,
                     {"type", "step", "direction", "branch", "q_plus", "beta",
                      "sigma", "released_bit", "release", "pre_quant_release",
                      "beta_used", "cumulative_mi", "unanimity_count", "signs"},
                     "step record");
  if (Get<std::string>(object, "type") != "step") {
    throw SchemaError("expected a step record");
  }
  StepRecord record;
  record.step = Get<int>(object, "step");
  record.direction = Get<int>(object, "direction");
  record.branch = ParseBranch(Get<std::string>(object, "branch"));
  record.q_plus = Get<double>(object, "q_plus");
  record.beta = Get<double>(object, "beta");
  record.sigma = GetOptionalNumber(object, "sigma");
  record.released_bit = Get<int>(object, "released_bit");
  if (record.released_bit != 1 && record.released_bit != -1) {
    throw SchemaError("released_bit must be +1 or -1");
  }
  record.release = Get<double>(object, "release");
  record.pre_quant_release = GetOptionalNumber(object, "pre_quant_release");
  record.beta_used = Get<double>(object, "beta_used");
  record.cumulative_mi = Get<double>(object, "cumulative_mi");
  record.unanimity_count = Get<int>(object, "unanimity_count");
  record.signs = Get<std::string>(object, "signs");
  return record;
}

void WriteTranscript(std::ostream& out, const Transcript& transcript) {
  out << ToJson(transcript.header).dump() << '\n';
  for (const StepRecord& record : transcript.records) {
    out << ToJson(record).dump() << '\n';
  }
}

Transcript ReadTranscript(std::istream& in) {
  Transcript transcript;
  std::string line;
  bool have_header = false;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError("line " + std::to_string(line_number) +
                        ": invalid JSON: " + e.what());
    }
    if (!have_header) {
      transcript.header = HeaderFromJson(object);
      have_header = true;
    } else {
      transcript.records.push_back(StepRecordFromJson(object));
    }
  }
  if (!have_header) throw SchemaError("transcript has no header line");
  return transcript;
}

void WriteTranscriptFile(const std::string& path, const Transcript& transcript) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  WriteTranscript(out, transcript);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Transcript ReadTranscriptFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return ReadTranscript(in);
}

}  // namespace paczero
