// Copyright 2026 The mtdet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtdet/types.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace mtdet {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kDimension: return "dimension";
    case ErrorKind::kDuplicate: return "duplicate";
    case ErrorKind::kUnknownId: return "unknown-id";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kCoverage: return "coverage";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

IVector::IVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorKind::kDegenerate, "i-vector must have at least one dim");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::kFormat,
                  "non-finite i-vector entry at index " + std::to_string(i));
    }
  }
}

double IVector::Norm() const { return std::sqrt(Dot(values_, values_)); }

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

bool IsSpeakerPrefix(std::string_view prefix) {
  return prefix.size() == 4 &&
         std::all_of(prefix.begin(), prefix.end(),
                     [](char c) { return c >= 'a' && c <= 'z'; });
}

UtteranceId UtteranceId::Parse(std::string_view raw) {
  auto fail = [&](const char* why) {
    throw Error(ErrorKind::kFormat,
                "malformed utterance id '" + std::string(raw) + "': " + why);
  };
  if (raw.empty()) fail("empty");
  const std::size_t us = raw.find('_');
  if (us == std::string_view::npos) fail("no underscore");
  std::string_view prefix = raw.substr(0, us);
  std::string_view suffix = raw.substr(us + 1);
  if (prefix.size() != 4) fail("speaker prefix must be 4 characters");
  if (!IsSpeakerPrefix(prefix)) fail("speaker prefix must be lowercase letters");
  if (suffix.empty()) fail("empty session suffix");
  if (!std::all_of(suffix.begin(), suffix.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    fail("session suffix must be digits");
  }
  return UtteranceId(std::string(prefix), std::string(suffix));
}

GlobalId GlobalId::Parse(std::string_view raw) {
  if (raw.size() != 8 ||
      !std::all_of(raw.begin(), raw.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorKind::kFormat, "malformed blacklist speaker id '" +
                                        std::string(raw) +
                                        "': must be exactly 8 digits");
  }
  return GlobalId(std::string(raw));
}

GlobalId GlobalId::FromIndex(std::size_t n) {
  if (n >= 100000000) {
    throw Error(ErrorKind::kFormat,
                "speaker index " + std::to_string(n) + " exceeds 8 digits");
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%08zu", n);
  return GlobalId(buf);
}

const char* DatasetKindName(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kBlacklist: return "blacklist";
    case DatasetKind::kBackground: return "background";
    case DatasetKind::kMixed: return "mixed";
  }
  return "unknown";
}

void Dataset::Add(Utterance utt) {
  if (dim_ == 0) {
    dim_ = utt.vector.dim();
  } else if (utt.vector.dim() != dim_) {
    throw Error(ErrorKind::kDimension,
                "utterance " + utt.id.ToString() + " has dim " +
                    std::to_string(utt.vector.dim()) + ", dataset expects " +
                    std::to_string(dim_));
  }
  std::string key = utt.id.ToString();
  if (index_.count(key)) {
    throw Error(ErrorKind::kDuplicate, "duplicate utterance id " + key);
  }
  index_.emplace(std::move(key), utterances_.size());
  utterances_.push_back(std::move(utt));
}

bool Dataset::Contains(const UtteranceId& id) const {
  return index_.count(id.ToString()) > 0;
}

void SpeakerRegistry::Add(RegistryEntry entry) {
  for (const std::string* p : {&entry.dev_id, &entry.train_id}) {
    if (!IsSpeakerPrefix(*p)) {
      throw Error(ErrorKind::kFormat, "malformed speaker prefix '" + *p + "'");
    }
  }
  if (by_global_.count(entry.global_id.str())) {
    throw Error(ErrorKind::kDuplicate,
                "duplicate blacklist id " + entry.global_id.str());
  }
  if (by_dev_.count(entry.dev_id)) {
    throw Error(ErrorKind::kDuplicate, "duplicate dev id " + entry.dev_id);
  }
  if (by_train_.count(entry.train_id)) {
    throw Error(ErrorKind::kDuplicate, "duplicate train id " + entry.train_id);
  }
  const std::size_t idx = entries_.size();
  by_global_.emplace(entry.global_id.str(), idx);
  by_dev_.emplace(entry.dev_id, idx);
  by_train_.emplace(entry.train_id, idx);
  entries_.push_back(std::move(entry));
}

std::optional<GlobalId> SpeakerRegistry::SpeakerOf(std::string_view prefix,
                                                   SpeakerSet set) const {
  const auto& column = set == SpeakerSet::kDev ? by_dev_ : by_train_;
  auto it = column.find(prefix);
  if (it == column.end()) return std::nullopt;
  return entries_[it->second].global_id;
}

bool SpeakerRegistry::Contains(const GlobalId& id) const {
  return by_global_.count(id.str()) > 0;
}

void GroundTruthKey::Add(UtteranceId utterance,
                         std::optional<GlobalId> speaker) {
  std::string k = utterance.ToString();
  if (index_.count(k)) {
    throw Error(ErrorKind::kDuplicate, "duplicate key utterance " + k);
  }
  index_.emplace(std::move(k), entries_.size());
  entries_.push_back({std::move(utterance), std::move(speaker)});
}

void GroundTruthKey::Validate(const SpeakerRegistry& registry) const {
  for (const Entry& e : entries_) {
    if (e.speaker && !registry.Contains(*e.speaker)) {
      throw Error(ErrorKind::kUnknownId,
                  "key utterance " + e.utterance.ToString() +
                      " references unknown blacklist id " + e.speaker->str());
    }
  }
}

const GroundTruthKey::Entry* GroundTruthKey::Find(const UtteranceId& id) const {
  auto it = index_.find(id.ToString());
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::size_t GroundTruthKey::BlacklistCount() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(),
                    [](const Entry& e) { return e.speaker.has_value(); }));
}

}  // namespace mtdet
