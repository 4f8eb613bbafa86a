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

// Core value types: i-vectors, utterance/speaker identifiers, datasets, the
// blacklist speaker registry and ground-truth keys.

#ifndef MTDET_TYPES_H_
#define MTDET_TYPES_H_

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mtdet/error.h"

namespace mtdet {

inline constexpr std::size_t kDefaultIVectorDim = 600;

// A fixed-dimension real feature vector. Always nonempty and finite.
class IVector {
 public:
  // Throws Error(kDegenerate) on empty input and Error(kFormat) on a
  // non-finite entry.
  explicit IVector(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double Norm() const;

  friend bool operator==(const IVector&, const IVector&) = default;

 private:
  std::vector<double> values_;
};

double Dot(std::span<const double> a, std::span<const double> b);

// `<prefix>_<suffix>` where prefix is four lowercase letters naming the
// speaker and suffix is a nonempty digit string.
class UtteranceId {
 public:
  // Splits at the first underscore. Throws Error(kFormat) naming the token.
  static UtteranceId Parse(std::string_view raw);

  const std::string& speaker_prefix() const { return prefix_; }
  const std::string& session_suffix() const { return suffix_; }
  std::string ToString() const { return prefix_ + "_" + suffix_; }

  friend auto operator<=>(const UtteranceId&, const UtteranceId&) = default;

 private:
  UtteranceId(std::string prefix, std::string suffix)
      : prefix_(std::move(prefix)), suffix_(std::move(suffix)) {}

  std::string prefix_;
  std::string suffix_;
};

// Checks that `prefix` is a four-letter lowercase speaker token.
bool IsSpeakerPrefix(std::string_view prefix);

// 8-digit blacklist speaker id, e.g. "50399530". Leading zeros significant.
class GlobalId {
 public:
  static GlobalId Parse(std::string_view raw);
  // Zero-padded rendering of n; n must be < 10^8.
  static GlobalId FromIndex(std::size_t n);

  const std::string& str() const { return value_; }

  friend auto operator<=>(const GlobalId&, const GlobalId&) = default;

 private:
  explicit GlobalId(std::string value) : value_(std::move(value)) {}
  std::string value_;
};

struct Utterance {
  UtteranceId id;
  IVector vector;
};

enum class DatasetKind { kBlacklist, kBackground, kMixed };

const char* DatasetKindName(DatasetKind kind);

// Ordered collection of utterances sharing one dimension, ids unique.
// dim() is 0 until the first utterance fixes it (unless given up front).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::string name, DatasetKind kind, std::size_t dim = 0)
      : name_(std::move(name)), kind_(kind), dim_(dim) {}

  // Throws Error(kDimension) or Error(kDuplicate).
  void Add(Utterance utt);

  const std::string& name() const { return name_; }
  DatasetKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return utterances_.size(); }
  bool empty() const { return utterances_.empty(); }
  const std::vector<Utterance>& utterances() const { return utterances_; }
  const Utterance& operator[](std::size_t i) const { return utterances_[i]; }

  bool Contains(const UtteranceId& id) const;

 private:
  std::string name_;
  DatasetKind kind_ = DatasetKind::kMixed;
  std::size_t dim_ = 0;
  std::vector<Utterance> utterances_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class SpeakerSet { kTrain, kDev };

struct RegistryEntry {
  GlobalId global_id;
  std::string dev_id;    // 4-letter prefix, without the "dev_" marker
  std::string train_id;  // 4-letter prefix, without the "train_" marker
};

// Links each blacklist speaker's global id to its dev-set and train-set
// prefixes. Background speakers are simply absent. The dev and train columns
// are independent namespaces.
class SpeakerRegistry {
 public:
  // Throws Error(kFormat) on a bad prefix, Error(kDuplicate) if any of the
  // three ids is already present in its column.
  void Add(RegistryEntry entry);

  std::optional<GlobalId> SpeakerOf(std::string_view prefix,
                                    SpeakerSet set) const;
  std::optional<GlobalId> SpeakerOf(const UtteranceId& id,
                                    SpeakerSet set) const {
    return SpeakerOf(id.speaker_prefix(), set);
  }
  bool Contains(const GlobalId& id) const;

  std::size_t size() const { return entries_.size(); }
  const std::vector<RegistryEntry>& entries() const { return entries_; }

 private:
  std::vector<RegistryEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> by_global_;
  std::map<std::string, std::size_t, std::less<>> by_dev_;
  std::map<std::string, std::size_t, std::less<>> by_train_;
};

// Truth for each test utterance: a blacklist global id, or nullopt for a
// background (non-blacklist) speaker. Insertion order is preserved.
class GroundTruthKey {
 public:
  struct Entry {
    UtteranceId utterance;
    std::optional<GlobalId> speaker;
  };

  // Throws Error(kDuplicate) on a repeated utterance id.
  void Add(UtteranceId utterance, std::optional<GlobalId> speaker);

  // Throws Error(kUnknownId) naming the first id missing from `registry`.
  void Validate(const SpeakerRegistry& registry) const;

  // nullptr when the utterance is not in the key.
  const Entry* Find(const UtteranceId& id) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t BlacklistCount() const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace mtdet

#endif  // MTDET_TYPES_H_
