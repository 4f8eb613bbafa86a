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

// Readers and writers for the challenge's text formats:
//
//   i-vector CSV   <utt_id>,<v1>,...,<vD>
//   bl_matching    <8-digit id>,dev_<prefix>,train_<prefix>
//   submission     <utt_id>,<score>,<8-digit id>
//   key            <utt_id>,<8-digit id | background>
//
// All readers accept LF or CRLF line endings, skip blank lines, tolerate
// spaces around commas and report errors with 1-based line numbers.

#ifndef MTDET_INGESTION_H_
#define MTDET_INGESTION_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtdet/types.h"

namespace mtdet {

Dataset ReadIVectorCsv(std::istream& in,
                       std::optional<std::size_t> expected_dim = std::nullopt,
                       std::string name = "", DatasetKind kind =
                                                  DatasetKind::kMixed);
// Values are written in shortest round-trip form, so a re-read is exact.
void WriteIVectorCsv(std::ostream& out, const Dataset& ds);

SpeakerRegistry ReadBlMatching(std::istream& in);
void WriteBlMatching(std::ostream& out, const SpeakerRegistry& registry);

struct SubmissionRow {
  UtteranceId utterance;
  double score;
  GlobalId claimed_speaker;
};

// One row per test utterance, ids unique, claimed speakers known to the
// registry they were validated against.
class Submission {
 public:
  // Throws Error(kDuplicate) or Error(kFormat) for a non-finite score.
  void Add(SubmissionRow row);

  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const std::vector<SubmissionRow>& rows() const { return rows_; }

 private:
  std::vector<SubmissionRow> rows_;
  std::map<UtteranceId, std::size_t> index_;
};

Submission ReadSubmission(std::istream& in, const SpeakerRegistry& registry);
void WriteSubmission(std::ostream& out, const Submission& sub);

GroundTruthKey ReadKey(std::istream& in);
void WriteKey(std::ostream& out, const GroundTruthKey& key);

inline constexpr const char* kBackgroundLabel = "background";

// Expected shape of a dataset. Utterances per speaker are either exact or a
// lower bound.
struct DatasetProfile {
  std::size_t expected_speakers = 0;
  std::size_t expected_utts_per_speaker = 0;
  bool utts_is_lower_bound = false;
  std::size_t expected_total_utts = 0;

  // Profiles of the full challenge corpus.
  static DatasetProfile TrainBlacklist();   // 3631 x 3 = 10893
  static DatasetProfile TrainBackground();  // 5000 x >=4, 30952 total
  static DatasetProfile DevBlacklist();     // 3631 x 1
  static DatasetProfile DevBackground();    // 5000 x 1
};

struct ProfileReport {
  std::string dataset;
  std::size_t speaker_count = 0;
  std::map<std::string, std::size_t> utts_per_speaker;  // keyed by prefix
  std::size_t total_utts = 0;
  std::vector<std::string> deviations;

  bool pass() const { return deviations.empty(); }
  // Multi-line human-readable summary ending in PASS or FAIL.
  std::string ToString() const;
};

// Never throws on nonconforming data; every mismatch becomes a deviation.
// Throws Error(kFormat) only for an invalid profile (a zero count).
ProfileReport ValidateProfile(const Dataset& ds, const DatasetProfile& profile);

// Shortest decimal rendering of `value` that parses back to the same double.
std::string FormatReal(double value);

}  // namespace mtdet

#endif  // MTDET_INGESTION_H_
