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

#include "mtdet/ingestion.h"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace mtdet {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Iterates the comma-separated fields of one line.
class FieldCursor {
 public:
  explicit FieldCursor(std::string_view line) : rest_(line) {}

  bool Next(std::string_view* field) {
    if (done_) return false;
    const std::size_t comma = rest_.find(',');
    if (comma == std::string_view::npos) {
      *field = Trim(rest_);
      done_ = true;
    } else {
      *field = Trim(rest_.substr(0, comma));
      rest_.remove_prefix(comma + 1);
    }
    return true;
  }

 private:
  std::string_view rest_;
  bool done_ = false;
};

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  FieldCursor cursor(line);
  std::string_view f;
  while (cursor.Next(&f)) fields.push_back(f);
  return fields;
}

double ParseReal(std::string_view token, std::size_t line) {
  std::string_view digits = token;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                   value, std::chars_format::general);
  if (digits.empty() || ec != std::errc() ||
      ptr != digits.data() + digits.size()) {
    throw ParseError(ErrorKind::kFormat, line,
                     "non-numeric field '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(ErrorKind::kFormat, line,
                     "non-finite value '" + std::string(token) + "'");
  }
  return value;
}

// Rethrows a field-level Error with the line number attached.
template <typename F>
auto AtLine(std::size_t line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.kind(), line, e.what());
  }
}

// Calls fn(line_number, line) for each non-blank line.
template <typename Fn>
void ForEachLine(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = Trim(line);
    if (view.empty()) continue;
    fn(number, view);
  }
}

}  // namespace

std::string FormatReal(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Dataset ReadIVectorCsv(std::istream& in, std::optional<std::size_t> expected_dim,
                       std::string name, DatasetKind kind) {
  Dataset ds(std::move(name), kind, expected_dim.value_or(0));
  std::vector<double> values;
  ForEachLine(in, [&](std::size_t number, std::string_view line) {
    FieldCursor cursor(line);
    std::string_view field;
    cursor.Next(&field);
    UtteranceId id = AtLine(number, [&] { return UtteranceId::Parse(field); });
    values.clear();
    if (ds.dim() > 0) values.reserve(ds.dim());
    while (cursor.Next(&field)) values.push_back(ParseReal(field, number));
    if (ds.dim() > 0 && values.size() != ds.dim()) {
      throw ParseError(ErrorKind::kDimension, number,
                       "expected " + std::to_string(ds.dim()) +
                           " values, found " + std::to_string(values.size()));
    }
    AtLine(number, [&] {
      ds.Add(Utterance{std::move(id), IVector(values)});
      return 0;
    });
  });
  return ds;
}

void WriteIVectorCsv(std::ostream& out, const Dataset& ds) {
  for (const Utterance& u : ds.utterances()) {
    out << u.id.ToString();
    for (double v : u.vector.values()) out << ',' << FormatReal(v);
    out << '\n';
  }
}

SpeakerRegistry ReadBlMatching(std::istream& in) {
  SpeakerRegistry registry;
  ForEachLine(in, [&](std::size_t number, std::string_view line) {
    auto fields = SplitFields(line);
    if (fields.size() != 3) {
      throw ParseError(ErrorKind::kFormat, number,
                       "expected 3 fields, found " +
                           std::to_string(fields.size()));
    }
    auto strip = [&](std::string_view f, std::string_view marker) {
      if (f.substr(0, marker.size()) != marker) {
        throw ParseError(ErrorKind::kFormat, number,
                         "field '" + std::string(f) + "' lacks '" +
                             std::string(marker) + "' marker");
      }
      return std::string(f.substr(marker.size()));
    };
    GlobalId global = AtLine(number, [&] { return GlobalId::Parse(fields[0]); });
    std::string dev = strip(fields[1], "dev_");
    std::string train = strip(fields[2], "train_");
    AtLine(number, [&] {
      registry.Add({std::move(global), std::move(dev), std::move(train)});
      return 0;
    });
  });
  return registry;
}

void WriteBlMatching(std::ostream& out, const SpeakerRegistry& registry) {
  for (const RegistryEntry& e : registry.entries()) {
    out << e.global_id.str() << ",dev_" << e.dev_id << ",train_" << e.train_id
        << '\n';
  }
}

void Submission::Add(SubmissionRow row) {
  if (!std::isfinite(row.score)) {
    throw Error(ErrorKind::kFormat,
                "non-finite score for " + row.utterance.ToString());
  }
  if (index_.count(row.utterance)) {
    throw Error(ErrorKind::kDuplicate,
                "duplicate submission row for " + row.utterance.ToString());
  }
  index_.emplace(row.utterance, rows_.size());
  rows_.push_back(std::move(row));
}

Submission ReadSubmission(std::istream& in, const SpeakerRegistry& registry) {
  Submission sub;
  ForEachLine(in, [&](std::size_t number, std::string_view line) {
    auto fields = SplitFields(line);
    if (fields.size() != 3) {
      throw ParseError(ErrorKind::kFormat, number,
                       "expected 3 fields, found " +
                           std::to_string(fields.size()));
    }
    UtteranceId id = AtLine(number, [&] { return UtteranceId::Parse(fields[0]); });
    double score = ParseReal(fields[1], number);
    GlobalId claimed = AtLine(number, [&] { return GlobalId::Parse(fields[2]); });
    if (!registry.Contains(claimed)) {
      throw ParseError(ErrorKind::kUnknownId, number,
                       "unknown blacklist speaker id " + claimed.str());
    }
    AtLine(number, [&] {
      sub.Add({std::move(id), score, std::move(claimed)});
      return 0;
    });
  });
  return sub;
}

void WriteSubmission(std::ostream& out, const Submission& sub) {
  for (const SubmissionRow& r : sub.rows()) {
    out << r.utterance.ToString() << ',' << FormatReal(r.score) << ','
        << r.claimed_speaker.str() << '\n';
  }
}

GroundTruthKey ReadKey(std::istream& in) {
  GroundTruthKey key;
  ForEachLine(in, [&](std::size_t number, std::string_view line) {
    auto fields = SplitFields(line);
    if (fields.size() != 2) {
      throw ParseError(ErrorKind::kFormat, number,
                       "expected 2 fields, found " +
                           std::to_string(fields.size()));
    }
    UtteranceId id = AtLine(number, [&] { return UtteranceId::Parse(fields[0]); });
    std::optional<GlobalId> speaker;
    if (fields[1] != kBackgroundLabel) {
      speaker = AtLine(number, [&] { return GlobalId::Parse(fields[1]); });
    }
    AtLine(number, [&] {
      key.Add(std::move(id), std::move(speaker));
      return 0;
    });
  });
  return key;
}

void WriteKey(std::ostream& out, const GroundTruthKey& key) {
  for (const auto& e : key.entries()) {
    out << e.utterance.ToString() << ','
        << (e.speaker ? e.speaker->str() : std::string(kBackgroundLabel))
        << '\n';
  }
}

DatasetProfile DatasetProfile::TrainBlacklist() { return {3631, 3, false, 10893}; }
DatasetProfile DatasetProfile::TrainBackground() { return {5000, 4, true, 30952}; }
DatasetProfile DatasetProfile::DevBlacklist() { return {3631, 1, false, 3631}; }
DatasetProfile DatasetProfile::DevBackground() { return {5000, 1, false, 5000}; }

std::string ProfileReport::ToString() const {
  std::ostringstream os;
  os << dataset << ": " << speaker_count << " speakers, " << total_utts
     << " utterances";
  if (!utts_per_speaker.empty()) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& [prefix, n] : utts_per_speaker) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    os << ", " << lo;
    if (hi != lo) os << "-" << hi;
    os << " per speaker";
  }
  os << '\n';
  constexpr std::size_t kMaxListed = 20;
  for (std::size_t i = 0; i < deviations.size() && i < kMaxListed; ++i) {
    os << "  - " << deviations[i] << '\n';
  }
  if (deviations.size() > kMaxListed) {
    os << "  ... and " << deviations.size() - kMaxListed << " more\n";
  }
  os << (pass() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

ProfileReport ValidateProfile(const Dataset& ds, const DatasetProfile& profile) {
  if (profile.expected_speakers == 0 || profile.expected_utts_per_speaker == 0 ||
      profile.expected_total_utts == 0) {
    throw Error(ErrorKind::kFormat, "dataset profile counts must be positive");
  }
  ProfileReport report;
  report.dataset = ds.name().empty() ? "dataset" : ds.name();
  for (const Utterance& u : ds.utterances()) {
    ++report.utts_per_speaker[u.id.speaker_prefix()];
  }
  report.speaker_count = report.utts_per_speaker.size();
  for (const auto& [prefix, n] : report.utts_per_speaker) {
    report.total_utts += n;
    const bool ok = profile.utts_is_lower_bound
                        ? n >= profile.expected_utts_per_speaker
                        : n == profile.expected_utts_per_speaker;
    if (!ok) {
      report.deviations.push_back(
          "speaker " + prefix + " has " + std::to_string(n) +
          " utterances, expected " +
          (profile.utts_is_lower_bound ? "at least " : "") +
          std::to_string(profile.expected_utts_per_speaker));
    }
  }
  if (report.speaker_count != profile.expected_speakers) {
    report.deviations.insert(
        report.deviations.begin(),
        "speaker count " + std::to_string(report.speaker_count) +
            ", expected " + std::to_string(profile.expected_speakers));
  }
  if (report.total_utts != profile.expected_total_utts) {
    report.deviations.push_back(
        "total utterances " + std::to_string(report.total_utts) +
        ", expected " + std::to_string(profile.expected_total_utts));
  }
  return report;
}

}  // namespace mtdet
