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

// Detection error curves and equal error rate.
//
// Three curve kinds share one threshold grid and one convention:
//
//   single-target  P_miss = P(y < theta | target),  P_fa = P(y > theta | non)
//   Top-S          same, with y = y* and target = "speaker is blacklisted"
//   Top-1          P_miss additionally counts blacklist trials accepted
//                  (y* > theta) under the wrong hypothesis h*; P_fa as Top-S
//
// Inequalities are strict. Thresholds are the midpoints between adjacent
// distinct scores plus one sentinel below the minimum and one above the
// maximum, so no score ever equals a threshold. Rates are kept as integer
// counts and divided once.

#ifndef MTDET_METRICS_H_
#define MTDET_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtdet/ingestion.h"
#include "mtdet/types.h"

namespace mtdet {

struct TargetTrial {
  double score;
  bool is_target;
};

// One evaluated test utterance. truth is nullopt for a background speaker.
struct Trial {
  double y_star;
  GlobalId h_star;
  std::optional<GlobalId> truth;
};

enum class CurveKind { kSingleTarget, kTopS, kTop1 };

const char* CurveKindName(CurveKind kind);

struct CurvePoint {
  double theta;
  std::size_t misses;
  std::size_t false_alarms;
  double p_miss;
  double p_fa;
};

struct ErrorCurve {
  CurveKind kind = CurveKind::kSingleTarget;
  std::size_t num_targets = 0;
  std::size_t num_nontargets = 0;
  std::vector<CurvePoint> points;  // theta strictly increasing
};

// Sorted candidate thresholds for the given scores, as described above. The
// low sentinel is min - (1 + |min|), the high one max + (1 + |max|).
std::vector<double> CandidateThresholds(std::span<const double> scores);

// All three throw Error(kDegenerate) when there are no targets or no
// non-targets, and Error(kFormat) on a non-finite score.
ErrorCurve SingleTargetCurve(std::span<const TargetTrial> trials);
ErrorCurve TopSCurve(std::span<const Trial> trials);
ErrorCurve Top1Curve(std::span<const Trial> trials);

struct EerResult {
  double eer = 0.0;
  double theta = 0.0;
  bool exact_crossing = false;
};

// First point with P_miss == P_fa if any (exact); otherwise linear
// interpolation in theta between the first adjacent pair where
// P_miss - P_fa changes sign; otherwise the point minimizing
// |P_miss - P_fa|. Throws Error(kDegenerate) on an empty curve.
EerResult ComputeEer(const ErrorCurve& curve);

struct EvaluationReport {
  ErrorCurve top_s;
  ErrorCurve top_1;
  EerResult top_s_eer;
  EerResult top_1_eer;
  std::size_t trials = 0;
  std::size_t blacklist_trials = 0;
  std::size_t background_trials = 0;

  std::string ToText() const;
  // key=value lines: trials, blacklist_trials, background_trials,
  // top_s_eer, top_s_theta, top_1_eer, top_1_theta.
  std::string ToMachine() const;
};

// Raised when a submission does not cover the key exactly.
class CoverageError : public Error {
 public:
  CoverageError(std::vector<std::string> missing,
                std::vector<std::string> extra);

  const std::vector<std::string>& missing() const { return missing_; }
  const std::vector<std::string>& extra() const { return extra_; }

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> extra_;
};

std::vector<Trial> BuildTrials(const Submission& sub,
                               const GroundTruthKey& key);

// Throws CoverageError on missing or extra utterances and Error(kUnknownId)
// when a claimed speaker or key speaker is not in the registry.
EvaluationReport EvaluateSubmission(const Submission& sub,
                                    const GroundTruthKey& key,
                                    const SpeakerRegistry& registry);

// CSV with header "theta,p_miss,p_fa", 9 significant digits per value.
void ExportDet(std::ostream& out, const ErrorCurve& curve);

struct DetPoint {
  double theta;
  double p_miss;
  double p_fa;
};
std::vector<DetPoint> ReadDet(std::istream& in);

// Lines of "<score>,target" or "<score>,nontarget".
std::vector<TargetTrial> ReadTargetTrials(std::istream& in);

}  // namespace mtdet

#endif  // MTDET_METRICS_H_
