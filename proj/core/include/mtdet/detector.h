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

// Multi-target detector: blacklist enrollment, cosine scoring, M-Norm score
// normalization and top-hypothesis extraction.
//
// A ScoreMatrix holds S detectors (rows, one per blacklist speaker) against
// N utterances (columns). For each test utterance the detector reports the
// top score y* and the hypothesis h* that achieved it; the pair feeds both
// the Top-S (cohort) and Top-1 (identification) evaluations.

#ifndef MTDET_DETECTOR_H_
#define MTDET_DETECTOR_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mtdet/ingestion.h"
#include "mtdet/types.h"

namespace mtdet {

// Scales v to unit Euclidean norm. Throws Error(kDegenerate) for a zero
// vector.
IVector LengthNormalize(const IVector& v);

struct SpeakerModel {
  GlobalId global_id;
  IVector centroid;  // unit norm
};

// One model per registry entry, ordered by global id. The centroid is the
// mean of the speaker's length-normalized utterances, renormalized.
// `set` selects which registry column resolves the utterance prefixes.
//
// Throws Error(kUnknownId) for an utterance whose prefix is not registered
// and Error(kDegenerate) for a registered speaker without utterances.
std::vector<SpeakerModel> Enroll(const Dataset& blacklist,
                                 const SpeakerRegistry& registry,
                                 SpeakerSet set = SpeakerSet::kTrain);

class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  // `scores` is row-major, S x N. Throws Error(kDimension) on a size
  // mismatch and Error(kFormat) on a non-finite entry.
  ScoreMatrix(std::vector<GlobalId> detector_ids,
              std::vector<UtteranceId> utterance_ids,
              std::vector<double> scores, bool normalized = false);

  std::size_t rows() const { return detector_ids_.size(); }
  std::size_t cols() const { return utterance_ids_.size(); }
  bool empty() const { return scores_.empty(); }
  bool normalized() const { return normalized_; }

  double at(std::size_t detector, std::size_t utterance) const {
    return scores_[detector * cols() + utterance];
  }
  std::span<const double> Row(std::size_t detector) const {
    return std::span<const double>(scores_).subspan(detector * cols(), cols());
  }
  std::span<const double> data() const { return scores_; }

  const std::vector<GlobalId>& detector_ids() const { return detector_ids_; }
  const std::vector<UtteranceId>& utterance_ids() const {
    return utterance_ids_;
  }

 private:
  std::vector<GlobalId> detector_ids_;
  std::vector<UtteranceId> utterance_ids_;
  std::vector<double> scores_;
  bool normalized_ = false;
};

// Produces raw (unnormalized) detector scores. Implementations must be
// deterministic irrespective of any internal parallelism.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual ScoreMatrix Score(std::span<const SpeakerModel> models,
                            const Dataset& utterances) const = 0;
};

// score(i, j) = <centroid_i, normalize(x_j)>. Columns are split across
// `num_workers` threads; every entry is computed by the same fixed-order dot
// product, so the result does not depend on the worker count.
class CosineScorer : public Scorer {
 public:
  explicit CosineScorer(std::size_t num_workers = 1)
      : num_workers_(num_workers == 0 ? 1 : num_workers) {}

  ScoreMatrix Score(std::span<const SpeakerModel> models,
                    const Dataset& utterances) const override;

 private:
  std::size_t num_workers_;
};

struct MNormParams {
  std::vector<double> mu;
  std::vector<double> sigma;  // population std, >= 0
  std::size_t cohort_size = 0;
};

// Per-row mean and population standard deviation of a detector-vs-cohort
// matrix. Every cohort column contributes, including the detector's own
// speaker. Throws Error(kDegenerate) for an empty cohort.
MNormParams ComputeMNormParams(const ScoreMatrix& cohort);

// Variant that drops, for detector i, the cohort columns spoken by detector
// i's own speaker. `column_speakers[j]` is the speaker of cohort column j.
// Throws Error(kDegenerate) if a row is left with no columns.
MNormParams ComputeMNormParamsExcludingOwn(
    const ScoreMatrix& cohort,
    std::span<const std::optional<GlobalId>> column_speakers);

// Speaker of each utterance in `ds`, resolved through `registry`.
std::vector<std::optional<GlobalId>> ResolveSpeakers(
    const Dataset& ds, const SpeakerRegistry& registry, SpeakerSet set);

enum class MNormMode { kFull, kShift, kScale, kOff };

const char* MNormModeName(MNormMode mode);
// Accepts "full", "shift", "scale", "off". Throws Error(kFormat).
MNormMode ParseMNormMode(std::string_view name);

// full:  (y - mu_i) / max(sigma_i, floor)
// shift: y - mu_i
// scale: y / max(sigma_i, floor)
// off:   y unchanged (the result stays flagged unnormalized)
//
// Throws Error(kFormat) if `raw` is already normalized, Error(kDimension) if
// the parameter length differs from raw.rows(), and Error(kDegenerate)
// naming the detector when the effective sigma is zero in full/scale mode.
ScoreMatrix ApplyMNorm(const ScoreMatrix& raw, const MNormParams& params,
                       MNormMode mode = MNormMode::kFull,
                       double sigma_floor = 0.0);

struct Detection {
  UtteranceId utterance;
  double y_star;
  GlobalId h_star;
};

// Maps a column of detector scores to the blacklist score y*.
using ScoreReduction = std::function<double(std::span<const double>)>;

double MaxReduction(std::span<const double> column);

// One detection per column. h* is the arg-max detector (ties go to the
// smallest global id); y* is `reduce(column)`, the max when unset.
std::vector<Detection> TopDetections(const ScoreMatrix& m,
                                     const ScoreReduction& reduce = {});

// Every detection becomes a row, however low its score.
Submission DetectionsToSubmission(std::span<const Detection> detections);

}  // namespace mtdet

#endif  // MTDET_DETECTOR_H_
