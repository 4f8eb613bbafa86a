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

#include "mtdet/detector.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace mtdet {

IVector LengthNormalize(const IVector& v) {
  const double norm = v.Norm();
  if (norm == 0.0) {
    throw Error(ErrorKind::kDegenerate, "cannot length-normalize a zero vector");
  }
  std::vector<double> out(v.values().begin(), v.values().end());
  for (double& x : out) x /= norm;
  return IVector(std::move(out));
}

std::vector<SpeakerModel> Enroll(const Dataset& blacklist,
                                 const SpeakerRegistry& registry,
                                 SpeakerSet set) {
  // Keyed by global id, so iteration yields ascending id order.
  std::map<GlobalId, std::vector<double>> sums;
  for (const RegistryEntry& e : registry.entries()) sums[e.global_id];

  for (const Utterance& u : blacklist.utterances()) {
    std::optional<GlobalId> speaker = registry.SpeakerOf(u.id, set);
    if (!speaker) {
      throw Error(ErrorKind::kUnknownId,
                  "utterance " + u.id.ToString() +
                      " has a speaker prefix not in the blacklist registry");
    }
    std::vector<double>& sum = sums[*speaker];
    if (sum.empty()) sum.assign(u.vector.dim(), 0.0);
    IVector unit = LengthNormalize(u.vector);
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += unit[d];
  }

  std::vector<SpeakerModel> models;
  models.reserve(sums.size());
  for (auto& [id, sum] : sums) {
    if (sum.empty()) {
      throw Error(ErrorKind::kDegenerate,
                  "blacklist speaker " + id.str() + " has no utterances");
    }
    // Scaling the sum by 1/n does not change its direction, so the mean is
    // implicit in the renormalization.
    IVector direction(std::move(sum));
    if (direction.Norm() == 0.0) {
      throw Error(ErrorKind::kDegenerate,
                  "utterances of speaker " + id.str() + " cancel to zero");
    }
    models.push_back({id, LengthNormalize(direction)});
  }
  return models;
}

ScoreMatrix::ScoreMatrix(std::vector<GlobalId> detector_ids,
                         std::vector<UtteranceId> utterance_ids,
                         std::vector<double> scores, bool normalized)
    : detector_ids_(std::move(detector_ids)),
      utterance_ids_(std::move(utterance_ids)),
      scores_(std::move(scores)),
      normalized_(normalized) {
  if (scores_.size() != detector_ids_.size() * utterance_ids_.size()) {
    throw Error(ErrorKind::kDimension,
                "score matrix holds " + std::to_string(scores_.size()) +
                    " entries, expected " +
                    std::to_string(detector_ids_.size()) + " x " +
                    std::to_string(utterance_ids_.size()));
  }
  for (double s : scores_) {
    if (!std::isfinite(s)) {
      throw Error(ErrorKind::kFormat, "non-finite entry in score matrix");
    }
  }
}

ScoreMatrix CosineScorer::Score(std::span<const SpeakerModel> models,
                                const Dataset& utterances) const {
  const std::size_t rows = models.size();
  const std::size_t cols = utterances.size();
  for (const SpeakerModel& m : models) {
    if (cols > 0 && m.centroid.dim() != utterances.dim()) {
      throw Error(ErrorKind::kDimension,
                  "model " + m.global_id.str() + " has dim " +
                      std::to_string(m.centroid.dim()) + ", utterances have " +
                      std::to_string(utterances.dim()));
    }
  }
  // Normalize up front so degenerate input is reported on the calling thread.
  std::vector<IVector> unit;
  unit.reserve(cols);
  for (const Utterance& u : utterances.utterances()) {
    try {
      unit.push_back(LengthNormalize(u.vector));
    } catch (const Error&) {
      throw Error(ErrorKind::kDegenerate,
                  "utterance " + u.id.ToString() + " is a zero vector");
    }
  }

  std::vector<double> scores(rows * cols);
  auto score_columns = [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      for (std::size_t i = 0; i < rows; ++i) {
        scores[i * cols + j] =
            Dot(models[i].centroid.values(), unit[j].values());
      }
    }
  };
  const std::size_t workers = std::min(num_workers_, std::max<std::size_t>(cols, 1));
  if (workers <= 1) {
    score_columns(0, cols);
  } else {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (cols + workers - 1) / workers;
    for (std::size_t begin = 0; begin < cols; begin += chunk) {
      threads.emplace_back(score_columns, begin, std::min(cols, begin + chunk));
    }
  }

  std::vector<GlobalId> ids;
  ids.reserve(rows);
  for (const SpeakerModel& m : models) ids.push_back(m.global_id);
  std::vector<UtteranceId> utt_ids;
  utt_ids.reserve(cols);
  for (const Utterance& u : utterances.utterances()) utt_ids.push_back(u.id);
  return ScoreMatrix(std::move(ids), std::move(utt_ids), std::move(scores));
}

namespace {

// Mean and population std of the selected entries of `row`.
std::pair<double, double> RowMoments(std::span<const double> row,
                                     const std::vector<bool>* keep) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (keep && !(*keep)[j]) continue;
    sum += row[j];
    ++n;
  }
  const double mu = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (keep && !(*keep)[j]) continue;
    const double d = row[j] - mu;
    ss += d * d;
  }
  return {mu, std::sqrt(ss / static_cast<double>(n))};
}

}  // namespace

MNormParams ComputeMNormParams(const ScoreMatrix& cohort) {
  if (cohort.cols() == 0) {
    throw Error(ErrorKind::kDegenerate, "M-Norm cohort is empty");
  }
  MNormParams params;
  params.cohort_size = cohort.cols();
  params.mu.reserve(cohort.rows());
  params.sigma.reserve(cohort.rows());
  for (std::size_t i = 0; i < cohort.rows(); ++i) {
    auto [mu, sigma] = RowMoments(cohort.Row(i), nullptr);
    params.mu.push_back(mu);
    params.sigma.push_back(sigma);
  }
  return params;
}

MNormParams ComputeMNormParamsExcludingOwn(
    const ScoreMatrix& cohort,
    std::span<const std::optional<GlobalId>> column_speakers) {
  if (column_speakers.size() != cohort.cols()) {
    throw Error(ErrorKind::kDimension,
                "cohort speaker list length differs from cohort size");
  }
  if (cohort.cols() == 0) {
    throw Error(ErrorKind::kDegenerate, "M-Norm cohort is empty");
  }
  MNormParams params;
  params.cohort_size = cohort.cols();
  std::vector<bool> keep(cohort.cols());
  for (std::size_t i = 0; i < cohort.rows(); ++i) {
    const GlobalId& self = cohort.detector_ids()[i];
    bool any = false;
    for (std::size_t j = 0; j < cohort.cols(); ++j) {
      keep[j] = !(column_speakers[j] && *column_speakers[j] == self);
      any = any || keep[j];
    }
    if (!any) {
      throw Error(ErrorKind::kDegenerate,
                  "no M-Norm cohort left for detector " + self.str() +
                      " after excluding its own utterances");
    }
    auto [mu, sigma] = RowMoments(cohort.Row(i), &keep);
    params.mu.push_back(mu);
    params.sigma.push_back(sigma);
  }
  return params;
}

std::vector<std::optional<GlobalId>> ResolveSpeakers(
    const Dataset& ds, const SpeakerRegistry& registry, SpeakerSet set) {
  std::vector<std::optional<GlobalId>> out;
  out.reserve(ds.size());
  for (const Utterance& u : ds.utterances()) {
    out.push_back(registry.SpeakerOf(u.id, set));
  }
  return out;
}

const char* MNormModeName(MNormMode mode) {
  switch (mode) {
    case MNormMode::kFull: return "full";
    case MNormMode::kShift: return "shift";
    case MNormMode::kScale: return "scale";
    case MNormMode::kOff: return "off";
  }
  return "unknown";
}

MNormMode ParseMNormMode(std::string_view name) {
  for (MNormMode m : {MNormMode::kFull, MNormMode::kShift, MNormMode::kScale,
                      MNormMode::kOff}) {
    if (name == MNormModeName(m)) return m;
  }
  throw Error(ErrorKind::kFormat,
              "unknown M-Norm mode '" + std::string(name) +
                  "' (expected full, shift, scale or off)");
}

ScoreMatrix ApplyMNorm(const ScoreMatrix& raw, const MNormParams& params,
                       MNormMode mode, double sigma_floor) {
  if (raw.normalized()) {
    throw Error(ErrorKind::kFormat, "score matrix is already normalized");
  }
  if (params.mu.size() != raw.rows() || params.sigma.size() != raw.rows()) {
    throw Error(ErrorKind::kDimension,
                "M-Norm parameters cover " + std::to_string(params.mu.size()) +
                    " detectors, score matrix has " +
                    std::to_string(raw.rows()));
  }
  if (!(sigma_floor >= 0.0)) {
    throw Error(ErrorKind::kFormat, "sigma floor must be nonnegative");
  }
  if (mode == MNormMode::kOff) return raw;

  const bool shift = mode == MNormMode::kFull || mode == MNormMode::kShift;
  const bool scale = mode == MNormMode::kFull || mode == MNormMode::kScale;
  std::vector<double> out(raw.data().begin(), raw.data().end());
  for (std::size_t i = 0; i < raw.rows(); ++i) {
    const double mu = shift ? params.mu[i] : 0.0;
    double sigma = 1.0;
    if (scale) {
      sigma = std::max(params.sigma[i], sigma_floor);
      if (sigma == 0.0) {
        throw Error(ErrorKind::kDegenerate,
                    "M-Norm sigma is zero for detector " +
                        raw.detector_ids()[i].str() +
                        " (set a positive sigma floor)");
      }
    }
    double* row = out.data() + i * raw.cols();
    for (std::size_t j = 0; j < raw.cols(); ++j) {
      row[j] = scale ? (row[j] - mu) / sigma : row[j] - mu;
    }
  }
  return ScoreMatrix(raw.detector_ids(), raw.utterance_ids(), std::move(out),
                     true);
}

double MaxReduction(std::span<const double> column) {
  return *std::max_element(column.begin(), column.end());
}

std::vector<Detection> TopDetections(const ScoreMatrix& m,
                                     const ScoreReduction& reduce) {
  if (m.rows() == 0) {
    throw Error(ErrorKind::kDegenerate, "no detectors in score matrix");
  }
  std::vector<Detection> out;
  out.reserve(m.cols());
  std::vector<double> column(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      column[i] = m.at(i, j);
      if (column[i] > column[best] ||
          (column[i] == column[best] &&
           m.detector_ids()[i] < m.detector_ids()[best])) {
        best = i;
      }
    }
    const double y_star = reduce ? reduce(column) : column[best];
    out.push_back({m.utterance_ids()[j], y_star, m.detector_ids()[best]});
  }
  return out;
}

Submission DetectionsToSubmission(std::span<const Detection> detections) {
  Submission sub;
  for (const Detection& d : detections) {
    sub.Add({d.utterance, d.y_star, d.h_star});
  }
  return sub;
}

}  // namespace mtdet
