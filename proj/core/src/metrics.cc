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

#include "mtdet/metrics.h"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace mtdet {

const char* CurveKindName(CurveKind kind) {
  switch (kind) {
    case CurveKind::kSingleTarget: return "single_target";
    case CurveKind::kTopS: return "top_s";
    case CurveKind::kTop1: return "top_1";
  }
  return "unknown";
}

std::vector<double> CandidateThresholds(std::span<const double> scores) {
  std::vector<double> distinct(scores.begin(), scores.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.empty()) return {};

  constexpr double kMax = std::numeric_limits<double>::max();
  const double lo = distinct.front() - (1.0 + std::abs(distinct.front()));
  const double hi = distinct.back() + (1.0 + std::abs(distinct.back()));

  std::vector<double> thresholds;
  thresholds.reserve(distinct.size() + 1);
  thresholds.push_back(std::isfinite(lo) ? lo : -kMax);
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
    const double mid = std::midpoint(distinct[i], distinct[i + 1]);
    if (mid > thresholds.back()) thresholds.push_back(mid);
  }
  const double top = std::isfinite(hi) ? hi : kMax;
  if (top > thresholds.back()) thresholds.push_back(top);
  return thresholds;
}

namespace {

void CheckFinite(double score) {
  if (!std::isfinite(score)) {
    throw Error(ErrorKind::kFormat, "non-finite detection score");
  }
}

// Builds a curve from sorted score groups. `confused` holds target scores
// whose identity decision was wrong; each counts as a miss when accepted.
ErrorCurve BuildCurve(CurveKind kind, std::vector<double> targets,
                      std::vector<double> nontargets,
                      std::vector<double> confused) {
  if (targets.empty() || nontargets.empty()) {
    throw Error(ErrorKind::kDegenerate,
                std::string(CurveKindName(kind)) +
                    " curve needs at least one target and one non-target "
                    "trial");
  }
  std::vector<double> all;
  all.reserve(targets.size() + nontargets.size());
  all.insert(all.end(), targets.begin(), targets.end());
  all.insert(all.end(), nontargets.begin(), nontargets.end());
  const std::vector<double> thresholds = CandidateThresholds(all);

  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());
  std::sort(confused.begin(), confused.end());

  ErrorCurve curve;
  curve.kind = kind;
  curve.num_targets = targets.size();
  curve.num_nontargets = nontargets.size();
  curve.points.reserve(thresholds.size());
  const auto nt = static_cast<double>(targets.size());
  const auto nn = static_cast<double>(nontargets.size());
  for (double theta : thresholds) {
    const auto below = [theta](const std::vector<double>& v) {
      return static_cast<std::size_t>(
          std::lower_bound(v.begin(), v.end(), theta) - v.begin());
    };
    const auto above = [theta](const std::vector<double>& v) {
      return static_cast<std::size_t>(
          v.end() - std::upper_bound(v.begin(), v.end(), theta));
    };
    CurvePoint p;
    p.theta = theta;
    p.misses = below(targets) + above(confused);
    p.false_alarms = above(nontargets);
    p.p_miss = static_cast<double>(p.misses) / nt;
    p.p_fa = static_cast<double>(p.false_alarms) / nn;
    curve.points.push_back(p);
  }
  return curve;
}

ErrorCurve StackCurve(std::span<const Trial> trials, CurveKind kind) {
  std::vector<double> targets, nontargets, confused;
  for (const Trial& t : trials) {
    CheckFinite(t.y_star);
    if (t.truth) {
      targets.push_back(t.y_star);
      if (kind == CurveKind::kTop1 && *t.truth != t.h_star) {
        confused.push_back(t.y_star);
      }
    } else {
      nontargets.push_back(t.y_star);
    }
  }
  return BuildCurve(kind, std::move(targets), std::move(nontargets),
                    std::move(confused));
}

}  // namespace

ErrorCurve SingleTargetCurve(std::span<const TargetTrial> trials) {
  std::vector<double> targets, nontargets;
  for (const TargetTrial& t : trials) {
    CheckFinite(t.score);
    (t.is_target ? targets : nontargets).push_back(t.score);
  }
  return BuildCurve(CurveKind::kSingleTarget, std::move(targets),
                    std::move(nontargets), {});
}

ErrorCurve TopSCurve(std::span<const Trial> trials) {
  return StackCurve(trials, CurveKind::kTopS);
}

ErrorCurve Top1Curve(std::span<const Trial> trials) {
  return StackCurve(trials, CurveKind::kTop1);
}

EerResult ComputeEer(const ErrorCurve& curve) {
  const auto& pts = curve.points;
  if (pts.empty()) throw Error(ErrorKind::kDegenerate, "empty error curve");

  // With counts available the difference P_miss - P_fa is compared through
  // integer cross-multiplication, so "exactly equal" is exact.
  const bool counted = curve.num_targets > 0 && curve.num_nontargets > 0;
  auto diff = [&](const CurvePoint& p) -> double {
    if (!counted) return p.p_miss - p.p_fa;
    const auto scaled =
        static_cast<std::int64_t>(p.misses * curve.num_nontargets) -
        static_cast<std::int64_t>(p.false_alarms * curve.num_targets);
    return static_cast<double>(scaled);
  };

  for (const CurvePoint& p : pts) {
    if (diff(p) == 0.0) return {p.p_miss, p.theta, true};
  }
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double d0 = diff(pts[k]);
    const double d1 = diff(pts[k + 1]);
    if ((d0 < 0.0) != (d1 < 0.0)) {
      const double t = d0 / (d0 - d1);
      const CurvePoint& a = pts[k];
      const CurvePoint& b = pts[k + 1];
      const double miss = a.p_miss + t * (b.p_miss - a.p_miss);
      const double fa = a.p_fa + t * (b.p_fa - a.p_fa);
      return {0.5 * (miss + fa), a.theta + t * (b.theta - a.theta), false};
    }
  }
  const CurvePoint* best = &pts.front();
  for (const CurvePoint& p : pts) {
    if (std::abs(p.p_miss - p.p_fa) < std::abs(best->p_miss - best->p_fa)) {
      best = &p;
    }
  }
  return {0.5 * (best->p_miss + best->p_fa), best->theta, false};
}

namespace {

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string Sig9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string EvaluationReport::ToText() const {
  std::ostringstream os;
  os << "trials:            " << trials << " (" << blacklist_trials
     << " blacklist, " << background_trials << " background)\n";
  os << "Top-S EER:         " << Fixed6(100.0 * top_s_eer.eer)
     << "% at threshold " << Sig9(top_s_eer.theta) << "\n";
  os << "Top-1 EER:         " << Fixed6(100.0 * top_1_eer.eer)
     << "% at threshold " << Sig9(top_1_eer.theta) << "\n";
  return os.str();
}

std::string EvaluationReport::ToMachine() const {
  std::ostringstream os;
  os << "trials=" << trials << '\n'
     << "blacklist_trials=" << blacklist_trials << '\n'
     << "background_trials=" << background_trials << '\n'
     << "top_s_eer=" << Fixed6(top_s_eer.eer) << '\n'
     << "top_s_theta=" << Sig9(top_s_eer.theta) << '\n'
     << "top_1_eer=" << Fixed6(top_1_eer.eer) << '\n'
     << "top_1_theta=" << Sig9(top_1_eer.theta) << '\n';
  return os.str();
}

namespace {

std::string DescribeCoverage(const std::vector<std::string>& missing,
                             const std::vector<std::string>& extra) {
  constexpr std::size_t kMaxListed = 50;
  std::string msg = "submission does not cover the key";
  auto list = [&](const char* label, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    msg += "; " + std::to_string(ids.size()) + " " + label + ":";
    for (std::size_t i = 0; i < ids.size() && i < kMaxListed; ++i) {
      msg += " " + ids[i];
    }
    if (ids.size() > kMaxListed) msg += " ...";
  };
  list("missing", missing);
  list("extra", extra);
  return msg;
}

}  // namespace

CoverageError::CoverageError(std::vector<std::string> missing,
                             std::vector<std::string> extra)
    : Error(ErrorKind::kCoverage, DescribeCoverage(missing, extra)),
      missing_(std::move(missing)),
      extra_(std::move(extra)) {}

std::vector<Trial> BuildTrials(const Submission& sub, const GroundTruthKey& key) {
  std::vector<std::string> missing, extra;
  std::set<UtteranceId> submitted;
  std::vector<Trial> trials;
  trials.reserve(sub.size());
  for (const SubmissionRow& row : sub.rows()) {
    submitted.insert(row.utterance);
    const GroundTruthKey::Entry* e = key.Find(row.utterance);
    if (!e) {
      extra.push_back(row.utterance.ToString());
      continue;
    }
    trials.push_back({row.score, row.claimed_speaker, e->speaker});
  }
  for (const auto& e : key.entries()) {
    if (!submitted.count(e.utterance)) missing.push_back(e.utterance.ToString());
  }
  if (!missing.empty() || !extra.empty()) {
    throw CoverageError(std::move(missing), std::move(extra));
  }
  return trials;
}

EvaluationReport EvaluateSubmission(const Submission& sub,
                                    const GroundTruthKey& key,
                                    const SpeakerRegistry& registry) {
  key.Validate(registry);
  for (const SubmissionRow& row : sub.rows()) {
    if (!registry.Contains(row.claimed_speaker)) {
      throw Error(ErrorKind::kUnknownId,
                  "submission row " + row.utterance.ToString() +
                      " claims unknown blacklist id " +
                      row.claimed_speaker.str());
    }
  }
  const std::vector<Trial> trials = BuildTrials(sub, key);
  EvaluationReport report;
  report.top_s = TopSCurve(trials);
  report.top_1 = Top1Curve(trials);
  report.top_s_eer = ComputeEer(report.top_s);
  report.top_1_eer = ComputeEer(report.top_1);
  report.trials = trials.size();
  report.blacklist_trials = report.top_s.num_targets;
  report.background_trials = report.top_s.num_nontargets;
  return report;
}

void ExportDet(std::ostream& out, const ErrorCurve& curve) {
  out << "theta,p_miss,p_fa\n";
  for (const CurvePoint& p : curve.points) {
    out << FormatReal(p.theta) << ',' << FormatReal(p.p_miss) << ','
        << FormatReal(p.p_fa) << '\n';
  }
}

namespace {

double ParseNumber(std::string_view s, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(ErrorKind::kFormat, line,
                     "non-numeric field '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> Split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<DetPoint> ReadDet(std::istream& in) {
  std::vector<DetPoint> points;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (number == 1 && line == "theta,p_miss,p_fa") continue;
    auto f = Split(line);
    if (f.size() != 3) {
      throw ParseError(ErrorKind::kFormat, number, "expected 3 fields");
    }
    points.push_back({ParseNumber(f[0], number), ParseNumber(f[1], number),
                      ParseNumber(f[2], number)});
  }
  return points;
}

std::vector<TargetTrial> ReadTargetTrials(std::istream& in) {
  std::vector<TargetTrial> trials;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto f = Split(line);
    if (f.size() != 2) {
      throw ParseError(ErrorKind::kFormat, number, "expected 2 fields");
    }
    std::string_view label = f[1];
    while (!label.empty() && label.front() == ' ') label.remove_prefix(1);
    while (!label.empty() && label.back() == ' ') label.remove_suffix(1);
    bool is_target;
    if (label == "target") {
      is_target = true;
    } else if (label == "nontarget") {
      is_target = false;
    } else {
      throw ParseError(ErrorKind::kFormat, number,
                       "label must be 'target' or 'nontarget', got '" +
                           std::string(label) + "'");
    }
    const double score = ParseNumber(f[0], number);
    if (!std::isfinite(score)) {
      throw ParseError(ErrorKind::kFormat, number, "non-finite score");
    }
    trials.push_back({score, is_target});
  }
  return trials;
}

}  // namespace mtdet
