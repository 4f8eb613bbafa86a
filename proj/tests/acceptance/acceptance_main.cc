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

// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.h"
#include "mtdet/detector.h"
#include "mtdet/ingestion.h"
#include "mtdet/metrics.h"
#include "mtdet/synth.h"
#include "oracles.h"

namespace mtdet {
namespace {

// Collects failures for one criterion; the first few are printed.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_ < 5) std::printf("      failed: %s\n", what.c_str());
    ++failures_;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// 200 trial sets, half on a coarse grid (ties), half continuous.
std::vector<std::vector<Trial>> TrialSets() {
  std::mt19937_64 gen(2018);
  std::vector<std::vector<Trial>> sets;
  std::uniform_int_distribution<std::size_t> size(2, 500);
  std::normal_distribution<double> normal;
  for (int s = 0; s < 200; ++s) {
    const std::size_t n = size(gen);
    const std::size_t speakers = 1 + gen() % 20;
    if (s % 2 == 0) {
      sets.push_back(oracle::RandomTrials(gen, n, speakers));
    } else {
      auto trials = oracle::RandomTrials(gen, n, speakers);
      for (auto& t : trials) t.y_star = normal(gen) + (t.truth ? 1.0 : 0.0);
      sets.push_back(std::move(trials));
    }
  }
  return sets;
}

void MetricOracle(Check& c) {
  for (const auto& trials : TrialSets()) {
    for (bool top1 : {false, true}) {
      const ErrorCurve curve = top1 ? Top1Curve(trials) : TopSCurve(trials);
      const auto ref = oracle::Curve(trials, top1);
      c.Expect(curve.points.size() == ref.size(), "threshold count");
      if (curve.points.size() != ref.size()) continue;
      for (std::size_t k = 0; k < ref.size(); ++k) {
        c.Expect(curve.points[k].p_miss == ref[k].p_miss &&
                     curve.points[k].p_fa == ref[k].p_fa,
                 "rates at theta " + Num(ref[k].theta));
      }
      const double eer = ComputeEer(curve).eer;
      const double ref_eer = oracle::Eer(ref);
      c.Expect(std::abs(eer - ref_eer) < 1e-9,
               "EER " + Num(eer) + " vs oracle " + Num(ref_eer));
    }
  }
}

void FaEqualityMissDominance(Check& c) {
  for (const auto& trials : TrialSets()) {
    const ErrorCurve s = TopSCurve(trials);
    const ErrorCurve one = Top1Curve(trials);
    c.Expect(s.points.size() == one.points.size(), "grid size");
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      c.Expect(s.points[k].theta == one.points[k].theta, "same thresholds");
      c.Expect(one.points[k].p_fa == s.points[k].p_fa, "FA equality");
      c.Expect(one.points[k].p_miss >= s.points[k].p_miss, "miss dominance");
    }
  }
}

ScoreMatrix RandomMatrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal;
  std::vector<GlobalId> ids;
  for (std::size_t i = 0; i < rows; ++i) ids.push_back(GlobalId::FromIndex(i + 1));
  std::vector<UtteranceId> utts;
  for (std::size_t j = 0; j < cols; ++j) {
    utts.push_back(UtteranceId::Parse("cohr_" + std::to_string(j)));
  }
  std::vector<double> scores(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double shift = 3.0 * normal(gen), scale = std::exp(normal(gen));
    for (std::size_t j = 0; j < cols; ++j) {
      scores[i * cols + j] = shift + scale * normal(gen);
    }
  }
  return ScoreMatrix(ids, utts, scores);
}

std::pair<double, double> Moments(std::span<const double> row) {
  double mean = 0;
  for (double x : row) mean += x;
  mean /= row.size();
  double var = 0;
  for (double x : row) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / row.size())};
}

void MNormMoments(Check& c) {
  std::mt19937_64 gen(9);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t s = 1 + gen() % 64, n = 2 + gen() % 255;
    const ScoreMatrix cohort = RandomMatrix(gen, s, n);
    const MNormParams p = ComputeMNormParams(cohort);
    const ScoreMatrix full = ApplyMNorm(cohort, p);
    const ScoreMatrix shift = ApplyMNorm(cohort, p, MNormMode::kShift);
    const ScoreMatrix scale = ApplyMNorm(cohort, p, MNormMode::kScale);
    for (std::size_t i = 0; i < s; ++i) {
      auto [m, sd] = Moments(full.Row(i));
      c.Expect(std::abs(m) < 1e-9 && std::abs(sd - 1.0) < 1e-9, "full moments");
      auto [m0, sd0] = Moments(cohort.Row(i));
      auto [ms, sds] = Moments(shift.Row(i));
      c.Expect(std::abs(ms) < 1e-9, "shift-only mean 0");
      c.Expect(std::abs(sds - sd0) < 1e-9 * std::max(1.0, sd0),
               "shift-only keeps std");
      auto [mc, sdc] = Moments(scale.Row(i));
      c.Expect(std::abs(sdc - 1.0) < 1e-9, "scale-only std 1");
      c.Expect(std::abs(mc - m0 / p.sigma[i]) < 1e-9 * std::max(1.0, std::abs(mc)),
               "scale-only keeps mean/sigma");
    }
  }
  // A constant row must raise the degenerate-sigma error.
  ScoreMatrix flat({GlobalId::FromIndex(1), GlobalId::FromIndex(2)},
                   {UtteranceId::Parse("cohr_1"), UtteranceId::Parse("cohr_2")},
                   {0.5, 0.7, 0.3, 0.3});
  try {
    ApplyMNorm(flat, ComputeMNormParams(flat));
    c.Expect(false, "zero sigma accepted");
  } catch (const Error& e) {
    c.Expect(e.kind() == ErrorKind::kDegenerate &&
                 std::string(e.what()).find("00000002") != std::string::npos,
             "zero sigma error names detector");
  }
}

void HandFixtures(Check& c) {
  const std::vector<TargetTrial> six = {{0.9, true},  {0.8, true},  {0.4, true},
                                        {0.6, false}, {0.2, false}, {0.1, false}};
  const double eer = ComputeEer(SingleTargetCurve(six)).eer;
  c.Expect(eer == 1.0 / 3.0, "6-score EER " + Num(eer));
  c.Expect(oracle::Eer(oracle::SingleTargetCurve(six)) == 1.0 / 3.0,
           "oracle 6-score EER");

  const double r = 1.0 / std::sqrt(2.0);
  Dataset test("t", DatasetKind::kMixed);
  test.Add({UtteranceId::Parse("tttt_1"), IVector({1, 0, 1})});
  std::vector<SpeakerModel> model = {{GlobalId::FromIndex(1), IVector({r, r, 0})}};
  const double cos = CosineScorer().Score(model, test).at(0, 0);
  c.Expect(std::abs(cos - 0.5) < 1e-12, "cosine " + Num(cos));

  ScoreMatrix row({GlobalId::FromIndex(1)},
                  {UtteranceId::Parse("cohr_1"), UtteranceId::Parse("cohr_2"),
                   UtteranceId::Parse("cohr_3")},
                  {1, 2, 3});
  const MNormParams p = ComputeMNormParams(row);
  c.Expect(std::abs(p.mu[0] - 2.0) < 1e-12, "mu " + Num(p.mu[0]));
  c.Expect(std::abs(p.sigma[0] - std::sqrt(2.0 / 3.0)) < 1e-12,
           "sigma " + Num(p.sigma[0]));
}

SynthConfig SeparableConfig() {
  SynthConfig cfg;
  cfg.n_blacklist = 50;
  cfg.train_utts_per_blacklist = 3;
  cfg.n_background = 100;
  cfg.dim = 32;
  cfg.intra_speaker_std = 0.01;
  cfg.inter_speaker_std = 1.0;
  cfg.n_test = 2000;
  cfg.test_blacklist_fraction = 0.5;
  cfg.seed = 2018;
  return cfg;
}

// Generates the separable corpus and a submission through the CLI commands.
std::filesystem::path ScoredCorpus(Check& c) {
  static std::filesystem::path dir;
  if (!dir.empty()) return dir;
  dir = oracle::ScratchDir("acceptance");
  std::ostringstream out, err;
  cli::SynthOptions synth{SeparableConfig(), dir};
  c.Expect(cli::RunSynth(synth, out, err) == cli::kExitOk, "synth: " + err.str());
  cli::ScoreOptions score;
  score.train_blacklist = dir / "trn_blacklist.csv";
  score.matching = dir / "bl_matching.csv";
  score.test = dir / "tst_mix.csv";
  score.out = dir / "sub.csv";
  c.Expect(cli::RunScore(score, out, err) == cli::kExitOk, "score: " + err.str());
  return dir;
}

std::map<std::string, std::string> Evaluate(Check& c, const std::filesystem::path& dir,
                                            std::optional<std::uint64_t> shuffle) {
  cli::EvaluateOptions ev;
  ev.submission = dir / "sub.csv";
  ev.key = dir / "tst_key.csv";
  ev.matching = dir / "bl_matching.csv";
  ev.machine = true;
  ev.shuffle_key_seed = shuffle;
  std::ostringstream out, err;
  c.Expect(cli::RunEvaluate(ev, out, err) == cli::kExitOk, "evaluate: " + err.str());
  std::map<std::string, std::string> kv;
  std::istringstream lines(out.str());
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

void EndToEndSeparable(Check& c) {
  auto kv = Evaluate(c, ScoredCorpus(c), std::nullopt);
  std::printf("      top_s_eer=%s top_1_eer=%s trials=%s\n", kv["top_s_eer"].c_str(),
              kv["top_1_eer"].c_str(), kv["trials"].c_str());
  c.Expect(kv["top_s_eer"] == "0.000000", "Top-S EER " + kv["top_s_eer"]);
  c.Expect(kv["top_1_eer"] == "0.000000", "Top-1 EER " + kv["top_1_eer"]);
  c.Expect(kv["trials"] == "2000", "trial count " + kv["trials"]);
}

void ChanceControl(Check& c) {
  auto kv = Evaluate(c, ScoredCorpus(c), 7);
  std::printf("      top_s_eer=%s top_1_eer=%s trials=%s\n", kv["top_s_eer"].c_str(),
              kv["top_1_eer"].c_str(), kv["trials"].c_str());
  for (const char* name : {"top_s_eer", "top_1_eer"}) {
    const double v = kv.count(name) ? std::stod(kv[name]) : -1.0;
    c.Expect(v >= 0.45 && v <= 0.55, std::string(name) + " = " + kv[name]);
  }
  c.Expect(kv["trials"] == "2000", "trial count " + kv["trials"]);
}

void FormatFidelity(Check& c) {
  std::istringstream iv("aagj_239446,1.1359440,-0.6017886\n");
  Dataset ds = ReadIVectorCsv(iv, 2);
  c.Expect(ds.size() == 1 && ds[0].id.speaker_prefix() == "aagj" &&
               ds[0].id.session_suffix() == "239446" &&
               ds[0].vector[0] == 1.1359440 && ds[0].vector[1] == -0.6017886,
           "i-vector example");
  std::istringstream bl("50399530,dev_fvth,train_phee\n");
  SpeakerRegistry reg = ReadBlMatching(bl);
  c.Expect(reg.size() == 1 && reg.entries()[0].global_id.str() == "50399530" &&
               reg.entries()[0].dev_id == "fvth" &&
               reg.entries()[0].train_id == "phee",
           "bl_matching example");
  reg.Add({GlobalId::Parse("01234567"), "aaaa", "bbbb"});
  std::istringstream sb("aacn_382801,1.2345,01234567\n");
  Submission sub = ReadSubmission(sb, reg);
  c.Expect(sub.size() == 1 && sub.rows()[0].utterance.ToString() == "aacn_382801" &&
               sub.rows()[0].score == 1.2345 &&
               sub.rows()[0].claimed_speaker.str() == "01234567",
           "submission example");

  // Round trips on the separable corpus files.
  const auto dir = ScoredCorpus(c);
  for (const char* name : {"trn_blacklist.csv", "tst_mix.csv"}) {
    std::ifstream in(dir / name);
    Dataset a = ReadIVectorCsv(in);
    std::stringstream buf;
    WriteIVectorCsv(buf, a);
    Dataset b = ReadIVectorCsv(buf);
    bool ok = a.size() == b.size() && a.size() > 0;
    for (std::size_t i = 0; ok && i < a.size(); ++i) {
      ok = a[i].id == b[i].id;
      for (std::size_t d = 0; ok && d < a.dim(); ++d) {
        ok = std::abs(a[i].vector[d] - b[i].vector[d]) <=
             1e-6 * std::max(1.0, std::abs(a[i].vector[d]));
      }
    }
    c.Expect(ok, std::string("round trip ") + name);
  }
  {
    std::ifstream in(dir / "bl_matching.csv");
    SpeakerRegistry a = ReadBlMatching(in);
    std::stringstream buf;
    WriteBlMatching(buf, a);
    c.Expect(buf.str() == Slurp(dir / "bl_matching.csv"), "round trip bl_matching");
    std::ifstream sin(dir / "sub.csv");
    Submission s = ReadSubmission(sin, a);
    std::stringstream sbuf;
    WriteSubmission(sbuf, s);
    Submission t = ReadSubmission(sbuf, a);
    bool ok = s.size() == t.size() && s.size() == 2000;
    for (std::size_t i = 0; ok && i < s.size(); ++i) {
      ok = s.rows()[i].utterance == t.rows()[i].utterance &&
           s.rows()[i].claimed_speaker == t.rows()[i].claimed_speaker &&
           std::abs(s.rows()[i].score - t.rows()[i].score) <= 1e-6;
    }
    c.Expect(ok, "round trip submission");
  }
}

void ProfileValidation(Check& c) {
  SynthConfig cfg;
  cfg.n_blacklist = 37;
  cfg.n_background = 23;
  cfg.n_test = 10;
  cfg.dim = 6;
  cfg.seed = 3;
  SynthCorpus corpus = Generate(cfg);
  c.Expect(ValidateProfile(corpus.train_blacklist, TrainBlacklistProfile(cfg)).pass(),
           "train blacklist profile");
  c.Expect(ValidateProfile(corpus.dev_blacklist, DevBlacklistProfile(cfg)).pass(),
           "dev blacklist profile");
  c.Expect(ValidateProfile(corpus.train_background, TrainBackgroundProfile(cfg)).pass(),
           "train background profile");
  c.Expect(ValidateProfile(corpus.dev_background, DevBackgroundProfile(cfg)).pass(),
           "dev background profile");

  // Drop the fifth utterance.
  Dataset trimmed("trn_blacklist", DatasetKind::kBlacklist);
  const std::string dropped = corpus.train_blacklist[4].id.speaker_prefix();
  for (std::size_t i = 0; i < corpus.train_blacklist.size(); ++i) {
    if (i != 4) trimmed.Add(corpus.train_blacklist[i]);
  }
  ProfileReport r = ValidateProfile(trimmed, TrainBlacklistProfile(cfg));
  c.Expect(!r.pass(), "trimmed set must fail");
  const std::string want = "speaker " + dropped + " has 2 utterances, expected 3";
  c.Expect(r.deviations.size() == 2 && r.deviations[0] == want &&
               r.deviations[1] == "total utterances 110, expected 111",
           "diagnostic: " + (r.deviations.empty() ? "" : r.deviations[0]));

  Dataset dev_trimmed("dev_blacklist", DatasetKind::kBlacklist);
  for (std::size_t i = 1; i < corpus.dev_blacklist.size(); ++i) {
    dev_trimmed.Add(corpus.dev_blacklist[i]);
  }
  ProfileReport d = ValidateProfile(dev_trimmed, DevBlacklistProfile(cfg));
  c.Expect(!d.pass() && d.deviations[0] == "speaker count 36, expected 37",
           "dev diagnostic");
}

void Determinism(Check& c) {
  const auto root = oracle::ScratchDir("determinism");
  std::ostringstream out, err;
  for (const char* sub : {"a", "b"}) {
    cli::SynthOptions s{SeparableConfig(), root / sub};
    s.config.seed = 1;
    c.Expect(cli::RunSynth(s, out, err) == cli::kExitOk, "synth");
  }
  for (const char* name : {"trn_blacklist.csv", "trn_background.csv",
                           "dev_blacklist.csv", "dev_background.csv",
                           "tst_mix.csv", "bl_matching.csv", "tst_key.csv"}) {
    const std::string a = Slurp(root / "a" / name);
    c.Expect(!a.empty() && a == Slurp(root / "b" / name),
             std::string("byte-identical ") + name);
  }
  std::vector<std::string> outputs;
  for (std::size_t workers : {1u, 2u, 4u, 7u}) {
    cli::ScoreOptions score;
    score.train_blacklist = root / "a" / "trn_blacklist.csv";
    score.matching = root / "a" / "bl_matching.csv";
    score.test = root / "a" / "tst_mix.csv";
    score.out = root / ("sub_" + std::to_string(workers) + ".csv");
    score.workers = workers;
    c.Expect(cli::RunScore(score, out, err) == cli::kExitOk, "score");
    outputs.push_back(Slurp(score.out));
  }
  for (const auto& o : outputs) {
    c.Expect(!o.empty() && o == outputs.front(), "worker-count invariance");
  }
  std::filesystem::remove_all(root);
}

struct Criterion {
  const char* id;
  const char* name;
  double time_limit_s;  // 0 means none
  std::function<void(Check&)> run;
};

}  // namespace
}  // namespace mtdet

int main() {
  using namespace mtdet;
  const std::vector<Criterion> criteria = {
      {"AC-1", "metric oracle equivalence (200 sets, EER tol 1e-9)", 30.0, MetricOracle},
      {"AC-2", "Top-1 FA equality and miss dominance", 0.0, FaEqualityMissDominance},
      {"AC-3", "M-Norm moments and modes (tol 1e-9)", 0.0, MNormMoments},
      {"AC-4", "hand-computed fixtures", 0.0, HandFixtures},
      {"AC-5", "end-to-end separable run: both EERs 0", 5.0, EndToEndSeparable},
      {"AC-6", "shuffled-key control: EERs in [0.45, 0.55]", 0.0, ChanceControl},
      {"AC-7", "format fidelity", 0.0, FormatFidelity},
      {"AC-8", "profile validation logic", 0.0, ProfileValidation},
      {"AC-9", "determinism (synth and scorer workers)", 0.0, Determinism},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.time_limit_s > 0) {
      check.Expect(secs < cr.time_limit_s,
                   "runtime " + std::to_string(secs) + " s over limit");
    }
    const bool pass = check.failures() == 0;
    failed += !pass;
    std::printf("[%s] %s %s (%.2f s)\n", pass ? "PASS" : "FAIL", cr.id, cr.name, secs);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
