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

#include "commands.h"

#include <fstream>
#include <functional>
#include <iostream>
#include <vector>

#include "mtdet/ingestion.h"
#include "mtdet/metrics.h"
#include "mtdet/model_cache.h"

namespace mtdet::cli {

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat:
    case ErrorKind::kDimension:
    case ErrorKind::kDuplicate:
    case ErrorKind::kUnknownId:
      return kExitParse;
    case ErrorKind::kDegenerate: return kExitDegenerate;
    case ErrorKind::kCoverage: return kExitCoverage;
    case ErrorKind::kIo: return kExitIo;
  }
  return kExitUsage;
}

namespace {

std::ifstream OpenInput(const Path& path, bool binary = false) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorKind::kIo, path.string() + ": file not found");
  }
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorKind::kIo, path.string() + ": cannot open");
  return in;
}

std::ofstream OpenOutput(const Path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::out
                                 : std::ios::out);
  if (!out) throw Error(ErrorKind::kIo, path.string() + ": cannot write");
  return out;
}

// Runs `read` on the opened file, prefixing any error with the path.
template <typename Reader>
auto ReadFile(const Path& path, Reader&& read) {
  std::ifstream in = OpenInput(path);
  try {
    return read(in);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kCoverage) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

Dataset LoadDataset(const Path& path, DatasetKind kind) {
  return ReadFile(path, [&](std::istream& in) {
    return ReadIVectorCsv(in, std::nullopt, path.stem().string(), kind);
  });
}

SpeakerRegistry LoadRegistry(const Path& path) {
  return ReadFile(path, [](std::istream& in) { return ReadBlMatching(in); });
}

int Guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace

int RunValidate(const ValidateOptions& opts, std::ostream& out,
                std::ostream& err) {
  return Guarded(err, [&] {
    struct Job {
      std::optional<Path> path;
      const char* file_name;
      DatasetKind kind;
      DatasetProfile profile;
    };
    const bool full_corpus =
        opts.blacklist_speakers == 3631 && opts.background_speakers == 5000 &&
        opts.train_background_min_utts == 4;
    const std::size_t bg_total = opts.train_background_total.value_or(
        full_corpus ? 30952
                    : opts.background_speakers * opts.train_background_min_utts);
    std::vector<Job> jobs = {
        {opts.train_blacklist, "trn_blacklist.csv", DatasetKind::kBlacklist,
         {opts.blacklist_speakers, opts.train_blacklist_utts, false,
          opts.blacklist_speakers * opts.train_blacklist_utts}},
        {opts.train_background, "trn_background.csv", DatasetKind::kBackground,
         {opts.background_speakers, opts.train_background_min_utts, true,
          bg_total}},
        {opts.dev_blacklist, "dev_blacklist.csv", DatasetKind::kBlacklist,
         {opts.blacklist_speakers, 1, false, opts.blacklist_speakers}},
        {opts.dev_background, "dev_background.csv", DatasetKind::kBackground,
         {opts.background_speakers, 1, false, opts.background_speakers}},
    };
    std::optional<Path> matching = opts.matching;
    if (opts.data_dir) {
      for (Job& job : jobs) {
        const Path candidate = *opts.data_dir / job.file_name;
        if (!job.path && std::filesystem::exists(candidate)) job.path = candidate;
      }
      const Path candidate = *opts.data_dir / "bl_matching.csv";
      if (!matching && std::filesystem::exists(candidate)) matching = candidate;
    }

    bool any = false, all_pass = true;
    for (const Job& job : jobs) {
      if (!job.path) continue;
      any = true;
      Dataset ds = LoadDataset(*job.path, job.kind);
      ProfileReport report = ValidateProfile(ds, job.profile);
      out << report.ToString();
      all_pass = all_pass && report.pass();
    }
    if (matching) {
      any = true;
      SpeakerRegistry registry = LoadRegistry(*matching);
      const bool ok = registry.size() == opts.blacklist_speakers;
      out << matching->filename().string() << ": " << registry.size()
          << " blacklist speakers, expected " << opts.blacklist_speakers
          << '\n'
          << (ok ? "PASS" : "FAIL") << '\n';
      all_pass = all_pass && ok;
    }
    if (!any) {
      err << "error: no dataset files given (use --data-dir or file flags)\n";
      return static_cast<int>(kExitUsage);
    }
    return static_cast<int>(all_pass ? kExitOk : kExitValidation);
  });
}

int RunScore(const ScoreOptions& opts, std::ostream& /*out*/,
             std::ostream& err) {
  return Guarded(err, [&] {
    const SpeakerRegistry registry = LoadRegistry(opts.matching);
    const Dataset train = LoadDataset(opts.train_blacklist, DatasetKind::kBlacklist);
    const Dataset test = LoadDataset(opts.test, DatasetKind::kMixed);

    std::vector<SpeakerModel> models;
    if (opts.load_models) {
      std::ifstream in = OpenInput(*opts.load_models, true);
      models = ReadModelCache(in);
    } else {
      models = Enroll(train, registry, SpeakerSet::kTrain);
    }
    if (opts.save_models) {
      std::ofstream cache = OpenOutput(*opts.save_models, true);
      WriteModelCache(cache, models);
    }

    const CosineScorer scorer(opts.workers);
    ScoreMatrix scores = scorer.Score(models, test);
    if (opts.mnorm != MNormMode::kOff) {
      Dataset dev;
      const Dataset* cohort = &train;
      if (opts.cohort == SpeakerSet::kDev) {
        if (!opts.dev_blacklist) {
          throw Error(ErrorKind::kFormat,
                      "--cohort dev requires --dev-blacklist");
        }
        dev = LoadDataset(*opts.dev_blacklist, DatasetKind::kBlacklist);
        cohort = &dev;
      }
      const ScoreMatrix cohort_scores = scorer.Score(models, *cohort);
      const MNormParams params =
          opts.exclude_own
              ? ComputeMNormParamsExcludingOwn(
                    cohort_scores, ResolveSpeakers(*cohort, registry, opts.cohort))
              : ComputeMNormParams(cohort_scores);
      scores = ApplyMNorm(scores, params, opts.mnorm, opts.sigma_floor);
      err << "m-norm cohort: " << cohort->name() << " ("
          << params.cohort_size << " utterances)\n";
    }

    const std::vector<Detection> detections = TopDetections(scores);
    const Submission sub = DetectionsToSubmission(detections);
    std::ofstream file = OpenOutput(opts.out);
    WriteSubmission(file, sub);
    file.flush();
    if (!file) throw Error(ErrorKind::kIo, opts.out.string() + ": write failed");
    err << "S=" << scores.rows() << " N=" << scores.cols()
        << " mnorm=" << MNormModeName(opts.mnorm) << " -> "
        << opts.out.string() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int RunEvaluate(const EvaluateOptions& opts, std::ostream& out,
                std::ostream& err) {
  return Guarded(err, [&] {
    const SpeakerRegistry registry = LoadRegistry(opts.matching);
    const Submission sub = ReadFile(opts.submission, [&](std::istream& in) {
      return ReadSubmission(in, registry);
    });
    GroundTruthKey key =
        ReadFile(opts.key, [](std::istream& in) { return ReadKey(in); });
    if (opts.shuffle_key_seed) {
      key = ShuffleLabels(key, *opts.shuffle_key_seed);
      err << "ground-truth labels shuffled with seed " << *opts.shuffle_key_seed
          << '\n';
    }
    const EvaluationReport report = EvaluateSubmission(sub, key, registry);
    out << (opts.machine ? report.ToMachine() : report.ToText());
    if (opts.det_out) {
      for (const ErrorCurve* curve : {&report.top_s, &report.top_1}) {
        const Path path = opts.det_out->string() + "_" +
                          CurveKindName(curve->kind) + ".csv";
        std::ofstream file = OpenOutput(path);
        ExportDet(file, *curve);
        err << "wrote " << path.string() << '\n';
      }
    }
    return static_cast<int>(kExitOk);
  });
}

int RunSynth(const SynthOptions& opts, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const SynthCorpus corpus = Generate(opts.config);
    WriteCorpus(opts.out_dir, corpus);
    out << opts.config.ToString() << '\n';
    err << "wrote synthetic corpus to " << opts.out_dir.string() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int RunDet(const DetOptions& opts, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const std::vector<TargetTrial> trials = ReadFile(
        opts.trials, [](std::istream& in) { return ReadTargetTrials(in); });
    const ErrorCurve curve = SingleTargetCurve(trials);
    const EerResult eer = ComputeEer(curve);
    if (opts.out) {
      std::ofstream file = OpenOutput(*opts.out);
      ExportDet(file, curve);
    }
    if (opts.machine) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "eer=%.6f\ntheta=%.9g\n", eer.eer,
                    eer.theta);
      out << "trials=" << trials.size() << '\n' << buf;
    } else {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%.6f%% at threshold %.9g", 100.0 * eer.eer,
                    eer.theta);
      out << "EER: " << buf << " over " << trials.size() << " trials\n";
    }
    return static_cast<int>(kExitOk);
  });
}

}  // namespace mtdet::cli
