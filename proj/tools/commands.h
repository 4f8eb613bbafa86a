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

// Subcommand implementations for the mtdet tool. Each returns a process exit
// code; results go to `out`, diagnostics to `err`.

#ifndef MTDET_TOOLS_COMMANDS_H_
#define MTDET_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mtdet/detector.h"
#include "mtdet/error.h"
#include "mtdet/synth.h"

namespace mtdet::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,       // malformed or inconsistent input files
  kExitValidation = 3,  // dataset profile check failed
  kExitCoverage = 4,    // submission does not match the key
  kExitIo = 5,          // missing or unwritable file
  kExitDegenerate = 6,  // numerically undefined (zero sigma, empty class)
};

int ExitCodeFor(ErrorKind kind);

using Path = std::filesystem::path;

struct ValidateOptions {
  std::optional<Path> data_dir;
  std::optional<Path> train_blacklist;
  std::optional<Path> train_background;
  std::optional<Path> dev_blacklist;
  std::optional<Path> dev_background;
  std::optional<Path> matching;
  std::size_t blacklist_speakers = 3631;
  std::size_t background_speakers = 5000;
  std::size_t train_blacklist_utts = 3;
  std::size_t train_background_min_utts = 4;
  // Defaults to 30952 for the full corpus, speakers * min utts otherwise.
  std::optional<std::size_t> train_background_total;
};

struct ScoreOptions {
  Path train_blacklist;
  Path matching;
  Path test;
  Path out;
  std::optional<Path> dev_blacklist;  // required when cohort == kDev
  SpeakerSet cohort = SpeakerSet::kTrain;
  bool exclude_own = false;
  MNormMode mnorm = MNormMode::kFull;
  double sigma_floor = 0.0;
  std::size_t workers = 1;
  std::optional<Path> save_models;
  std::optional<Path> load_models;
};

struct EvaluateOptions {
  Path submission;
  Path key;
  Path matching;
  std::optional<Path> det_out;  // prefix; writes <prefix>_top_s.csv, _top_1.csv
  std::optional<std::uint64_t> shuffle_key_seed;
  bool machine = false;
};

struct SynthOptions {
  SynthConfig config;
  Path out_dir;
};

struct DetOptions {
  Path trials;
  std::optional<Path> out;
  bool machine = false;
};

int RunValidate(const ValidateOptions& opts, std::ostream& out, std::ostream& err);
int RunScore(const ScoreOptions& opts, std::ostream& out, std::ostream& err);
int RunEvaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err);
int RunSynth(const SynthOptions& opts, std::ostream& out, std::ostream& err);
int RunDet(const DetOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace mtdet::cli

#endif  // MTDET_TOOLS_COMMANDS_H_
