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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.h"

int main(int argc, char** argv) {
  using namespace mtdet;
  using namespace mtdet::cli;

  CLI::App app{"Multi-target speaker detection: enrollment, scoring, M-Norm, "
               "Top-S/Top-1 evaluation"};
  app.require_subcommand(1);

  const std::map<std::string, MNormMode> mnorm_modes = {
      {"full", MNormMode::kFull}, {"shift", MNormMode::kShift},
      {"scale", MNormMode::kScale}, {"off", MNormMode::kOff}};
  const std::map<std::string, SpeakerSet> cohorts = {
      {"train", SpeakerSet::kTrain}, {"dev", SpeakerSet::kDev}};

  ValidateOptions validate;
  auto* cmd_validate = app.add_subcommand(
      "validate", "Check dataset files against the expected corpus profile");
  cmd_validate->add_option("--data-dir", validate.data_dir,
                           "Directory holding the standard file names");
  cmd_validate->add_option("--trn-blacklist", validate.train_blacklist);
  cmd_validate->add_option("--trn-background", validate.train_background);
  cmd_validate->add_option("--dev-blacklist", validate.dev_blacklist);
  cmd_validate->add_option("--dev-background", validate.dev_background);
  cmd_validate->add_option("--matching", validate.matching, "bl_matching.csv");
  cmd_validate->add_option("--blacklist-speakers", validate.blacklist_speakers)
      ->capture_default_str();
  cmd_validate->add_option("--background-speakers", validate.background_speakers)
      ->capture_default_str();
  cmd_validate->add_option("--train-bl-utts", validate.train_blacklist_utts,
                           "Utterances per blacklist speaker in train")
      ->capture_default_str();
  cmd_validate->add_option("--train-bg-min-utts",
                           validate.train_background_min_utts,
                           "Minimum utterances per background speaker in train")
      ->capture_default_str();
  cmd_validate->add_option("--train-bg-total", validate.train_background_total,
                           "Expected train background total");

  ScoreOptions score;
  auto* cmd_score = app.add_subcommand(
      "score", "Enroll the blacklist, score a test set and write a submission");
  cmd_score->add_option("--trn-blacklist", score.train_blacklist)->required();
  cmd_score->add_option("--matching", score.matching)->required();
  cmd_score->add_option("--test", score.test, "Test i-vectors (tst_mix.csv)")
      ->required();
  cmd_score->add_option("--out", score.out, "Submission file to write")
      ->required();
  cmd_score->add_option("--dev-blacklist", score.dev_blacklist,
                        "Dev blacklist i-vectors, for --cohort dev");
  cmd_score->add_option("--cohort", score.cohort, "M-Norm cohort")
      ->transform(CLI::CheckedTransformer(cohorts, CLI::ignore_case))
      ->default_str("train");
  cmd_score->add_flag("--exclude-own", score.exclude_own,
                      "Drop each detector's own speaker from its cohort");
  cmd_score->add_option("--mnorm", score.mnorm, "M-Norm mode")
      ->transform(CLI::CheckedTransformer(mnorm_modes, CLI::ignore_case))
      ->default_str("full");
  cmd_score->add_option("--sigma-floor", score.sigma_floor,
                        "Lower bound on the M-Norm sigma")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_score->add_option("--workers", score.workers, "Scoring threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_score->add_option("--save-models", score.save_models,
                        "Write enrolled models to a binary cache");
  cmd_score->add_option("--load-models", score.load_models,
                        "Read enrolled models from a binary cache");

  EvaluateOptions evaluate;
  auto* cmd_evaluate = app.add_subcommand(
      "evaluate", "Top-S and Top-1 EER of a submission against a key");
  cmd_evaluate->add_option("--submission", evaluate.submission)->required();
  cmd_evaluate->add_option("--key", evaluate.key)->required();
  cmd_evaluate->add_option("--matching", evaluate.matching)->required();
  cmd_evaluate->add_option("--det-out", evaluate.det_out,
                           "Prefix for <prefix>_top_s.csv / _top_1.csv");
  cmd_evaluate->add_option("--shuffle-key", evaluate.shuffle_key_seed,
                           "Shuffle key labels with this seed (control run)");
  cmd_evaluate->add_flag("--machine", evaluate.machine, "key=value output");

  SynthOptions synth;
  auto* cmd_synth =
      app.add_subcommand("synth", "Generate a synthetic challenge corpus");
  cmd_synth->add_option("--out-dir", synth.out_dir)->required();
  cmd_synth->add_option("--n-blacklist", synth.config.n_blacklist)
      ->capture_default_str();
  cmd_synth->add_option("--n-background", synth.config.n_background)
      ->capture_default_str();
  cmd_synth->add_option("--train-bl-utts", synth.config.train_utts_per_blacklist)
      ->capture_default_str();
  cmd_synth->add_option("--train-bg-utts",
                        synth.config.train_utts_per_background)
      ->capture_default_str();
  cmd_synth->add_option("--n-test", synth.config.n_test)->capture_default_str();
  cmd_synth->add_option("--dim", synth.config.dim)->capture_default_str();
  cmd_synth->add_option("--intra-std", synth.config.intra_speaker_std)
      ->capture_default_str();
  cmd_synth->add_option("--inter-std", synth.config.inter_speaker_std)
      ->capture_default_str();
  cmd_synth->add_option("--test-bl-fraction",
                        synth.config.test_blacklist_fraction)
      ->capture_default_str();
  cmd_synth->add_option("--seed", synth.config.seed)->capture_default_str();

  DetOptions det;
  auto* cmd_det = app.add_subcommand(
      "det", "Single-target DET curve and EER from <score>,<target|nontarget>");
  cmd_det->add_option("--trials", det.trials)->required();
  cmd_det->add_option("--det-out", det.out, "DET CSV to write");
  cmd_det->add_flag("--machine", det.machine, "key=value output");

  CLI11_PARSE(app, argc, argv);

  if (*cmd_validate) return RunValidate(validate, std::cout, std::cerr);
  if (*cmd_score) return RunScore(score, std::cout, std::cerr);
  if (*cmd_evaluate) return RunEvaluate(evaluate, std::cout, std::cerr);
  if (*cmd_synth) return RunSynth(synth, std::cout, std::cerr);
  if (*cmd_det) return RunDet(det, std::cout, std::cerr);
  return kExitUsage;
}
