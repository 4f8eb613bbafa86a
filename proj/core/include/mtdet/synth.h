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

// Synthetic challenge corpora with the structure of the real data: blacklist
// speakers seen N times in train and once in dev under different prefixes,
// background speakers, and an unlabeled test mix with a ground-truth key.
//
// Speakers are isotropic Gaussian clusters: a centroid ~ N(0, inter^2 I) and
// utterances centroid + N(0, intra^2 I). Everything is derived from one seed.

#ifndef MTDET_SYNTH_H_
#define MTDET_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "mtdet/ingestion.h"
#include "mtdet/types.h"

namespace mtdet {

struct SynthConfig {
  std::size_t n_blacklist = 50;
  std::size_t n_background = 100;
  std::size_t train_utts_per_blacklist = 3;
  std::size_t train_utts_per_background = 4;
  std::size_t n_test = 2000;
  std::size_t dim = 32;
  double intra_speaker_std = 0.5;
  double inter_speaker_std = 1.0;
  double test_blacklist_fraction = 0.5;
  std::uint64_t seed = 1;

  // Throws Error(kFormat) describing the first invalid field.
  void Validate() const;
  std::string ToString() const;
};

// Number of distinct 4-letter prefixes available per set.
inline constexpr std::size_t kPrefixSpace = 26 * 26 * 26 * 26;

struct SynthCorpus {
  Dataset train_blacklist;
  Dataset train_background;
  Dataset dev_blacklist;
  Dataset dev_background;
  Dataset test_mix;
  SpeakerRegistry registry;
  GroundTruthKey key;
};

// Throws Error(kFormat) for an invalid config and Error(kDegenerate) when a
// set needs more than kPrefixSpace speakers.
SynthCorpus Generate(const SynthConfig& config);

// Profiles the generated sets satisfy by construction.
DatasetProfile TrainBlacklistProfile(const SynthConfig& config);
DatasetProfile TrainBackgroundProfile(const SynthConfig& config);
DatasetProfile DevBlacklistProfile(const SynthConfig& config);
DatasetProfile DevBackgroundProfile(const SynthConfig& config);

// Writes trn_blacklist.csv, trn_background.csv, dev_blacklist.csv,
// dev_background.csv, tst_mix.csv, bl_matching.csv and tst_key.csv into
// `dir`, creating it if needed. Throws Error(kIo).
void WriteCorpus(const std::filesystem::path& dir, const SynthCorpus& corpus);

// Negative control: permutes which utterances are labeled blacklist, keeping
// the number of each class. Utterances that stay blacklisted keep their
// speaker; newly blacklisted ones take the speakers freed by utterances that
// became background, in random order.
GroundTruthKey ShuffleLabels(const GroundTruthKey& key, std::uint64_t seed);

}  // namespace mtdet

#endif  // MTDET_SYNTH_H_
