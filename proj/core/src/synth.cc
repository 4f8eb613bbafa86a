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

#include "mtdet/synth.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

#include "mtdet/rng.h"

namespace mtdet {

double Rng::Gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // 1 - U keeps the log argument in (0, 1].
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

void SynthConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::kFormat, std::string("synth config: ") + what);
  };
  require(n_blacklist > 0, "n_blacklist must be positive");
  require(n_background > 0, "n_background must be positive");
  require(train_utts_per_blacklist > 0, "train_utts_per_blacklist must be positive");
  require(train_utts_per_background > 0,
          "train_utts_per_background must be positive");
  require(n_test > 0, "n_test must be positive");
  require(dim > 0, "dim must be positive");
  require(intra_speaker_std > 0.0 && std::isfinite(intra_speaker_std),
          "intra_speaker_std must be positive");
  require(inter_speaker_std > 0.0 && std::isfinite(inter_speaker_std),
          "inter_speaker_std must be positive");
  require(test_blacklist_fraction >= 0.0 && test_blacklist_fraction <= 1.0,
          "test_blacklist_fraction must be in [0, 1]");
}

std::string SynthConfig::ToString() const {
  std::ostringstream os;
  os << "n_blacklist=" << n_blacklist << " n_background=" << n_background
     << " train_utts_per_blacklist=" << train_utts_per_blacklist
     << " train_utts_per_background=" << train_utts_per_background
     << " n_test=" << n_test << " dim=" << dim
     << " intra_speaker_std=" << intra_speaker_std
     << " inter_speaker_std=" << inter_speaker_std
     << " test_blacklist_fraction=" << test_blacklist_fraction
     << " seed=" << seed;
  return os.str();
}

namespace {

// Bijection on [0, kPrefixSpace) given by i -> (a * i + b) mod kPrefixSpace.
// kPrefixSpace = 2^4 * 13^4, so any a that is odd and not a multiple of 13 is
// invertible.
class PrefixSpace {
 public:
  explicit PrefixSpace(Rng& rng) {
    do {
      a_ = rng.Below(kPrefixSpace);
    } while (a_ % 2 == 0 || a_ % 13 == 0);
    b_ = rng.Below(kPrefixSpace);
  }

  std::string Prefix(std::size_t i) const {
    std::uint64_t code = (a_ * i + b_) % kPrefixSpace;
    std::string s(4, 'a');
    for (int pos = 3; pos >= 0; --pos) {
      s[pos] = static_cast<char>('a' + code % 26);
      code /= 26;
    }
    return s;
  }

 private:
  std::uint64_t a_ = 1;
  std::uint64_t b_ = 0;
};

std::vector<double> DrawCentroid(Rng& rng, std::size_t dim, double std) {
  std::vector<double> c(dim);
  for (double& x : c) x = std * rng.Gaussian();
  return c;
}

class UtteranceFactory {
 public:
  UtteranceFactory(Rng& rng, double intra_std) : rng_(rng), intra_(intra_std) {}

  Utterance Make(const std::string& prefix, const std::vector<double>& centroid,
                 std::set<std::string>& used_ids) {
    std::string id;
    do {
      id = prefix + "_" + std::to_string(100000 + rng_.Below(900000));
    } while (!used_ids.insert(id).second);
    std::vector<double> v(centroid.size());
    for (std::size_t d = 0; d < v.size(); ++d) {
      v[d] = centroid[d] + intra_ * rng_.Gaussian();
    }
    return {UtteranceId::Parse(id), IVector(std::move(v))};
  }

 private:
  Rng& rng_;
  double intra_;
};

template <typename T>
void Shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.Below(i)]);
  }
}

}  // namespace

SynthCorpus Generate(const SynthConfig& config) {
  config.Validate();
  if (config.n_blacklist + config.n_background > kPrefixSpace) {
    throw Error(ErrorKind::kDegenerate,
                "synthetic corpus needs " +
                    std::to_string(config.n_blacklist + config.n_background) +
                    " speaker prefixes per set, only " +
                    std::to_string(kPrefixSpace) + " exist");
  }
  if (config.n_blacklist >= 100000000) {
    throw Error(ErrorKind::kDegenerate, "too many blacklist speakers for 8-digit ids");
  }

  Rng rng(config.seed);
  const PrefixSpace train_space(rng);
  const PrefixSpace dev_space(rng);
  const PrefixSpace test_space(rng);
  const std::size_t nb = config.n_blacklist;
  const std::size_t ng = config.n_background;

  std::vector<std::vector<double>> blacklist(nb), train_bg(ng), dev_bg(ng),
      test_bg(ng);
  for (auto* group : {&blacklist, &train_bg, &dev_bg, &test_bg}) {
    for (auto& c : *group) c = DrawCentroid(rng, config.dim, config.inter_speaker_std);
  }

  SynthCorpus corpus{
      Dataset("trn_blacklist", DatasetKind::kBlacklist, config.dim),
      Dataset("trn_background", DatasetKind::kBackground, config.dim),
      Dataset("dev_blacklist", DatasetKind::kBlacklist, config.dim),
      Dataset("dev_background", DatasetKind::kBackground, config.dim),
      Dataset("tst_mix", DatasetKind::kMixed, config.dim),
      SpeakerRegistry(),
      GroundTruthKey()};

  // Blacklist speakers take indices [0, nb) of each prefix space, background
  // speakers [nb, nb + ng).
  for (std::size_t k = 0; k < nb; ++k) {
    corpus.registry.Add({GlobalId::FromIndex(k + 1), dev_space.Prefix(k),
                         train_space.Prefix(k)});
  }

  UtteranceFactory factory(rng, config.intra_speaker_std);
  std::set<std::string> used;
  for (std::size_t k = 0; k < nb; ++k) {
    for (std::size_t u = 0; u < config.train_utts_per_blacklist; ++u) {
      corpus.train_blacklist.Add(
          factory.Make(train_space.Prefix(k), blacklist[k], used));
    }
  }
  for (std::size_t k = 0; k < ng; ++k) {
    for (std::size_t u = 0; u < config.train_utts_per_background; ++u) {
      corpus.train_background.Add(
          factory.Make(train_space.Prefix(nb + k), train_bg[k], used));
    }
  }
  for (std::size_t k = 0; k < nb; ++k) {
    corpus.dev_blacklist.Add(factory.Make(dev_space.Prefix(k), blacklist[k], used));
  }
  for (std::size_t k = 0; k < ng; ++k) {
    corpus.dev_background.Add(
        factory.Make(dev_space.Prefix(nb + k), dev_bg[k], used));
  }

  // Test mix: an exact share of blacklist utterances, speakers drawn
  // uniformly, then the order shuffled.
  const auto n_bl_test = static_cast<std::size_t>(
      std::llround(config.test_blacklist_fraction * config.n_test));
  std::vector<std::pair<bool, std::size_t>> plan;
  plan.reserve(config.n_test);
  for (std::size_t t = 0; t < config.n_test; ++t) {
    const bool is_bl = t < n_bl_test;
    plan.emplace_back(is_bl, rng.Below(is_bl ? nb : ng));
  }
  Shuffle(plan, rng);
  for (const auto& [is_bl, k] : plan) {
    const std::string prefix = test_space.Prefix(is_bl ? k : nb + k);
    Utterance utt = factory.Make(prefix, is_bl ? blacklist[k] : test_bg[k], used);
    corpus.key.Add(utt.id,
                   is_bl ? std::optional<GlobalId>(GlobalId::FromIndex(k + 1))
                         : std::nullopt);
    corpus.test_mix.Add(std::move(utt));
  }
  return corpus;
}

DatasetProfile TrainBlacklistProfile(const SynthConfig& c) {
  return {c.n_blacklist, c.train_utts_per_blacklist, false,
          c.n_blacklist * c.train_utts_per_blacklist};
}

DatasetProfile TrainBackgroundProfile(const SynthConfig& c) {
  return {c.n_background, c.train_utts_per_background, true,
          c.n_background * c.train_utts_per_background};
}

DatasetProfile DevBlacklistProfile(const SynthConfig& c) {
  return {c.n_blacklist, 1, false, c.n_blacklist};
}

DatasetProfile DevBackgroundProfile(const SynthConfig& c) {
  return {c.n_background, 1, false, c.n_background};
}

namespace {

template <typename Writer>
void WriteFile(const std::filesystem::path& path, Writer&& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  write(out);
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "failed writing " + path.string());
}

}  // namespace

void WriteCorpus(const std::filesystem::path& dir, const SynthCorpus& corpus) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIo,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  for (const Dataset* ds :
       {&corpus.train_blacklist, &corpus.train_background,
        &corpus.dev_blacklist, &corpus.dev_background, &corpus.test_mix}) {
    WriteFile(dir / (ds->name() + ".csv"),
              [&](std::ostream& out) { WriteIVectorCsv(out, *ds); });
  }
  WriteFile(dir / "bl_matching.csv",
            [&](std::ostream& out) { WriteBlMatching(out, corpus.registry); });
  WriteFile(dir / "tst_key.csv",
            [&](std::ostream& out) { WriteKey(out, corpus.key); });
}

GroundTruthKey ShuffleLabels(const GroundTruthKey& key, std::uint64_t seed) {
  Rng rng(seed);
  const auto& entries = key.entries();
  std::vector<bool> mask;
  mask.reserve(entries.size());
  for (const auto& e : entries) mask.push_back(e.speaker.has_value());
  for (std::size_t i = mask.size(); i > 1; --i) {
    const std::size_t j = rng.Below(i);
    const bool tmp = mask[i - 1];
    mask[i - 1] = mask[j];
    mask[j] = tmp;
  }

  std::vector<GlobalId> freed;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].speaker && !mask[i]) freed.push_back(*entries[i].speaker);
  }
  Shuffle(freed, rng);

  GroundTruthKey out;
  std::size_t next = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::optional<GlobalId> speaker;
    if (mask[i]) {
      speaker = entries[i].speaker ? *entries[i].speaker : freed[next++];
    }
    out.Add(entries[i].utterance, std::move(speaker));
  }
  return out;
}

}  // namespace mtdet
