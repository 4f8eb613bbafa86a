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

#include "mtdet/model_cache.h"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace mtdet {
namespace {

constexpr char kMagic[4] = {'M', 'T', 'D', 'M'};

template <typename T>
void PutLe(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T GetLe(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error(ErrorKind::kFormat, "model cache is truncated");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

}  // namespace

void WriteModelCache(std::ostream& out, std::span<const SpeakerModel> models) {
  const std::uint64_t dim = models.empty() ? 0 : models.front().centroid.dim();
  for (const SpeakerModel& m : models) {
    if (m.centroid.dim() != dim) {
      throw Error(ErrorKind::kDimension, "models disagree on dimension");
    }
  }
  out.write(kMagic, sizeof(kMagic));
  PutLe<std::uint32_t>(out, kModelCacheVersion);
  PutLe<std::uint64_t>(out, models.size());
  PutLe<std::uint64_t>(out, dim);
  for (const SpeakerModel& m : models) out.write(m.global_id.str().data(), 8);
  for (const SpeakerModel& m : models) {
    for (double v : m.centroid.values()) {
      PutLe<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    }
  }
  if (!out) throw Error(ErrorKind::kIo, "failed writing model cache");
}

std::vector<SpeakerModel> ReadModelCache(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorKind::kFormat, "not a model cache (bad magic)");
  }
  const auto version = GetLe<std::uint32_t>(in);
  if (version != kModelCacheVersion) {
    throw Error(ErrorKind::kFormat,
                "unsupported model cache version " + std::to_string(version));
  }
  const auto count = GetLe<std::uint64_t>(in);
  const auto dim = GetLe<std::uint64_t>(in);
  if (count > 0 && dim == 0) {
    throw Error(ErrorKind::kFormat, "model cache declares zero dimension");
  }
  std::vector<GlobalId> ids;
  for (std::uint64_t i = 0; i < count; ++i) {
    char raw[8];
    if (!in.read(raw, sizeof(raw))) {
      throw Error(ErrorKind::kFormat, "model cache is truncated");
    }
    ids.push_back(GlobalId::Parse(std::string_view(raw, sizeof(raw))));
  }
  std::vector<SpeakerModel> models;
  models.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<double> values(dim);
    for (double& v : values) v = std::bit_cast<double>(GetLe<std::uint64_t>(in));
    models.push_back({std::move(ids[i]), IVector(std::move(values))});
  }
  return models;
}

}  // namespace mtdet
