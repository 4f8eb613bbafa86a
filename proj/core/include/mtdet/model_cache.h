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

// Binary cache for enrolled speaker models.
//
// Layout, all integers and floats little-endian:
//   char[4]  magic "MTDM"
//   uint32   version (1)
//   uint64   S, number of models
//   uint64   dim
//   S x char[8]          global ids
//   S x dim x float64    centroids, model-major

#ifndef MTDET_MODEL_CACHE_H_
#define MTDET_MODEL_CACHE_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mtdet/detector.h"

namespace mtdet {

inline constexpr std::uint32_t kModelCacheVersion = 1;

// Throws Error(kDimension) if the models disagree on dimension.
void WriteModelCache(std::ostream& out, std::span<const SpeakerModel> models);

// Throws Error(kFormat) on bad magic, unsupported version or truncation.
std::vector<SpeakerModel> ReadModelCache(std::istream& in);

}  // namespace mtdet

#endif  // MTDET_MODEL_CACHE_H_
