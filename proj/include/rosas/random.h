/*
 * Copyright 2026 The rosas Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ROSAS_RANDOM_H_
#define ROSAS_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace rosas {

using Rng = std::mt19937_64;

// Derives an independent generator for a named pipeline stage ("init",
// "batching", "augmentation", "splits", ...). Streams for different names do
// not overlap, so toggling one stage leaves the draws of the others intact.
Rng Substream(std::uint64_t master_seed, std::string_view name);

// 64-bit FNV-1a.
std::uint64_t Fnv1a(std::string_view bytes,
                    std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace rosas

#endif  // ROSAS_RANDOM_H_
