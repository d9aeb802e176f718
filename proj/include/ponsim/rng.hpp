/*
 * Copyright 2026 The ponsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

namespace ponsim {

using Prng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for one named stream derived from the master seed. Streams are
/// independent: changing one stream index never perturbs another.
inline constexpr std::uint64_t stream_seed(std::uint64_t master_seed,
                                           std::uint64_t stream) {
  return splitmix64(master_seed ^ splitmix64(stream));
}

inline Prng make_stream(std::uint64_t master_seed, std::uint64_t stream) {
  return Prng{stream_seed(master_seed, stream)};
}

} // namespace ponsim
