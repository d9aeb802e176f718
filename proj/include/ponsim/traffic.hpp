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

#include "ponsim/bit_time.hpp"
#include "ponsim/rng.hpp"

namespace ponsim {

enum class TrafficModel { Cbr, Poisson };

/// Cell arrival generator for one ONT. Each source owns a PRNG stream
/// derived from (master seed, stream index), so adding or reseeding one
/// source never perturbs the others.
class TrafficSource {
 public:
  TrafficSource(TrafficModel model, double rate_cells_per_s,
                std::uint64_t master_seed, std::uint64_t stream);

  /// Ticks until the next arrival. CBR: exact 1/rate spacing rounded to
  /// ticks; Poisson: exponential inter-arrival.
  BitTime next_gap();

  double rate_cells_per_s() const { return rate_; }

 private:
  TrafficModel model_;
  double rate_;
  BitTime cbr_gap_;
  double mean_gap_ticks_;
  Prng prng_;
};

} // namespace ponsim
