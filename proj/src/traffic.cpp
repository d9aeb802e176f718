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

#include "ponsim/traffic.hpp"

#include <cmath>

#include "ponsim/errors.hpp"

namespace ponsim {

TrafficSource::TrafficSource(TrafficModel model, double rate_cells_per_s,
                             std::uint64_t master_seed, std::uint64_t stream)
    : model_(model),
      rate_(rate_cells_per_s),
      cbr_gap_(0),
      mean_gap_ticks_(0.0),
      prng_(make_stream(master_seed, stream)) {
  if (!(rate_ > 0)) throw ValidationError("traffic rate must be > 0");
  mean_gap_ticks_ = static_cast<double>(kLineRateBps) / rate_;
  cbr_gap_ = static_cast<BitTime>(std::llround(mean_gap_ticks_));
  if (cbr_gap_ == 0) cbr_gap_ = 1;
}

BitTime TrafficSource::next_gap() {
  if (model_ == TrafficModel::Cbr) return cbr_gap_;
  std::exponential_distribution<double> exp(1.0);
  const double gap = exp(prng_) * mean_gap_ticks_;
  const auto ticks = static_cast<BitTime>(std::llround(gap));
  return ticks == 0 ? 1 : ticks;
}

} // namespace ponsim
