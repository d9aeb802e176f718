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

#include "ponsim/engine.hpp"

#include <stdexcept>

namespace ponsim {

void Engine::attach(EntityId id, Handler handler) {
  handlers_[id] = std::move(handler);
}

std::uint64_t Engine::schedule(BitTime time, EntityId target,
                               EventPayload payload) {
  if (time < clock_)
    throw std::logic_error("event scheduled in the past (clock=" +
                           std::to_string(clock_) +
                           ", event=" + std::to_string(time) + ")");
  const std::uint64_t seq = next_seq_++;
  queue_.push(Event{time, target, seq, std::move(payload)});
  return seq;
}

void Engine::dispatch(Event&& e) {
  clock_ = e.time;
  ++dispatched_;
  if (trace_enabled_)
    trace_.push_back({e.time, e.target,
                      static_cast<std::uint8_t>(e.payload.index()), e.seq});
  auto it = handlers_.find(e.target);
  if (it == handlers_.end())
    throw std::logic_error("event for unknown entity " +
                           std::to_string(e.target));
  it->second(e);
}

void Engine::run_until(BitTime t_end) {
  while (!queue_.empty() && queue_.top().time <= t_end) {
    Event e = queue_.top();
    queue_.pop();
    dispatch(std::move(e));
  }
  if (t_end > clock_) clock_ = t_end;
}

void Engine::run_all() {
  while (!queue_.empty()) {
    Event e = queue_.top();
    queue_.pop();
    dispatch(std::move(e));
  }
}

} // namespace ponsim
