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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "vendor/doctest.h"

#include <stdexcept>

#include "ponsim/metrics.hpp"

using namespace ponsim;

TEST_CASE("p95 uses the nearest-rank rule") {
  LatencySketch s;
  for (int v = 100; v >= 1; --v) s.add(static_cast<std::uint64_t>(v));
  CHECK(s.count() == 100);
  CHECK(s.p95_ticks() == 95); // rank ceil(0.95 * 100) = 95
  CHECK(s.mean_ticks() == doctest::Approx(50.5));

  LatencySketch one;
  one.add(42);
  CHECK(one.p95_ticks() == 42);
  CHECK(one.mean_ticks() == doctest::Approx(42.0));

  LatencySketch twenty;
  for (int v = 1; v <= 20; ++v) twenty.add(static_cast<std::uint64_t>(v));
  CHECK(twenty.p95_ticks() == 19); // rank ceil(0.95 * 20) = 19

  LatencySketch empty;
  CHECK(empty.p95_ticks() == 0);
  CHECK(empty.mean_ticks() == doctest::Approx(0.0));
}

TEST_CASE("sketch accepts samples after a percentile query") {
  LatencySketch s;
  s.add(10);
  CHECK(s.p95_ticks() == 10);
  s.add(5);
  s.add(30);
  CHECK(s.p95_ticks() == 30);
  CHECK(s.sum_ticks() == 45);
}

TEST_CASE("record_delivery samples grant-minus-enqueue latency") {
  OntCounters c;
  record_delivery(c, 100, 4500);
  CHECK(c.delivered == 1);
  CHECK(c.latency.sum_ticks() == 4400);
  CHECK_THROWS_AS(record_delivery(c, 5000, 4500), std::logic_error);
}

TEST_CASE("conservation audit balances every cell") {
  std::map<std::uint32_t, OntCounters> per_ont;
  OntCounters& a = per_ont[1];
  a.generated = 100;
  a.delivered = 80;
  a.collisions = 5;
  a.power_faults = 3;
  a.queued_end = 10;
  a.dropped = 2;
  OntCounters& b = per_ont[2];
  b.generated = 7;
  b.delivered = 7;

  const AuditResult ok = audit_conservation(per_ont);
  CHECK(ok.pass);
  CHECK(ok.residuals.at(1) == 0);
  CHECK(ok.residuals.at(2) == 0);

  a.delivered = 79; // one cell vanished
  const AuditResult bad = audit_conservation(per_ont);
  CHECK_FALSE(bad.pass);
  CHECK(bad.residuals.at(1) == 1);

  a.delivered = 82; // cells out of nowhere are just as fatal
  CHECK_FALSE(audit_conservation(per_ont).pass);
  CHECK(audit_conservation(per_ont).residuals.at(1) == -2);
}
