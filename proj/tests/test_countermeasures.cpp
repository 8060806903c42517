#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "mpr/countermeasures.hpp"

using namespace mpr;

TEST_SUITE("countermeasures") {

TEST_CASE("timing precision is one bit period") {
  const auto p = tof_precision(2e6);
  CHECK(p.seconds == 500e-9);
  CHECK(p.meters == 150.0);
  const auto fast = tof_precision(4e6);
  CHECK(fast.seconds == 250e-9);
  CHECK(fast.meters == 75.0);
  CHECK(tof_precision(2e6, kSpeedOfLight, kSpeedOfLight / 2).meters == 75.0);
  CHECK(tof_precision(INFINITY).meters == 0.0);
  CHECK_THROWS_AS(tof_precision(0.0), std::invalid_argument);
  CHECK_THROWS_AS(tof_precision(-5.0), std::invalid_argument);
  const auto gate = make_tof_gate(2e6);
  CHECK(gate.data_rate_bps == 2e6);
  CHECK(gate.granularity_m == 150.0);
}

TEST_CASE("rough gate accepts reductions within its granularity") {
  const auto gate = make_tof_gate(2e6);
  auto rt = [](double d) { return 2.0 * d / kSpeedOfLight; };
  CHECK(rough_tof_gate(rt(30.0), 30.0, gate));
  CHECK(rough_tof_gate(rt(100.0), 1.0, gate));
  CHECK(rough_tof_gate(rt(151.0), 1.0, gate));
  CHECK_FALSE(rough_tof_gate(rt(151.5), 1.0, gate));
  CHECK_FALSE(rough_tof_gate(rt(200.0), 1.0, gate));
  CHECK(rough_tof_gate(rt(10.0), 60.0, gate));
  const auto tight = make_tof_gate(20e6);
  CHECK_FALSE(rough_tof_gate(rt(30.0), 1.0, tight));
}

TEST_CASE("hop schedules are seeded permutations") {
  const auto plan = FrequencyPlan::simulation_band(1e6);
  const auto identity = hop_schedule(0, plan);
  std::vector<std::size_t> expected(plan.count());
  std::iota(expected.begin(), expected.end(), std::size_t{0});
  CHECK(identity == expected);
  for (std::uint64_t seed : {1u, 2u, 77u}) {
    auto order = hop_schedule(seed, plan);
    CHECK(order == hop_schedule(seed, plan));
    CHECK(order != expected);
    std::sort(order.begin(), order.end());
    CHECK(order == expected);
  }
  CHECK(hop_schedule(1, plan) != hop_schedule(2, plan));
}

TEST_CASE("secret offsets are seeded and spread over the circle") {
  const auto plan = FrequencyPlan::simulation_band(1e6);
  const auto a = secret_offsets(5, plan);
  CHECK(a == secret_offsets(5, plan));
  CHECK(a != secret_offsets(6, plan));
  CHECK(a.size() == plan.count());
  double c = 0.0, s = 0.0;
  for (const auto& o : a) {
    c += std::cos(o.value());
    s += std::sin(o.value());
  }
  // Mean resultant length of 81 uniform angles is about 0.1.
  CHECK(std::hypot(c, s) / a.size() < 0.35);
}

TEST_CASE("detector compares the fit residual with its threshold") {
  const auto plan = FrequencyPlan::ism_profile();
  const auto clean = synthesize_phase_profile(30.0, plan);
  const auto est = estimate_range(clean);
  const auto report = detect_anomaly(clean, est);
  CHECK_FALSE(report.flagged);
  CHECK(report.threshold == kDefaultDetectorThreshold);

  auto bent = clean;
  bent.phases[10] = bent.phases[10] + WrappedPhase(1.0);
  const auto bent_est = estimate_range(bent);
  CHECK(detect_anomaly(bent, bent_est).flagged);
  CHECK_FALSE(detect_anomaly(bent, bent_est, 10.0).flagged);
}

TEST_CASE("percentile interpolates linearly between order statistics") {
  const std::vector<double> v{5.0, 1.0, 3.0, 2.0, 4.0};
  CHECK(percentile(v, 0.0) == 1.0);
  CHECK(percentile(v, 50.0) == 3.0);
  CHECK(percentile(v, 25.0) == 2.0);
  CHECK(percentile(v, 90.0) == doctest::Approx(4.6));
  CHECK(percentile(v, 100.0) == 5.0);
  CHECK_THROWS_AS(percentile({}, 50.0), std::invalid_argument);
  CHECK_THROWS_AS(percentile(v, 101.0), std::invalid_argument);
}

}  // TEST_SUITE
