#include "mpr/countermeasures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mpr/random.hpp"

namespace mpr {

TofPrecision tof_precision(double data_rate_bps, double c) {
  return tof_precision(data_rate_bps, c, c);
}

TofPrecision tof_precision(double data_rate_bps, double c, double distance_per_second) {
  if (!(data_rate_bps > 0.0)) throw std::invalid_argument("data rate must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("speed of light must be positive");
  if (std::isinf(data_rate_bps)) return {0.0, 0.0};
  const double t = 1.0 / data_rate_bps;
  return {t, t * distance_per_second};
}

TofGate make_tof_gate(double data_rate_bps, double c) {
  const auto p = tof_precision(data_rate_bps, c);
  return {data_rate_bps, p.seconds, p.meters};
}

bool rough_tof_gate(double true_roundtrip_delay_s, double claimed_distance_m, const TofGate& gate,
                    double c) {
  const double implied = 0.5 * c * true_roundtrip_delay_s;
  return implied - claimed_distance_m <= gate.granularity_m;
}

std::vector<std::size_t> hop_schedule(std::uint64_t secret_seed, const FrequencyPlan& plan) {
  std::vector<std::size_t> order(plan.count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (secret_seed == 0) return order;
  Rng rng(derive_seed(secret_seed, {tag(StreamTag::kHopSchedule)}));
  std::shuffle(order.begin(), order.end(), rng.engine());
  return order;
}

std::vector<WrappedPhase> secret_offsets(std::uint64_t secret_seed, const FrequencyPlan& plan) {
  Rng rng(derive_seed(secret_seed, {tag(StreamTag::kSecretOffsets)}));
  std::vector<WrappedPhase> out(plan.count());
  for (auto& o : out) o = WrappedPhase(rng.phase());
  return out;
}

DetectorReport detect_anomaly(const PhaseProfile& profile, const RangeEstimate& estimate,
                              double threshold) {
  if (profile.phases.size() != profile.plan.count()) {
    throw std::invalid_argument("profile does not match its plan");
  }
  return {estimate.residual_rms, estimate.residual_rms > threshold, threshold};
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - w) + values[hi] * w;
}

}  // namespace mpr
