#include "mpr/ranging.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace mpr {

namespace {

constexpr double kRoundoffRad = 1e-9;
constexpr double kRoundoffM = 1e-9;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

// Fractional part in [0, 1).
double frac(double cycles) {
  double f = cycles - std::floor(cycles);
  return f >= 1.0 ? 0.0 : f;
}

}  // namespace

double wrap(double radians) {
  require_finite(radians, "phase");
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number plus 2π can round up to exactly 2π
  if (r >= kTwoPi) r = 0.0;
  return r;
}

FrequencyPlan::FrequencyPlan(double f_start_hz, double delta_f_hz, std::size_t count)
    : f_start_(f_start_hz), delta_f_(delta_f_hz), count_(count) {
  require_finite(f_start_hz, "f_start");
  require_finite(delta_f_hz, "delta_f");
  if (!(delta_f_hz > 0.0)) throw DegeneratePlanError("delta_f must be positive");
  if (count < 2) throw DegeneratePlanError("a frequency plan needs at least two carriers");
  if (!(f_start_hz > 0.0)) throw DegeneratePlanError("carrier frequencies must be positive");
}

FrequencyPlan FrequencyPlan::ism_profile() { return {2.403e9, 2.0e6, 20}; }

FrequencyPlan FrequencyPlan::simulation_band(double delta_f_hz) {
  if (!(delta_f_hz > 0.0)) throw DegeneratePlanError("delta_f must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(80.0e6 / delta_f_hz));
  return {2.40e9, delta_f_hz, steps + 1};
}

double FrequencyPlan::frequency(std::size_t i) const {
  if (i >= count_) throw std::out_of_range("carrier index out of range");
  return f_start_ + static_cast<double>(i) * delta_f_;
}

std::vector<double> FrequencyPlan::frequencies() const {
  std::vector<double> out(count_);
  for (std::size_t i = 0; i < count_; ++i) out[i] = frequency(i);
  return out;
}

PhaseProfile::PhaseProfile(FrequencyPlan p, std::vector<WrappedPhase> ph)
    : plan(p), phases(std::move(ph)) {
  if (phases.size() != plan.count()) {
    throw std::invalid_argument("phase profile length does not match the carrier count");
  }
}

WrappedPhase wrapped_roundtrip_phase(double distance_m, double frequency_hz, double c) {
  require_finite(distance_m, "distance");
  require_finite(frequency_hz, "frequency");
  if (distance_m < 0.0) throw std::invalid_argument("distance must be non-negative");
  if (!(frequency_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("speed of light must be positive");
  // Work in cycles so the large integer part is discarded before scaling.
  return WrappedPhase(kTwoPi * frac(2.0 * distance_m * frequency_hz / c));
}

double two_frequency_distance(WrappedPhase theta1, WrappedPhase theta2, double f1_hz,
                              double f2_hz, double c) {
  if (f1_hz == f2_hz) throw DegeneratePlanError("two-frequency ranging needs distinct carriers");
  if (!(f2_hz > f1_hz)) throw std::invalid_argument("f2 must exceed f1");
  const double hop = f2_hz - f1_hz;
  const double d_max = max_unambiguous_distance(hop, c);
  const double dtheta = (theta2 - theta1).value();
  return fold_distance(c / (4.0 * std::numbers::pi) * dtheta / hop, d_max);
}

PhaseProfile synthesize_phase_profile(double distance_m, const FrequencyPlan& plan, double c) {
  std::vector<WrappedPhase> phases;
  phases.reserve(plan.count());
  for (std::size_t i = 0; i < plan.count(); ++i) {
    phases.push_back(wrapped_roundtrip_phase(distance_m, plan.frequency(i), c));
  }
  return {plan, std::move(phases)};
}

std::vector<double> straighten(const PhaseProfile& profile) {
  const auto& ph = profile.phases;
  std::vector<double> out(ph.size());
  if (ph.empty()) return out;
  out[0] = ph[0].value();
  for (std::size_t i = 1; i < ph.size(); ++i) {
    double step = (ph[i] - ph[i - 1]).value();
    // A rounding-level negative difference is a zero step, not a full turn.
    if (kTwoPi - step < kRoundoffRad) step = 0.0;
    out[i] = out[i - 1] + step;
  }
  return out;
}

RangeEstimate fit_slope(std::span<const double> straightened, const FrequencyPlan& plan,
                        double c) {
  const std::size_t n = plan.count();
  if (straightened.size() != n) {
    throw std::invalid_argument("straightened sequence length does not match the carrier count");
  }
  // Regress against the carrier offset i*delta_f; keeps the normal equations
  // well conditioned with GHz-scale frequencies.
  const double mean_idx = (static_cast<double>(n) - 1.0) / 2.0;
  const double mean_y =
      std::accumulate(straightened.begin(), straightened.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = (static_cast<double>(i) - mean_idx) * plan.delta_f();
    sxy += dx * (straightened[i] - mean_y);
    sxx += dx * dx;
  }
  RangeEstimate est;
  est.slope = sxy / sxx;
  const double mean_f = plan.f_start() + mean_idx * plan.delta_f();
  est.intercept = mean_y - est.slope * mean_f;

  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = (static_cast<double>(i) - mean_idx) * plan.delta_f();
    const double r = straightened[i] - (mean_y + est.slope * dx);
    ss += r * r;
  }
  est.residual_rms = std::sqrt(ss / static_cast<double>(n));
  est.d_max = max_unambiguous_distance(plan.delta_f(), c);
  double raw = c / (4.0 * std::numbers::pi) * est.slope;
  if (raw < 0.0 && raw > -kRoundoffM) raw = 0.0;
  est.distance = fold_distance(raw, est.d_max);
  return est;
}

RangeEstimate estimate_range(const PhaseProfile& profile, double c) {
  const auto s = straighten(profile);
  return fit_slope(s, profile.plan, c);
}

double max_unambiguous_distance(double delta_f_hz, double c) {
  require_finite(delta_f_hz, "delta_f");
  if (!(delta_f_hz > 0.0)) throw DegeneratePlanError("delta_f must be positive");
  return c / (2.0 * delta_f_hz);
}

double fold_distance(double distance_m, double d_max_m) {
  require_finite(distance_m, "distance");
  if (!(d_max_m > 0.0)) throw std::invalid_argument("d_max must be positive");
  double r = std::fmod(distance_m, d_max_m);
  if (r < 0.0) r += d_max_m;
  if (r >= d_max_m) r = 0.0;
  return r;
}

}  // namespace mpr
