#pragma once

// Multicarrier phase-ranging arithmetic: phase synthesis, wrapping,
// straightening, slope fitting and rollover folding. Everything here is a
// pure function of its arguments.

#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace mpr {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Speed of light used by default. The round numbers quoted for the
/// reference hardware (75 m, 500 ns, 37.5 m) assume 3e8 m/s.
inline constexpr double kSpeedOfLight = 3.0e8;
inline constexpr double kSpeedOfLightExact = 299792458.0;

/// Raised when a frequency plan cannot resolve distance (equal carriers,
/// non-positive hop, fewer than two carriers).
class DegeneratePlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Reduces any finite angle to [0, 2π).
double wrap(double radians);

/// A phase held in [0, 2π). Construction always wraps.
class WrappedPhase {
 public:
  constexpr WrappedPhase() = default;
  explicit WrappedPhase(double radians) : value_(wrap(radians)) {}

  [[nodiscard]] double value() const { return value_; }

  friend WrappedPhase operator+(WrappedPhase a, WrappedPhase b) {
    return WrappedPhase(a.value_ + b.value_);
  }
  friend WrappedPhase operator-(WrappedPhase a, WrappedPhase b) {
    return WrappedPhase(a.value_ - b.value_);
  }
  friend bool operator==(WrappedPhase, WrappedPhase) = default;

 private:
  double value_ = 0.0;
};

/// Carriers f_i = f_start + i * delta_f, i in [0, count).
class FrequencyPlan {
 public:
  FrequencyPlan(double f_start_hz, double delta_f_hz, std::size_t count);

  /// 2.403 GHz start, 2 MHz hop, 20 carriers (the commercial transceiver
  /// default configuration).
  static FrequencyPlan ism_profile();

  /// 2.40-2.48 GHz band at the given hop, inclusive of both band edges.
  static FrequencyPlan simulation_band(double delta_f_hz);

  [[nodiscard]] double f_start() const { return f_start_; }
  [[nodiscard]] double delta_f() const { return delta_f_; }
  [[nodiscard]] std::size_t count() const { return count_; }
  [[nodiscard]] double frequency(std::size_t i) const;
  [[nodiscard]] std::vector<double> frequencies() const;

  friend bool operator==(const FrequencyPlan&, const FrequencyPlan&) = default;

 private:
  double f_start_;
  double delta_f_;
  std::size_t count_;
};

/// Wrapped round-trip phase differences, one per carrier in plan order.
struct PhaseProfile {
  FrequencyPlan plan;
  std::vector<WrappedPhase> phases;

  PhaseProfile(FrequencyPlan p, std::vector<WrappedPhase> ph);
};

struct RangeEstimate {
  double slope = 0.0;         // rad / Hz
  double intercept = 0.0;     // rad, value of the fitted line at f = 0
  double distance = 0.0;      // m, folded into [0, d_max)
  double residual_rms = 0.0;  // rad
  double d_max = 0.0;         // m
};

/// wrap(4π d f / c): the phase lag accumulated over a round trip of d.
WrappedPhase wrapped_roundtrip_phase(double distance_m, double frequency_hz,
                                     double c = kSpeedOfLight);

/// Distance from two carriers, folded into [0, c / (2 (f2 - f1))).
double two_frequency_distance(WrappedPhase theta1, WrappedPhase theta2, double f1_hz,
                              double f2_hz, double c = kSpeedOfLight);

PhaseProfile synthesize_phase_profile(double distance_m, const FrequencyPlan& plan,
                                      double c = kSpeedOfLight);

/// Unwraps a profile by taking every adjacent increment as the smallest
/// non-negative angle congruent to the raw difference.
std::vector<double> straighten(const PhaseProfile& profile);

/// Ordinary least-squares line through (f_i, straightened_i).
RangeEstimate fit_slope(std::span<const double> straightened, const FrequencyPlan& plan,
                        double c = kSpeedOfLight);

/// straighten followed by fit_slope.
RangeEstimate estimate_range(const PhaseProfile& profile, double c = kSpeedOfLight);

double max_unambiguous_distance(double delta_f_hz, double c = kSpeedOfLight);

/// d mod d_max in [0, d_max); negative inputs fold upward.
double fold_distance(double distance_m, double d_max_m);

}  // namespace mpr
