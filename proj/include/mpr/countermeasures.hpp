#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpr/ranging.hpp"

namespace mpr {

/// Residual threshold for the anomaly detector: 99th percentile of benign
/// fit residuals at 20 dB SNR, 64 samples per tone, ISM profile. Reproduce
/// with `mpr calibrate-detector --trials 5000 --seed 1`.
inline constexpr double kDefaultDetectorThreshold = 0.01639;

/// Coarse challenge-response timing check.
///
/// The timing precision is one bit period. The distance granularity is
/// precision times distance_per_second; the default of c (not c/2) maps
/// 500 ns onto 150 m, matching the commonly quoted pairing for a 2 Mbps
/// link. Pass c/2 for a strictly round-trip conversion.
struct TofGate {
  double data_rate_bps = 2.0e6;
  double precision_s = 500e-9;
  double granularity_m = 150.0;
};

struct TofPrecision {
  double seconds;
  double meters;
};

TofPrecision tof_precision(double data_rate_bps, double c = kSpeedOfLight);
TofPrecision tof_precision(double data_rate_bps, double c, double distance_per_second);

TofGate make_tof_gate(double data_rate_bps, double c = kSpeedOfLight);

/// Accepts unless the distance implied by the true round-trip delay
/// exceeds the claimed distance by more than the gate granularity.
bool rough_tof_gate(double true_roundtrip_delay_s, double claimed_distance_m, const TofGate& gate,
                    double c = kSpeedOfLight);

/// Order in which carriers are visited. Seed 0 is the identity schedule.
std::vector<std::size_t> hop_schedule(std::uint64_t secret_seed, const FrequencyPlan& plan);

/// Per-carrier prover phase shifts derived from a shared secret.
std::vector<WrappedPhase> secret_offsets(std::uint64_t secret_seed, const FrequencyPlan& plan);

struct DetectorReport {
  double residual_rms = 0.0;
  bool flagged = false;
  double threshold = 0.0;
};

DetectorReport detect_anomaly(const PhaseProfile& profile, const RangeEstimate& estimate,
                              double threshold = kDefaultDetectorThreshold);

/// Linear-interpolated percentile (p in [0, 100]) of a sample.
double percentile(std::vector<double> values, double p);

}  // namespace mpr
