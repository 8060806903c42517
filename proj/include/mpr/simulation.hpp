#pragma once

// Scenario execution: one ranging exchange per timeline step, seeded
// Monte Carlo iterations, and the sweeps behind the reproduced figures.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpr/actors.hpp"
#include "mpr/scenario.hpp"

namespace mpr {

struct ExchangeResult {
  PhaseProfile profile;
  RangeEstimate estimate;
  bool attacked = false;
  double relay_delay_s = 0.0;      // added on the attacker's return path
  double roundtrip_delay_s = 0.0;  // verifier transmit to verifier receive
};

/// One full exchange: interrogation, forward path, prover response, return
/// path with any attacker transform, measurement and fit. The verifier's
/// reference phases are redrawn from `stream`.
ExchangeResult simulate_exchange(const Scenario& s, VerifierState& verifier, bool attack_active,
                                 const Rng& stream);

struct RunRecord {
  std::string scenario_id;
  std::size_t iteration = 0;
  std::size_t step = 0;
  std::optional<double> snr_db;
  double true_distance_m = 0.0;
  double target_distance_m = 0.0;  // attack target, or the true distance when benign
  double fitted_distance_m = 0.0;
  double smoothed_distance_m = 0.0;
  double residual_rms_rad = 0.0;
  bool detector_flag = false;
  std::string attack_variant;
  double delay_ns = 0.0;
  bool tof_accepted = true;
};

/// Stream for one (snr point, iteration) pair.
Rng iteration_stream(std::uint64_t seed, std::size_t point_index, std::size_t iteration);

/// Every timeline step of one iteration.
std::vector<RunRecord> run_iteration(const Scenario& s, std::size_t point_index,
                                     std::size_t iteration);

/// All iterations of a scenario, ordered by (iteration, step).
std::vector<RunRecord> run_scenario(const Scenario& s);

/// Runs iterations for each SNR in `snrs`; records ordered by (snr, iteration).
std::vector<RunRecord> sweep_snr(const Scenario& s, std::span<const double> snrs,
                                 std::size_t iterations);

/// Uniform-delay sweep: one exchange per delay value (ns) with no extra
/// hardware delay unless the scenario's uniform-delay attacker sets one.
std::vector<RunRecord> sweep_delay(const Scenario& s, std::span<const double> delays_ns);

/// Moves the prover along the verifier-attacker line (d_ap = d_vp - d_va).
std::vector<RunRecord> sweep_prover_distance(const Scenario& s, std::span<const double> d_vp_m);

struct ErrorPoint {
  double x = 0.0;
  double mean_abs_error_m = 0.0;
  std::size_t trials = 0;
};

/// Mean |fitted - target| grouped by SNR (records must carry an SNR).
std::vector<ErrorPoint> error_by_snr(std::span<const RunRecord> records);

/// Deterministic parallel loop over [0, n); fn must be safe to call concurrently.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// CSV header for RunRecord rows.
const std::string& run_record_header();
void write_records_csv(std::ostream& out, std::span<const RunRecord> records);

/// %.10g formatting shared by every CSV writer.
std::string format_number(double v);

}  // namespace mpr
