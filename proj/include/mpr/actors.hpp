#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "mpr/random.hpp"
#include "mpr/ranging.hpp"
#include "mpr/signal.hpp"

namespace mpr {

inline constexpr std::size_t kDefaultWindow = 8;

/// The ranging initiator. Holds one random reference phase per carrier for
/// the exchange in progress and a sliding window of past distances.
class VerifierState {
 public:
  explicit VerifierState(FrequencyPlan plan, std::size_t window_len = kDefaultWindow);

  /// Draws fresh reference phases for a new exchange, one per carrier.
  void begin_exchange(Rng& rng);
  void set_reference_phases(std::vector<WrappedPhase> phases);

  /// Offsets the prover adds to its responses, shared in advance.
  void set_secret_offsets(std::vector<WrappedPhase> offsets);

  [[nodiscard]] const FrequencyPlan& plan() const { return plan_; }
  [[nodiscard]] std::span<const WrappedPhase> reference_phases() const { return reference_; }
  [[nodiscard]] const std::optional<std::vector<WrappedPhase>>& secret_offsets() const {
    return offsets_;
  }
  [[nodiscard]] std::size_t window_len() const { return window_len_; }
  [[nodiscard]] const std::deque<double>& history() const { return history_; }

  /// Pushes a distance into the window and returns the window mean.
  double push_distance(double distance_m);

 private:
  FrequencyPlan plan_;
  std::vector<WrappedPhase> reference_;
  std::optional<std::vector<WrappedPhase>> offsets_;
  std::deque<double> history_;
  std::size_t window_len_;
};

struct ProverState {
  std::optional<std::vector<WrappedPhase>> secret_offsets;
  double lock_error_std = 0.0;  // rad
};

/// Tone the verifier emits on carrier i.
Tone interrogate(const VerifierState& v, std::size_t carrier);

/// The prover locks to the incoming tone and echoes its phase, plus its
/// secret offset for the carrier and any lock error.
Tone respond(const ProverState& p, const ToneObservation& incoming, std::size_t carrier,
             Rng& rng);

/// θ_i = wrap(reference_i + offset_i - received_i): the phase lag of each
/// response, which equals wrap(4π f_i d / c) for a clean exchange at d.
PhaseProfile measure_profile(const VerifierState& v, std::span<const ToneObservation> responses);

/// Smoothing step of the verifier's reported range.
double smoothed_distance(VerifierState& v, const RangeEstimate& estimate);

}  // namespace mpr
