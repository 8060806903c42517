#pragma once

// Relay attacker models. Each variant is a pure planner that computes the
// manipulation from geometry and plan, plus a runtime transform applied to
// the tones the attacker relays to the verifier.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "mpr/random.hpp"
#include "mpr/ranging.hpp"
#include "mpr/signal.hpp"

namespace mpr {

/// Receive-to-transmit latency measured on an FPGA relay.
inline constexpr double kRelayHwDelayMean = 536.22e-9;
inline constexpr double kRelayHwDelayStd = 1.83e-9;

struct Geometry {
  double d_vp = 30.0;  // verifier - prover
  double d_va = 1.0;   // verifier - attacker
  double d_ap = 29.0;  // attacker - prover
};

struct NoAttack {};

struct AmplifyOnly {
  double gain = 1.0;
};

struct UniformDelay {
  /// Extra delay on top of the hardware delay. Planned from target_m when unset.
  std::optional<double> extra_delay_s;
  double target_m = 1.0;
  double hw_delay_mean_s = kRelayHwDelayMean;
  double hw_delay_std_s = kRelayHwDelayStd;
};

struct CycleSlip {
  double target_m = 1.0;
};

struct OtfMixer {
  double target_m = 1.0;
  /// Predict θ_ap from the verifier tone and d_ap. Otherwise the attacker
  /// measures the prover response directly and pays pll_delay_s.
  bool knows_d_ap = true;
  double pll_delay_s = 0.0;
  double mixer_gain = 2.0;
};

struct RandomPhase {
  std::uint64_t seed = 0;
};

using AttackVariant =
    std::variant<NoAttack, AmplifyOnly, UniformDelay, CycleSlip, OtfMixer, RandomPhase>;

struct AttackerConfig {
  AttackVariant variant = NoAttack{};
  /// Delay of the transparent verifier -> prover forward relay.
  double forward_delay_s = 0.0;
  /// When set, relayed tones leave the attacker at this amplitude (AGC).
  std::optional<double> output_amplitude;
  /// SNR at the attacker's own receiver; defaults to the link SNR.
  std::optional<double> snr_db;
};

std::string_view variant_name(const AttackVariant& v);
bool is_attack(const AttackVariant& v);
/// Distance the attacker tries to make the verifier report, if any.
std::optional<double> attack_target(const AttackVariant& v);

/// Per-carrier delays, seconds.
struct DelayPlan {
  std::vector<double> delays_s;
};

/// Distance the verifier would report if the relay only forwarded:
/// half the total relayed path plus half the distance light covers during
/// the relay's own delays.
double relay_apparent_distance(const Geometry& g, bool prover_in_range, double forward_delay_s,
                               double return_delay_s, double c = kSpeedOfLight);

/// Smallest extra delay >= 0 that folds d_true + c (hw + extra) / 2 onto d_target.
double plan_uniform_delay(double d_true, double d_target, double d_max, double c = kSpeedOfLight,
                          double hw_delay_s = 0.0);

/// One relay delay for an exchange: planned total plus Gaussian jitter,
/// shared by every carrier of that exchange.
double draw_relay_delay(double planned_total_s, double jitter_std_s, Rng& rng);

std::vector<Tone> run_uniform_delay(std::span<const Tone> tones, double delay_total_s);

/// Sub-period delays turning profile_true into synthesize(d_target).
/// Each delay lies in [0, 1/f_i).
DelayPlan plan_cycle_slip(const PhaseProfile& profile_true, double d_target,
                          double c = kSpeedOfLight);

std::vector<Tone> run_cycle_slip(std::span<const Tone> tones, const DelayPlan& plan);

/// Prover response phase expected at the attacker, predicted from the
/// verifier tone seen by the attacker and the attacker-prover distance.
WrappedPhase estimate_theta_ap(const ToneObservation& verifier_tone_obs, double d_ap,
                               double c = kSpeedOfLight, double forward_delay_s = 0.0);

/// Mixer phases θ_A such that θ_A - θ_ap leaves the attacker carrying the
/// phase that, after the final d_va hop, the verifier reads as d_target.
/// verifier_phase_at_attacker is the attacker's estimate of the verifier
/// tone; known_offsets are prover secret offsets the attacker has learned.
std::vector<WrappedPhase> plan_otf_offsets(std::span<const WrappedPhase> theta_ap,
                                           std::span<const WrappedPhase> verifier_phase_at_attacker,
                                           double d_target, double d_va, const FrequencyPlan& plan,
                                           double c = kSpeedOfLight,
                                           std::span<const WrappedPhase> known_offsets = {});

std::vector<Tone> run_otf(std::span<const Tone> tones, std::span<const WrappedPhase> mixer_phases,
                          double mixer_gain = 2.0);

/// Replaces every carrier phase with an independent uniform draw.
std::vector<Tone> run_random_phase(std::span<const Tone> tones, Rng& rng);

std::vector<Tone> run_amplify_only(std::span<const Tone> tones, double gain);

}  // namespace mpr
