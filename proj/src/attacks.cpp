#include "mpr/attacks.hpp"

#include <cmath>
#include <stdexcept>

namespace mpr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Phase lag of a one-way hop.
WrappedPhase hop_lag(double f, double distance_m, double c) {
  const double cycles = f * distance_m / c;
  return WrappedPhase(kTwoPi * (cycles - std::floor(cycles)));
}

}  // namespace

std::string_view variant_name(const AttackVariant& v) {
  return std::visit(overloaded{
                        [](const NoAttack&) { return std::string_view{"none"}; },
                        [](const AmplifyOnly&) { return std::string_view{"amplify_only"}; },
                        [](const UniformDelay&) { return std::string_view{"uniform_delay"}; },
                        [](const CycleSlip&) { return std::string_view{"cycle_slip"}; },
                        [](const OtfMixer&) { return std::string_view{"otf_mixer"}; },
                        [](const RandomPhase&) { return std::string_view{"random_phase"}; },
                    },
                    v);
}

bool is_attack(const AttackVariant& v) { return !std::holds_alternative<NoAttack>(v); }

std::optional<double> attack_target(const AttackVariant& v) {
  return std::visit(overloaded{
                        [](const UniformDelay& a) -> std::optional<double> {
                          if (a.extra_delay_s) return std::nullopt;
                          return a.target_m;
                        },
                        [](const CycleSlip& a) -> std::optional<double> { return a.target_m; },
                        [](const OtfMixer& a) -> std::optional<double> { return a.target_m; },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    v);
}

double relay_apparent_distance(const Geometry& g, bool prover_in_range, double forward_delay_s,
                               double return_delay_s, double c) {
  const double forward_path = prover_in_range ? g.d_vp : g.d_va + g.d_ap;
  const double return_path = g.d_ap + g.d_va;
  return 0.5 * (forward_path + return_path) + 0.5 * c * (forward_delay_s + return_delay_s);
}

double plan_uniform_delay(double d_true, double d_target, double d_max, double c,
                          double hw_delay_s) {
  if (!(d_max > 0.0)) throw std::invalid_argument("d_max must be positive");
  if (d_target < 0.0 || d_target >= d_max) {
    throw std::invalid_argument("target distance must lie in [0, d_max)");
  }
  if (hw_delay_s < 0.0) throw std::invalid_argument("hardware delay must be non-negative");
  const double reported = d_true + 0.5 * c * hw_delay_s;
  const double shortfall = fold_distance(d_target - reported, d_max);
  return 2.0 * shortfall / c;
}

double draw_relay_delay(double planned_total_s, double jitter_std_s, Rng& rng) {
  const double d = planned_total_s + rng.normal(jitter_std_s);
  return d < 0.0 ? 0.0 : d;
}

std::vector<Tone> run_uniform_delay(std::span<const Tone> tones, double delay_total_s) {
  std::vector<Tone> out;
  out.reserve(tones.size());
  for (const auto& t : tones) out.push_back(apply_delay(t, delay_total_s));
  return out;
}

DelayPlan plan_cycle_slip(const PhaseProfile& profile_true, double d_target, double c) {
  if (d_target < 0.0) throw std::invalid_argument("target distance must be non-negative");
  const auto& plan = profile_true.plan;
  DelayPlan out;
  out.delays_s.resize(plan.count());
  for (std::size_t i = 0; i < plan.count(); ++i) {
    const double f = plan.frequency(i);
    // A delay adds lag, so the needed delay is the lag still missing.
    const WrappedPhase missing = wrapped_roundtrip_phase(d_target, f, c) - profile_true.phases[i];
    out.delays_s[i] = missing.value() / (kTwoPi * f);
  }
  return out;
}

std::vector<Tone> run_cycle_slip(std::span<const Tone> tones, const DelayPlan& plan) {
  if (tones.size() != plan.delays_s.size()) {
    throw std::invalid_argument("delay plan does not match the carrier count");
  }
  std::vector<Tone> out;
  out.reserve(tones.size());
  for (std::size_t i = 0; i < tones.size(); ++i) out.push_back(apply_delay(tones[i], plan.delays_s[i]));
  return out;
}

WrappedPhase estimate_theta_ap(const ToneObservation& verifier_tone_obs, double d_ap, double c,
                               double forward_delay_s) {
  if (d_ap < 0.0) throw std::invalid_argument("attacker-prover distance must be non-negative");
  const double f = verifier_tone_obs.tone.frequency;
  // Out to the prover and back: 2 d_ap of flight plus the forward relay delay.
  return estimate_phase(verifier_tone_obs) - hop_lag(f, 2.0 * d_ap + c * forward_delay_s, c);
}

std::vector<WrappedPhase> plan_otf_offsets(std::span<const WrappedPhase> theta_ap,
                                           std::span<const WrappedPhase> verifier_phase_at_attacker,
                                           double d_target, double d_va, const FrequencyPlan& plan,
                                           double c, std::span<const WrappedPhase> known_offsets) {
  const std::size_t n = plan.count();
  if (theta_ap.size() != n || verifier_phase_at_attacker.size() != n) {
    throw std::invalid_argument("one phase per carrier required");
  }
  if (!known_offsets.empty() && known_offsets.size() != n) {
    throw std::invalid_argument("one known offset per carrier required");
  }
  if (d_target < 0.0 || d_va < 0.0) throw std::invalid_argument("distances must be non-negative");
  std::vector<WrappedPhase> mixer(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = plan.frequency(i);
    // Verifier reference recovered by undoing the d_va hop.
    const WrappedPhase reference = verifier_phase_at_attacker[i] + hop_lag(f, d_va, c);
    // Phase to emit so that, after d_va, reference - received = roundtrip(d_target).
    WrappedPhase emit = reference - wrapped_roundtrip_phase(d_target, f, c) + hop_lag(f, d_va, c);
    if (!known_offsets.empty()) emit = emit + known_offsets[i];
    mixer[i] = theta_ap[i] + emit;
  }
  return mixer;
}

std::vector<Tone> run_otf(std::span<const Tone> tones, std::span<const WrappedPhase> mixer_phases,
                          double mixer_gain) {
  if (tones.size() != mixer_phases.size()) {
    throw std::invalid_argument("mixer phases do not match the carrier count");
  }
  std::vector<Tone> out;
  out.reserve(tones.size());
  for (std::size_t i = 0; i < tones.size(); ++i) {
    out.push_back(mix_and_filter(tones[i], mixer_phases[i], mixer_gain));
  }
  return out;
}

std::vector<Tone> run_random_phase(std::span<const Tone> tones, Rng& rng) {
  std::vector<Tone> out(tones.begin(), tones.end());
  for (auto& t : out) t.phase = WrappedPhase(rng.phase());
  return out;
}

std::vector<Tone> run_amplify_only(std::span<const Tone> tones, double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("gain must be positive");
  std::vector<Tone> out(tones.begin(), tones.end());
  for (auto& t : out) t.amplitude *= gain;
  return out;
}

}  // namespace mpr
