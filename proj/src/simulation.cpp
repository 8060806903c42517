#include "mpr/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <thread>

namespace mpr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

WrappedPhase hop_lag(double f, double seconds) {
  const double cycles = f * seconds;
  return WrappedPhase(kTwoPi * (cycles - std::floor(cycles)));
}

struct AttackOutput {
  std::vector<Tone> tones;
  double relay_delay_s = 0.0;
};

// Applies the configured attacker to the prover responses as they reach
// the attacker's antenna.
class AttackStage {
 public:
  AttackStage(const Scenario& s, const Rng& stream, std::span<const Tone> verifier_at_attacker,
              double forward_delay_s)
      : s_(s), stream_(stream), verifier_at_attacker_(verifier_at_attacker),
        forward_delay_s_(forward_delay_s) {}

  AttackOutput operator()(std::span<const Tone> at_attacker) const {
    return std::visit([&](const auto& cfg) { return run(cfg, at_attacker); }, s_.attacker.variant);
  }

 private:
  AttackOutput run(const NoAttack&, std::span<const Tone> in) const {
    return {{in.begin(), in.end()}, 0.0};
  }

  AttackOutput run(const AmplifyOnly& a, std::span<const Tone> in) const {
    return {run_amplify_only(in, a.gain), 0.0};
  }

  AttackOutput run(const UniformDelay& a, std::span<const Tone> in) const {
    double planned = a.hw_delay_mean_s;
    if (a.extra_delay_s) {
      planned += *a.extra_delay_s;
    } else {
      const double d_seen = relay_apparent_distance(s_.geometry, s_.prover_in_range,
                                                    forward_delay_s_, 0.0, s_.c);
      const double d_max = max_unambiguous_distance(s_.plan.delta_f(), s_.c);
      planned += plan_uniform_delay(d_seen, a.target_m, d_max, s_.c, a.hw_delay_mean_s);
    }
    Rng jitter = stream_.split({tag(StreamTag::kAttackerJitter)});
    const double delay = draw_relay_delay(planned, a.hw_delay_std_s, jitter);
    return {run_uniform_delay(in, delay), delay};
  }

  AttackOutput run(const CycleSlip& a, std::span<const Tone> in) const {
    const double d_seen =
        relay_apparent_distance(s_.geometry, s_.prover_in_range, forward_delay_s_, 0.0, s_.c);
    const auto plan = plan_cycle_slip(synthesize_phase_profile(d_seen, s_.plan, s_.c), a.target_m, s_.c);
    double mean = 0.0;
    for (double d : plan.delays_s) mean += d;
    mean /= static_cast<double>(plan.delays_s.size());
    return {run_cycle_slip(in, plan), mean};
  }

  AttackOutput run(const OtfMixer& a, std::span<const Tone> in) const {
    const std::size_t n = s_.plan.count();
    const auto snr = s_.attacker.snr_db ? s_.attacker.snr_db : s_.snr_db;
    std::vector<WrappedPhase> verifier_phase(n);
    std::vector<WrappedPhase> theta_ap(n);
    std::vector<WrappedPhase> known;
    if (s_.countermeasures.secret_offsets && s_.countermeasures.secret_offsets->revealed_to_attacker) {
      known = secret_offsets(s_.countermeasures.secret_offsets->seed, s_.plan);
    }
    for (std::size_t i = 0; i < n; ++i) {
      Rng noise = stream_.split({tag(StreamTag::kAttackerNoise), i, 0});
      const auto v_obs = observe(verifier_at_attacker_[i], snr, s_.samples, noise);
      verifier_phase[i] = estimate_phase(v_obs);
      if (a.knows_d_ap) {
        theta_ap[i] = estimate_theta_ap(v_obs, s_.geometry.d_ap, s_.c, forward_delay_s_);
        if (!known.empty()) theta_ap[i] = theta_ap[i] + known[i];
      } else {
        Rng resp_noise = stream_.split({tag(StreamTag::kAttackerNoise), i, 1});
        theta_ap[i] = estimate_phase(observe(in[i], snr, s_.samples, resp_noise));
      }
    }
    auto mixer = plan_otf_offsets(theta_ap, verifier_phase, a.target_m, s_.geometry.d_va, s_.plan,
                                  s_.c, known);
    double delay = 0.0;
    if (!a.knows_d_ap && a.pll_delay_s > 0.0) {
      // The detection latency is known to the attacker and pre-compensated.
      delay = a.pll_delay_s;
      for (std::size_t i = 0; i < n; ++i) mixer[i] = mixer[i] + hop_lag(s_.plan.frequency(i), delay);
    }
    auto out = run_otf(in, mixer, a.mixer_gain);
    if (delay > 0.0) out = run_uniform_delay(out, delay);
    return {std::move(out), delay};
  }

  AttackOutput run(const RandomPhase& a, std::span<const Tone> in) const {
    Rng rng = stream_.split({tag(StreamTag::kRandomPhase), a.seed});
    return {run_random_phase(in, rng), 0.0};
  }

  const Scenario& s_;
  const Rng& stream_;
  std::span<const Tone> verifier_at_attacker_;
  double forward_delay_s_;
};

}  // namespace

ExchangeResult simulate_exchange(const Scenario& s, VerifierState& verifier, bool attack_active,
                                 const Rng& stream) {
  const std::size_t n = s.plan.count();
  const auto& g = s.geometry;
  const double c = s.c;
  const bool pl = s.path_loss;
  const bool relay = attack_active && is_attack(s.attacker.variant);
  const bool forward_relayed = relay && !s.prover_in_range;
  const double forward_delay = forward_relayed ? s.attacker.forward_delay_s : 0.0;

  Rng ref_rng = stream.split({tag(StreamTag::kReference)});
  verifier.begin_exchange(ref_rng);

  ProverState prover;
  prover.lock_error_std = s.lock_error_std_rad;
  if (s.countermeasures.secret_offsets) {
    prover.secret_offsets = secret_offsets(s.countermeasures.secret_offsets->seed, s.plan);
  }

  auto leave_attacker = [&](Tone t) {
    if (s.attacker.output_amplitude) t.amplitude = *s.attacker.output_amplitude;
    return t;
  };

  // Carriers are visited in hop order; every random draw is keyed by carrier
  // so the order itself never changes a result.
  const auto order = hop_schedule(s.countermeasures.hop_seed, s.plan);
  std::vector<Tone> responses(n);
  std::vector<Tone> verifier_at_attacker(n);
  for (std::size_t i : order) {
    const Tone tx = interrogate(verifier, i);
    Tone at_prover;
    if (forward_relayed) {
      Tone relayed = apply_delay(propagate(tx, g.d_va, c, pl), forward_delay);
      if (const auto* amp = std::get_if<AmplifyOnly>(&s.attacker.variant)) relayed.amplitude *= amp->gain;
      at_prover = propagate(leave_attacker(relayed), g.d_ap, c, pl);
    } else {
      at_prover = propagate(tx, g.d_vp, c, pl);
    }
    if (relay) verifier_at_attacker[i] = propagate(tx, g.d_va, c, pl);

    Rng noise = stream.split({tag(StreamTag::kProverNoise), i});
    const auto obs = observe(at_prover, s.snr_db, s.samples, noise);
    Rng lock = stream.split({tag(StreamTag::kProverLock), i});
    responses[i] = respond(prover, obs, i, lock);
  }

  std::vector<Tone> received(n);
  double relay_delay = 0.0;
  if (!relay) {
    for (std::size_t i = 0; i < n; ++i) received[i] = propagate(responses[i], g.d_vp, c, pl);
  } else {
    std::vector<Tone> at_attacker(n);
    for (std::size_t i = 0; i < n; ++i) at_attacker[i] = propagate(responses[i], g.d_ap, c, pl);
    const AttackStage stage(s, stream, verifier_at_attacker, forward_delay);
    auto out = stage(at_attacker);
    relay_delay = out.relay_delay_s;
    for (std::size_t i = 0; i < n; ++i) {
      const Tone relayed = propagate(leave_attacker(out.tones[i]), g.d_va, c, pl);
      if (s.prover_in_range) {
        const std::array<Tone, 2> both{relayed, propagate(responses[i], g.d_vp, c, pl)};
        received[i] = superpose(both).tone;
      } else {
        received[i] = relayed;
      }
    }
  }

  std::vector<ToneObservation> observed(n);
  for (std::size_t i : order) {
    Rng noise = stream.split({tag(StreamTag::kVerifierNoise), i});
    observed[i] = observe(received[i], s.snr_db, s.samples, noise);
  }
  auto profile = measure_profile(verifier, observed);
  auto estimate = estimate_range(profile, c);

  double roundtrip = 2.0 * g.d_vp / c;
  if (relay) {
    const double forward_path = forward_relayed ? g.d_va + g.d_ap : g.d_vp;
    roundtrip = (forward_path + g.d_ap + g.d_va) / c + forward_delay + relay_delay;
  }
  return {std::move(profile), estimate, relay, relay_delay, roundtrip};
}

Rng iteration_stream(std::uint64_t seed, std::size_t point_index, std::size_t iteration) {
  return Rng(derive_seed(seed, {point_index, iteration}));
}

std::vector<RunRecord> run_iteration(const Scenario& s, std::size_t point_index,
                                     std::size_t iteration) {
  const Rng it = iteration_stream(s.seed, point_index, iteration);
  VerifierState verifier(s.plan, s.window_len);
  if (s.countermeasures.secret_offsets) {
    verifier.set_secret_offsets(secret_offsets(s.countermeasures.secret_offsets->seed, s.plan));
  }
  std::optional<TofGate> gate;
  if (s.countermeasures.tof_data_rate_bps) gate = make_tof_gate(*s.countermeasures.tof_data_rate_bps, s.c);

  std::vector<RunRecord> out;
  out.reserve(s.timeline.steps);
  for (std::size_t step = 0; step < s.timeline.steps; ++step) {
    const bool active = step >= s.timeline.attack_start;
    const auto ex = simulate_exchange(s, verifier, active, it.split({step}));
    RunRecord r;
    r.scenario_id = s.id;
    r.iteration = iteration;
    r.step = step;
    r.snr_db = s.snr_db;
    r.true_distance_m = s.geometry.d_vp;
    const auto target = attack_target(s.attacker.variant);
    r.target_distance_m = ex.attacked && target ? *target : s.geometry.d_vp;
    r.fitted_distance_m = ex.estimate.distance;
    r.smoothed_distance_m = smoothed_distance(verifier, ex.estimate);
    const auto report = detect_anomaly(ex.profile, ex.estimate, s.countermeasures.detector_threshold_rad);
    r.residual_rms_rad = report.residual_rms;
    r.detector_flag = report.flagged;
    r.attack_variant = ex.attacked ? std::string(variant_name(s.attacker.variant)) : "none";
    r.delay_ns = ex.relay_delay_s * 1e9;
    r.tof_accepted = !gate || rough_tof_gate(ex.roundtrip_delay_s, ex.estimate.distance, *gate, s.c);
    out.push_back(std::move(r));
  }
  return out;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            fn(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

namespace {

std::vector<RunRecord> run_points(std::span<const Scenario> points, std::size_t iterations) {
  std::vector<std::vector<RunRecord>> slots(points.size() * iterations);
  parallel_for(slots.size(), [&](std::size_t k) {
    const std::size_t p = k / iterations;
    slots[k] = run_iteration(points[p], p, k % iterations);
  });
  std::vector<RunRecord> out;
  for (auto& slot : slots) {
    std::move(slot.begin(), slot.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace

std::vector<RunRecord> run_scenario(const Scenario& s) {
  s.validate();
  const std::array<Scenario, 1> one{s};
  return run_points(one, s.iterations);
}

std::vector<RunRecord> sweep_snr(const Scenario& s, std::span<const double> snrs,
                                 std::size_t iterations) {
  if (iterations == 0) throw std::invalid_argument("iterations must be positive");
  std::vector<Scenario> points;
  for (double snr : snrs) {
    Scenario p = s;
    p.snr_db = snr;
    p.validate();
    points.push_back(std::move(p));
  }
  return run_points(points, iterations);
}

std::vector<RunRecord> sweep_delay(const Scenario& s, std::span<const double> delays_ns) {
  std::vector<Scenario> points;
  for (double d : delays_ns) {
    if (!(d >= 0.0)) throw std::invalid_argument("delays must be non-negative");
    Scenario p = s;
    UniformDelay u{.extra_delay_s = {}, .target_m = 0.0, .hw_delay_mean_s = 0.0, .hw_delay_std_s = 0.0};
    if (const auto* existing = std::get_if<UniformDelay>(&s.attacker.variant)) u = *existing;
    u.extra_delay_s = d * 1e-9;
    p.attacker.variant = u;
    p.validate();
    points.push_back(std::move(p));
  }
  return run_points(points, s.iterations);
}

std::vector<RunRecord> sweep_prover_distance(const Scenario& s, std::span<const double> d_vp_m) {
  std::vector<Scenario> points;
  for (double d : d_vp_m) {
    if (d < s.geometry.d_va) throw std::invalid_argument("prover must lie beyond the attacker");
    Scenario p = s;
    p.geometry.d_vp = d;
    p.geometry.d_ap = d - s.geometry.d_va;
    p.validate();
    points.push_back(std::move(p));
  }
  return run_points(points, s.iterations);
}

std::vector<ErrorPoint> error_by_snr(std::span<const RunRecord> records) {
  std::vector<ErrorPoint> out;
  std::map<double, std::size_t> index;
  for (const auto& r : records) {
    if (!r.snr_db) throw std::invalid_argument("error_by_snr needs records with an SNR");
    auto [it, inserted] = index.try_emplace(*r.snr_db, out.size());
    if (inserted) out.push_back({*r.snr_db, 0.0, 0});
    auto& p = out[it->second];
    p.mean_abs_error_m += std::abs(r.fitted_distance_m - r.target_distance_m);
    ++p.trials;
  }
  for (auto& p : out) p.mean_abs_error_m /= static_cast<double>(p.trials);
  return out;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const std::string& run_record_header() {
  static const std::string header =
      "scenario_id,iteration,step,snr_db,true_distance_m,target_distance_m,fitted_distance_m,"
      "smoothed_distance_m,residual_rms_rad,detector_flag,attack_variant,delay_ns,tof_accepted";
  return header;
}

void write_records_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << run_record_header() << '\n';
  for (const auto& r : records) {
    out << r.scenario_id << ',' << r.iteration << ',' << r.step << ','
        << (r.snr_db ? format_number(*r.snr_db) : std::string("none")) << ','
        << format_number(r.true_distance_m) << ',' << format_number(r.target_distance_m) << ','
        << format_number(r.fitted_distance_m) << ',' << format_number(r.smoothed_distance_m) << ','
        << format_number(r.residual_rms_rad) << ',' << (r.detector_flag ? 1 : 0) << ','
        << r.attack_variant << ',' << format_number(r.delay_ns) << ',' << (r.tof_accepted ? 1 : 0)
        << '\n';
  }
}

}  // namespace mpr
