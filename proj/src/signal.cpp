#include "mpr/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mpr {

namespace {

// Phase lag of a delay expressed in cycles; keeps precision for GHz tones.
WrappedPhase delay_lag(double frequency_hz, double delta_t_s) {
  const double cycles = frequency_hz * delta_t_s;
  return WrappedPhase(kTwoPi * (cycles - std::floor(cycles)));
}

}  // namespace

Tone::Tone(double frequency_hz, double amp, WrappedPhase ph)
    : frequency(frequency_hz), amplitude(amp), phase(ph) {
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
    throw std::invalid_argument("tone frequency must be positive");
  }
  if (!(amp >= 0.0) || !std::isfinite(amp)) {
    throw std::invalid_argument("tone amplitude must be non-negative");
  }
}

Tone propagate(const Tone& t, double distance_m, double c, bool path_loss) {
  if (!(distance_m >= 0.0)) throw std::invalid_argument("distance must be non-negative");
  Tone out = apply_delay(t, distance_m / c);
  if (path_loss && distance_m > 1.0) out.amplitude *= 1.0 / distance_m;
  return out;
}

Tone apply_delay(const Tone& t, double delta_t_s) {
  if (!(delta_t_s >= 0.0)) throw std::invalid_argument("delay must be non-negative");
  Tone out = t;
  out.phase = t.phase - delay_lag(t.frequency, delta_t_s);
  return out;
}

Tone mix_and_filter(const Tone& t, WrappedPhase mixer_phase, double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("mixer gain must be positive");
  return {t.frequency, 0.5 * t.amplitude * gain, mixer_phase - t.phase};
}

Superposition superpose(std::span<const Tone> tones) {
  if (tones.empty()) throw std::invalid_argument("nothing to superpose");
  const double f = tones.front().frequency;
  cplx sum{0.0, 0.0};
  for (const auto& t : tones) {
    if (t.frequency != f) throw std::invalid_argument("superposed tones must share a frequency");
    sum += t.phasor();
  }
  const double amp = std::abs(sum);
  // Relative to the largest contributor, anything below rounding is a null.
  double scale = 0.0;
  for (const auto& t : tones) scale = std::max(scale, t.amplitude);
  if (amp <= 1e-12 * scale || amp == 0.0) {
    return {Tone{f, 0.0, WrappedPhase{}}, true};
  }
  return {Tone{f, amp, WrappedPhase(std::arg(sum))}, false};
}

ToneObservation observe(const Tone& t, std::optional<double> snr_db, std::size_t samples,
                        Rng& rng) {
  if (samples == 0) throw std::invalid_argument("an observation needs at least one sample");
  ToneObservation obs;
  obs.tone = t;
  const cplx clean = t.phasor();
  obs.samples.assign(samples, clean);
  if (!snr_db || std::isinf(*snr_db)) return obs;

  const double power = t.amplitude * t.amplitude;
  obs.noise_variance = power / std::pow(10.0, *snr_db / 10.0);
  const double per_axis = std::sqrt(obs.noise_variance / 2.0);
  // Circular noise is rotation invariant, so drawing it in the tone's own
  // frame leaves its law unchanged while letting two runs on one stream
  // share phase errors whatever their carrier phases.
  const cplx frame = std::polar(1.0, t.phase.value());
  for (auto& s : obs.samples) {
    const double re = rng.normal(per_axis);
    const double im = rng.normal(per_axis);
    s += cplx{re, im} * frame;
  }
  return obs;
}

WrappedPhase estimate_phase(const ToneObservation& obs) {
  if (obs.samples.empty()) throw EstimationError("observation has no samples");
  const cplx mean = std::accumulate(obs.samples.begin(), obs.samples.end(), cplx{0.0, 0.0}) /
                    static_cast<double>(obs.samples.size());
  if (std::abs(mean) <= std::numeric_limits<double>::min()) {
    throw EstimationError("mean phasor vanished; phase is undefined");
  }
  return WrappedPhase(std::arg(mean));
}

}  // namespace mpr
