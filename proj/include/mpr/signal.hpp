#pragma once

// Continuous-wave tones as complex phasors. For a CW carrier, propagation,
// delay, mixing and low-pass filtering are exact phase/amplitude transforms,
// so no sampled passband waveform is ever built.

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mpr/random.hpp"
#include "mpr/ranging.hpp"

namespace mpr {

using cplx = std::complex<double>;

/// Samples per tone observation when none is configured.
inline constexpr std::size_t kDefaultSamples = 64;

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tone {
  double frequency = 1.0;  // Hz
  double amplitude = 1.0;  // linear
  WrappedPhase phase;      // at the point of observation

  Tone() = default;
  Tone(double frequency_hz, double amp, WrappedPhase ph);

  [[nodiscard]] cplx phasor() const { return std::polar(amplitude, phase.value()); }
};

/// I/Q samples of one tone as seen by a receiver.
struct ToneObservation {
  Tone tone;
  std::vector<cplx> samples;
  double noise_variance = 0.0;  // per complex sample
};

/// Delays the tone by the flight time over distance_m. With path_loss the
/// amplitude falls as 1/d, normalized to unity at 1 m.
Tone propagate(const Tone& t, double distance_m, double c = kSpeedOfLight,
               bool path_loss = false);

/// Phase rotation equivalent to delaying a CW tone by delta_t.
Tone apply_delay(const Tone& t, double delta_t_s);

/// Mixes t (phase θ_ap) with a double-frequency tone of phase θ_A and
/// keeps the difference product: phase θ_A - θ_ap, amplitude halved and
/// then multiplied by gain.
Tone mix_and_filter(const Tone& t, WrappedPhase mixer_phase, double gain = 2.0);

struct Superposition {
  Tone tone;
  bool degenerate = false;  // resultant phasor vanished; phase set to 0
};

/// Complex sum of equal-frequency tones.
Superposition superpose(std::span<const Tone> tones);

/// Samples amplitude * e^{jθ} plus circular complex Gaussian noise whose
/// per-sample power is the tone power divided by 10^(snr_db/10). Draws are
/// expressed in the tone's phase frame. No SNR means a noiseless observation.
ToneObservation observe(const Tone& t, std::optional<double> snr_db, std::size_t samples,
                        Rng& rng);

/// arg(mean(samples)) in [0, 2π).
WrappedPhase estimate_phase(const ToneObservation& obs);

}  // namespace mpr
