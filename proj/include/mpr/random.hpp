#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mpr {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hashes a base seed together with a path of keys. Used to give every
/// (snr point, iteration, step, purpose, carrier) its own stream so results
/// do not depend on evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(base);
  for (auto k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

/// Stream tags for derive_seed.
enum class StreamTag : std::uint64_t {
  kReference = 1,
  kProverNoise,
  kProverLock,
  kVerifierNoise,
  kAttackerNoise,
  kAttackerJitter,
  kRandomPhase,
  kSecretOffsets,
  kHopSchedule,
};

constexpr std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

/// Seedable random stream. Copying duplicates the stream state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  /// Independent child stream; does not advance this stream.
  [[nodiscard]] Rng split(std::initializer_list<std::uint64_t> keys) const {
    return Rng(derive_seed(seed_, keys));
  }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal(double stddev = 1.0) {
    return stddev == 0.0 ? 0.0 : std::normal_distribution<double>(0.0, stddev)(engine_);
  }
  /// Uniform on [0, 2π).
  double phase() { return std::uniform_real_distribution<double>(0.0, kTau)(engine_); }

  static constexpr double kTau = 6.283185307179586476925286766559;

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mpr
