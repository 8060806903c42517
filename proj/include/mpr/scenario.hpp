#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "mpr/attacks.hpp"
#include "mpr/countermeasures.hpp"
#include "mpr/ranging.hpp"
#include "mpr/signal.hpp"

namespace mpr {

inline constexpr int kConfigSchemaVersion = 1;

/// Invalid scenario description. field() is a dotted path into the config,
/// e.g. "attacker.target_m".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct SecretOffsetConfig {
  std::uint64_t seed = 1;
  /// The attacker has learned the offsets (e.g. by watching earlier responses).
  bool revealed_to_attacker = false;
};

struct Countermeasures {
  std::uint64_t hop_seed = 0;  // 0: carriers visited in plan order
  std::optional<SecretOffsetConfig> secret_offsets;
  std::optional<double> tof_data_rate_bps;
  double detector_threshold_rad = kDefaultDetectorThreshold;
};

/// The attacker is idle for the first attack_start exchanges and active afterwards.
struct Timeline {
  std::size_t steps = 1;
  std::size_t attack_start = 0;
};

struct Scenario {
  std::string id = "scenario";
  FrequencyPlan plan = FrequencyPlan::ism_profile();
  double c = kSpeedOfLight;
  Geometry geometry;
  std::optional<double> snr_db;  // none: noiseless
  std::size_t samples = kDefaultSamples;
  AttackerConfig attacker;
  Countermeasures countermeasures;
  bool prover_in_range = false;
  bool path_loss = false;
  double lock_error_std_rad = 0.0;
  std::size_t window_len = 8;
  Timeline timeline;
  std::uint64_t seed = 1;
  std::size_t iterations = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace mpr
