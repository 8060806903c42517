#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "mpr/scenario.hpp"

using namespace mpr;
using nlohmann::json;

namespace {

std::string field_of(const json& doc) {
  try {
    scenario_from_json(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

json minimal() { return json{{"version", 1}}; }

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("minimal document takes the defaults") {
  const auto s = scenario_from_json(minimal());
  CHECK(s.plan == FrequencyPlan::ism_profile());
  CHECK(s.c == 3e8);
  CHECK(s.geometry.d_vp == 30.0);
  CHECK_FALSE(s.snr_db.has_value());
  CHECK(s.samples == 64);
  CHECK(s.window_len == 8);
  CHECK(s.iterations == 1);
  CHECK(std::holds_alternative<NoAttack>(s.attacker.variant));
}

TEST_CASE("full document parses") {
  const auto doc = json::parse(R"({
    "version": 1, "id": "otf-revealed",
    "plan": {"preset": "simulation", "delta_f_hz": 1e6},
    "geometry": {"d_vp": 40, "d_va": 1, "d_ap": 39},
    "snr_db": 20, "samples": 32,
    "attacker": {"variant": "otf_mixer", "target_m": 2, "snr_db": 35},
    "countermeasures": {"hop_seed": 9, "secret_offsets": {"seed": 4, "revealed_to_attacker": true},
                        "tof_data_rate_bps": 2e6, "detector_threshold_rad": 0.02},
    "timeline": {"steps": 20, "attack_start": 5},
    "seed": 123, "iterations": 7, "window_len": 4
  })");
  const auto s = scenario_from_json(doc);
  CHECK(s.id == "otf-revealed");
  CHECK(s.plan.count() == 81);
  CHECK(s.geometry.d_ap == 39.0);
  CHECK(s.snr_db == 20.0);
  CHECK(s.samples == 32);
  const auto& otf = std::get<OtfMixer>(s.attacker.variant);
  CHECK(otf.target_m == 2.0);
  CHECK(s.attacker.snr_db == 35.0);
  CHECK(s.countermeasures.hop_seed == 9);
  CHECK(s.countermeasures.secret_offsets->revealed_to_attacker);
  CHECK(s.countermeasures.tof_data_rate_bps == 2e6);
  CHECK(s.timeline.attack_start == 5);
  CHECK(s.seed == 123);
}

TEST_CASE("json round trip preserves the scenario") {
  Scenario s;
  s.id = "rt";
  s.plan = FrequencyPlan(2.41e9, 4e6, 12);
  s.snr_db = 17.5;
  s.attacker.variant = UniformDelay{std::nullopt, 2.0, 5e-7, 1e-9};
  s.attacker.output_amplitude = 1.0;
  s.countermeasures.secret_offsets = SecretOffsetConfig{3, false};
  s.timeline = {12, 4};
  const auto back = scenario_from_json(scenario_to_json(s));
  CHECK(scenario_to_json(back) == scenario_to_json(s));
  CHECK(back.plan == s.plan);
  CHECK(std::get<UniformDelay>(back.attacker.variant).hw_delay_mean_s == 5e-7);
}

TEST_CASE("errors name the offending field") {
  CHECK(field_of(json::object()) == "version");
  CHECK(field_of({{"version", 2}}) == "version");
  auto doc = minimal();
  doc["bogus"] = 1;
  CHECK(field_of(doc) == "bogus");
  doc = minimal();
  doc["geometry"] = {{"d_vp", 1}, {"height", 2}};
  CHECK(field_of(doc) == "geometry.height");
  doc = minimal();
  doc["geometry"] = {{"d_vp", -1}};
  CHECK(field_of(doc) == "geometry.d_vp");
  doc = minimal();
  doc["attacker"] = {{"variant", "teleport"}};
  CHECK(field_of(doc) == "attacker.variant");
  doc = minimal();
  doc["attacker"] = {{"variant", "cycle_slip"}, {"gain", 2}};
  CHECK(field_of(doc) == "attacker.gain");
  doc = minimal();
  doc["attacker"] = {{"variant", "cycle_slip"}, {"target_m", "near"}};
  CHECK(field_of(doc) == "attacker.target_m");
  doc = minimal();
  doc["iterations"] = 0;
  CHECK(field_of(doc) == "iterations");
  doc = minimal();
  doc["snr_db"] = "loud";
  CHECK(field_of(doc) == "snr_db");
  doc = minimal();
  doc["plan"] = {{"delta_f_hz", 2e6}};
  CHECK(field_of(doc) == "plan");
  doc = minimal();
  doc["plan"] = {{"f_start_hz", 2.4e9}, {"delta_f_hz", 0}, {"count", 5}};
  CHECK(field_of(doc) == "plan");
  doc = minimal();
  doc["prover_in_range"] = true;
  CHECK(field_of(doc) == "path_loss");
  doc = minimal();
  doc["countermeasures"] = {{"secret_offsets", {{"seed", 1}, {"shared", true}}}};
  CHECK(field_of(doc) == "countermeasures.secret_offsets.shared");
  doc = minimal();
  doc["attacker"] = {{"variant", "uniform_delay"}, {"target_m", 80}};
  CHECK(field_of(doc) == "attacker.target_m");
  doc = minimal();
  doc["geometry"] = {{"d_vp", 30}, {"d_va", 1}, {"d_ap", 5}};
  doc["attacker"] = {{"variant", "cycle_slip"}};
  CHECK(field_of(doc) == "geometry");
  doc = minimal();
  doc["timeline"] = {{"steps", 3}, {"attack_start", 4}};
  CHECK(field_of(doc) == "timeline.attack_start");
}

TEST_CASE("snr none means noiseless") {
  auto doc = minimal();
  doc["snr_db"] = "none";
  CHECK_FALSE(scenario_from_json(doc).snr_db.has_value());
}

TEST_CASE("loading reports unreadable and malformed files") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
  const auto path = std::filesystem::temp_directory_path() / "mpr_malformed.json";
  {
    std::ofstream out(path);
    out << "{ \"version\": 1, ";
  }
  try {
    load_scenario(path);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "<file>");
  }
  std::filesystem::remove(path);
}

}  // TEST_SUITE
