#include "mpr/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace mpr {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Reads fields of one JSON object and rejects any key left unread.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return obj_.contains(key); }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::optional<double> number(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ConfigError(join(path_, key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(join(path_, key), "must be finite");
    return d;
  }

  std::optional<std::uint64_t> unsigned_int(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      throw ConfigError(join(path_, key), "expected a non-negative integer");
    }
    return v->get<std::uint64_t>();
  }

  std::optional<bool> boolean(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
    return v->get<bool>();
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = raw(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v->get<std::string>();
  }

  [[nodiscard]] std::string path(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) throw ConfigError(join(path_, key), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class T>
void assign(std::optional<T> v, T& dst) {
  if (v) dst = *v;
}

FrequencyPlan parse_plan(const json& j) {
  ObjectReader r(j, "plan");
  FrequencyPlan plan = FrequencyPlan::ism_profile();
  const auto preset = r.string("preset");
  const auto f_start = r.number("f_start_hz");
  const auto delta_f = r.number("delta_f_hz");
  const auto count = r.unsigned_int("count");
  r.finish();
  try {
    if (preset) {
      if (*preset == "ism") {
        if (f_start || delta_f || count) {
          throw ConfigError("plan.preset", "the ism preset takes no other plan fields");
        }
        return FrequencyPlan::ism_profile();
      }
      if (*preset == "simulation") {
        if (f_start || count) {
          throw ConfigError("plan.preset", "the simulation preset only takes delta_f_hz");
        }
        return FrequencyPlan::simulation_band(delta_f.value_or(2.0e6));
      }
      throw ConfigError("plan.preset", "unknown preset '" + *preset + "'");
    }
    if (!f_start || !delta_f || !count) {
      throw ConfigError("plan", "requires preset or all of f_start_hz, delta_f_hz, count");
    }
    plan = FrequencyPlan(*f_start, *delta_f, static_cast<std::size_t>(*count));
  } catch (const DegeneratePlanError& e) {
    throw ConfigError("plan", e.what());
  }
  return plan;
}

AttackerConfig parse_attacker(const json& j) {
  ObjectReader r(j, "attacker");
  AttackerConfig cfg;
  const auto variant = r.string("variant").value_or("none");
  assign(r.number("forward_delay_s"), cfg.forward_delay_s);
  if (auto a = r.number("output_amplitude")) cfg.output_amplitude = a;
  if (auto s = r.number("snr_db")) cfg.snr_db = s;

  if (variant == "none") {
    cfg.variant = NoAttack{};
  } else if (variant == "amplify_only") {
    AmplifyOnly a;
    assign(r.number("gain"), a.gain);
    cfg.variant = a;
  } else if (variant == "uniform_delay") {
    UniformDelay a;
    if (auto d = r.number("extra_delay_s")) a.extra_delay_s = d;
    assign(r.number("target_m"), a.target_m);
    assign(r.number("hw_delay_mean_s"), a.hw_delay_mean_s);
    assign(r.number("hw_delay_std_s"), a.hw_delay_std_s);
    cfg.variant = a;
  } else if (variant == "cycle_slip") {
    CycleSlip a;
    assign(r.number("target_m"), a.target_m);
    cfg.variant = a;
  } else if (variant == "otf_mixer") {
    OtfMixer a;
    assign(r.number("target_m"), a.target_m);
    assign(r.boolean("knows_d_ap"), a.knows_d_ap);
    assign(r.number("pll_delay_s"), a.pll_delay_s);
    assign(r.number("mixer_gain"), a.mixer_gain);
    cfg.variant = a;
  } else if (variant == "random_phase") {
    RandomPhase a;
    assign(r.unsigned_int("seed"), a.seed);
    cfg.variant = a;
  } else {
    throw ConfigError("attacker.variant", "unknown variant '" + variant + "'");
  }
  r.finish();
  return cfg;
}

Countermeasures parse_countermeasures(const json& j) {
  ObjectReader r(j, "countermeasures");
  Countermeasures cm;
  assign(r.unsigned_int("hop_seed"), cm.hop_seed);
  if (const json* so = r.raw("secret_offsets")) {
    ObjectReader o(*so, "countermeasures.secret_offsets");
    SecretOffsetConfig cfg;
    assign(o.unsigned_int("seed"), cfg.seed);
    assign(o.boolean("revealed_to_attacker"), cfg.revealed_to_attacker);
    o.finish();
    cm.secret_offsets = cfg;
  }
  if (auto rate = r.number("tof_data_rate_bps")) cm.tof_data_rate_bps = rate;
  assign(r.number("detector_threshold_rad"), cm.detector_threshold_rad);
  r.finish();
  return cm;
}

json attacker_to_json(const AttackerConfig& a) {
  json j;
  j["variant"] = std::string(variant_name(a.variant));
  if (const auto* v = std::get_if<AmplifyOnly>(&a.variant)) {
    j["gain"] = v->gain;
  } else if (const auto* v = std::get_if<UniformDelay>(&a.variant)) {
    if (v->extra_delay_s) j["extra_delay_s"] = *v->extra_delay_s;
    j["target_m"] = v->target_m;
    j["hw_delay_mean_s"] = v->hw_delay_mean_s;
    j["hw_delay_std_s"] = v->hw_delay_std_s;
  } else if (const auto* v = std::get_if<CycleSlip>(&a.variant)) {
    j["target_m"] = v->target_m;
  } else if (const auto* v = std::get_if<OtfMixer>(&a.variant)) {
    j["target_m"] = v->target_m;
    j["knows_d_ap"] = v->knows_d_ap;
    j["pll_delay_s"] = v->pll_delay_s;
    j["mixer_gain"] = v->mixer_gain;
  } else if (const auto* v = std::get_if<RandomPhase>(&a.variant)) {
    j["seed"] = v->seed;
  }
  j["forward_delay_s"] = a.forward_delay_s;
  if (a.output_amplitude) j["output_amplitude"] = *a.output_amplitude;
  if (a.snr_db) j["snr_db"] = *a.snr_db;
  return j;
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

}  // namespace

void Scenario::validate() const {
  require(!id.empty(), "id", "must not be empty");
  require(c > 0.0 && std::isfinite(c), "speed_of_light", "must be positive");
  require(geometry.d_vp >= 0.0, "geometry.d_vp", "must be non-negative");
  require(geometry.d_va >= 0.0, "geometry.d_va", "must be non-negative");
  require(geometry.d_ap >= 0.0, "geometry.d_ap", "must be non-negative");
  require(samples >= 1, "samples", "must be at least 1");
  require(window_len >= 1, "window_len", "must be at least 1");
  require(iterations >= 1, "iterations", "must be at least 1");
  require(timeline.steps >= 1, "timeline.steps", "must be at least 1");
  require(timeline.attack_start <= timeline.steps, "timeline.attack_start",
          "must not exceed timeline.steps");
  require(lock_error_std_rad >= 0.0, "lock_error_std_rad", "must be non-negative");
  require(!prover_in_range || path_loss, "path_loss", "must be enabled when prover_in_range is set");
  require(countermeasures.detector_threshold_rad >= 0.0, "countermeasures.detector_threshold_rad",
          "must be non-negative");
  if (countermeasures.tof_data_rate_bps) {
    require(*countermeasures.tof_data_rate_bps > 0.0, "countermeasures.tof_data_rate_bps",
            "must be positive");
  }
  require(attacker.forward_delay_s >= 0.0, "attacker.forward_delay_s", "must be non-negative");
  if (attacker.output_amplitude) {
    require(*attacker.output_amplitude > 0.0, "attacker.output_amplitude", "must be positive");
  }

  const double d_max = max_unambiguous_distance(plan.delta_f(), c);
  if (is_attack(attacker.variant)) {
    const auto& g = geometry;
    require(g.d_vp <= g.d_va + g.d_ap + 1e-9 && g.d_va <= g.d_vp + g.d_ap + 1e-9 &&
                g.d_ap <= g.d_vp + g.d_va + 1e-9,
            "geometry", "distances violate the triangle inequality");
  }
  if (const auto* a = std::get_if<AmplifyOnly>(&attacker.variant)) {
    require(a->gain > 0.0, "attacker.gain", "must be positive");
  } else if (const auto* a = std::get_if<UniformDelay>(&attacker.variant)) {
    require(a->hw_delay_mean_s >= 0.0, "attacker.hw_delay_mean_s", "must be non-negative");
    require(a->hw_delay_std_s >= 0.0, "attacker.hw_delay_std_s", "must be non-negative");
    if (a->extra_delay_s) {
      require(*a->extra_delay_s >= 0.0, "attacker.extra_delay_s", "must be non-negative");
    } else {
      require(a->target_m >= 0.0 && a->target_m < d_max, "attacker.target_m",
              "must lie in [0, d_max)");
    }
  } else if (const auto* a = std::get_if<CycleSlip>(&attacker.variant)) {
    require(a->target_m >= 0.0, "attacker.target_m", "must be non-negative");
  } else if (const auto* a = std::get_if<OtfMixer>(&attacker.variant)) {
    require(a->target_m >= 0.0, "attacker.target_m", "must be non-negative");
    require(a->pll_delay_s >= 0.0, "attacker.pll_delay_s", "must be non-negative");
    require(a->mixer_gain > 0.0, "attacker.mixer_gain", "must be positive");
  }
}

Scenario scenario_from_json(const json& doc) {
  ObjectReader r(doc, "");
  const auto version = r.unsigned_int("version");
  if (!version) throw ConfigError("version", "missing schema version");
  if (*version != kConfigSchemaVersion) {
    throw ConfigError("version", "unsupported schema version " + std::to_string(*version));
  }
  Scenario s;
  assign(r.string("id"), s.id);
  if (const json* p = r.raw("plan")) s.plan = parse_plan(*p);
  assign(r.number("speed_of_light"), s.c);
  if (const json* g = r.raw("geometry")) {
    ObjectReader gr(*g, "geometry");
    assign(gr.number("d_vp"), s.geometry.d_vp);
    assign(gr.number("d_va"), s.geometry.d_va);
    assign(gr.number("d_ap"), s.geometry.d_ap);
    gr.finish();
  }
  if (const json* snr = r.raw("snr_db")) {
    if (snr->is_string() && snr->get<std::string>() == "none") {
      s.snr_db.reset();
    } else if (snr->is_number()) {
      s.snr_db = snr->get<double>();
      if (!std::isfinite(*s.snr_db)) throw ConfigError("snr_db", "must be finite or \"none\"");
    } else {
      throw ConfigError("snr_db", "expected a number or \"none\"");
    }
  }
  if (auto m = r.unsigned_int("samples")) s.samples = static_cast<std::size_t>(*m);
  if (const json* a = r.raw("attacker")) s.attacker = parse_attacker(*a);
  if (const json* c = r.raw("countermeasures")) s.countermeasures = parse_countermeasures(*c);
  assign(r.boolean("prover_in_range"), s.prover_in_range);
  assign(r.boolean("path_loss"), s.path_loss);
  assign(r.number("lock_error_std_rad"), s.lock_error_std_rad);
  if (auto w = r.unsigned_int("window_len")) s.window_len = static_cast<std::size_t>(*w);
  if (const json* t = r.raw("timeline")) {
    ObjectReader tr(*t, "timeline");
    if (auto v = tr.unsigned_int("steps")) s.timeline.steps = static_cast<std::size_t>(*v);
    if (auto v = tr.unsigned_int("attack_start")) s.timeline.attack_start = static_cast<std::size_t>(*v);
    tr.finish();
  }
  assign(r.unsigned_int("seed"), s.seed);
  if (auto n = r.unsigned_int("iterations")) s.iterations = static_cast<std::size_t>(*n);
  r.finish();
  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["version"] = kConfigSchemaVersion;
  j["id"] = s.id;
  j["plan"] = {{"f_start_hz", s.plan.f_start()},
               {"delta_f_hz", s.plan.delta_f()},
               {"count", s.plan.count()}};
  j["speed_of_light"] = s.c;
  j["geometry"] = {{"d_vp", s.geometry.d_vp}, {"d_va", s.geometry.d_va}, {"d_ap", s.geometry.d_ap}};
  if (s.snr_db) {
    j["snr_db"] = *s.snr_db;
  } else {
    j["snr_db"] = "none";
  }
  j["samples"] = s.samples;
  j["attacker"] = attacker_to_json(s.attacker);
  json cm;
  cm["hop_seed"] = s.countermeasures.hop_seed;
  if (s.countermeasures.secret_offsets) {
    cm["secret_offsets"] = {{"seed", s.countermeasures.secret_offsets->seed},
                            {"revealed_to_attacker",
                             s.countermeasures.secret_offsets->revealed_to_attacker}};
  }
  if (s.countermeasures.tof_data_rate_bps) {
    cm["tof_data_rate_bps"] = *s.countermeasures.tof_data_rate_bps;
  }
  cm["detector_threshold_rad"] = s.countermeasures.detector_threshold_rad;
  j["countermeasures"] = cm;
  j["prover_in_range"] = s.prover_in_range;
  j["path_loss"] = s.path_loss;
  j["lock_error_std_rad"] = s.lock_error_std_rad;
  j["window_len"] = s.window_len;
  j["timeline"] = {{"steps", s.timeline.steps}, {"attack_start", s.timeline.attack_start}};
  j["seed"] = s.seed;
  j["iterations"] = s.iterations;
  return j;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace mpr
