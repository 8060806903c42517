// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1 for ctest).

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mpr/figures.hpp"
#include "mpr/simulation.hpp"

using namespace mpr;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "MISSED ") + what;
  }
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

Geometry relay_at_one_metre(double d_vp) { return {d_vp, 1.0, d_vp - 1.0}; }

Outcome rollover_table() {
  Outcome o;
  const double hops[] = {0.5e6, 1e6, 2e6, 4e6};
  const double expect[] = {300.0, 150.0, 75.0, 37.5};
  for (int k = 0; k < 4; ++k) {
    const double got = max_unambiguous_distance(hops[k], 3e8);
    o.require(got == expect[k], fmt("%g MHz", hops[k] / 1e6) + " -> " + fmt("%.17g m", got));
  }
  return o;
}

Outcome benign_round_trip() {
  Outcome o;
  double worst = 0.0;
  for (double d : {0.0, 1.0, 10.0, 20.0, 30.0, 74.0}) {
    Scenario s;
    s.geometry = {d, 0.0, d};
    const auto r = run_scenario(s);
    worst = std::max(worst, std::abs(r[0].fitted_distance_m - d));
  }
  o.require(worst < 1e-6, "max error " + fmt("%.3g m", worst));
  return o;
}

Outcome delay_sweep() {
  Outcome o;
  Scenario s;
  s.geometry = relay_at_one_metre(30.0);
  s.attacker.variant = UniformDelay{0.0, 0.0, 0.0, 0.0};
  std::vector<double> delays;
  for (int k = 0; k <= 10000; ++k) delays.push_back(0.1 * k);
  const auto r = sweep_delay(s, delays);
  std::vector<double> drops;
  for (std::size_t k = 1; k < r.size(); ++k) {
    if (r[k - 1].fitted_distance_m - r[k].fitted_distance_m > 37.5) drops.push_back(delays[k]);
  }
  o.require(drops.size() == 2, std::to_string(drops.size()) + " rollovers in 0-1000 ns");
  if (drops.size() >= 2) {
    const double period = drops[1] - drops[0];
    o.require(std::abs(period - 500.0) <= 1.0, "period " + fmt("%.1f ns", period));
  }
  o.require(std::abs(r[0].fitted_distance_m - 30.0) < 1e-6, "at 0 ns " + fmt("%.6f m", r[0].fitted_distance_m));
  const std::vector<double> at{920.0 / 3.0};
  const double v = sweep_delay(s, at)[0].fitted_distance_m;
  o.require(std::abs(v - 1.0) <= 0.1, "at 306.67 ns " + fmt("%.4f m", v));
  return o;
}

Outcome attack_headline() {
  Outcome o;
  const std::size_t window = kDefaultWindow;
  for (double d : {30.0, 40.0, 50.0}) {
    Scenario s;
    s.id = "headline";
    s.geometry = relay_at_one_metre(d);
    s.snr_db = 25.0;
    s.attacker.variant = UniformDelay{};
    s.window_len = window;
    s.timeline = {window + 2 * window, window};
    s.iterations = 100;
    const auto r = run_scenario(s);
    int ok = 0;
    for (std::size_t it = 0; it < s.iterations; ++it) {
      bool reached = false;
      for (std::size_t step = window; step < s.timeline.steps; ++step) {
        reached = reached || r[it * s.timeline.steps + step].smoothed_distance_m < 3.0;
      }
      ok += reached;
    }
    o.require(ok >= 95, fmt("%g m: ", d) + std::to_string(ok) + "/100 below 3 m");
  }
  return o;
}

Outcome amplify_only() {
  Outcome o;
  for (auto [hop, expect] : {std::pair{4e6, 15.5}, std::pair{2e6, 53.0}}) {
    Scenario s;
    s.plan = FrequencyPlan(2.403e9, hop, 20);
    s.geometry = relay_at_one_metre(53.0);
    s.snr_db = 25.0;
    s.attacker.variant = AmplifyOnly{4.0};
    s.iterations = 20;
    double worst = 0.0;
    for (const auto& r : run_scenario(s)) worst = std::max(worst, std::abs(r.fitted_distance_m - expect));
    o.require(worst <= 0.5, fmt("%g MHz", hop / 1e6) + fmt(" worst |fit - %g|", expect) + fmt(" = %.3f m", worst));
  }
  return o;
}

// Mean error curves for benign (prover at 1 m) and an attack relaying from
// 30 m towards 1 m, both hop sizes, 0-30 dB, 100 iterations.
struct Curves {
  double hop = 0.0;
  std::vector<ErrorPoint> benign, adversarial;
};

std::vector<Curves> noise_curves(const std::function<Scenario(const FrequencyPlan&)>& attack) {
  std::vector<Curves> out;
  for (double hop : {1e6, 2e6}) {
    const auto plan = FrequencyPlan::simulation_band(hop);
    const auto snrs = default_snr_grid();
    out.push_back({hop, error_by_snr(sweep_snr(benign_scenario(plan, 1.0, std::nullopt), snrs, 100)),
                   error_by_snr(sweep_snr(attack(plan), snrs, 100))});
  }
  return out;
}

Outcome cycle_slip_noise() {
  Outcome o;
  for (const auto& c : noise_curves([](const FrequencyPlan& p) { return cycle_slip_scenario(p, 30.0, 1.0, std::nullopt); })) {
    double worst = 0.0;
    int bad = 0;
    for (std::size_t k = 0; k < c.benign.size(); ++k) {
      const double ratio = c.adversarial[k].mean_abs_error_m / c.benign[k].mean_abs_error_m;
      worst = std::max(worst, ratio);
      bad += !(c.adversarial[k].mean_abs_error_m <= 2.0 * c.benign[k].mean_abs_error_m);
    }
    o.require(bad == 0, fmt("%g MHz", c.hop / 1e6) + fmt(" max ratio %.3f", worst) + ", points over 2x: " + std::to_string(bad));
  }
  return o;
}

Outcome otf_noise() {
  Outcome o;
  for (const auto& c : noise_curves([](const FrequencyPlan& p) { return otf_scenario(p, 30.0, 1.0, std::nullopt); })) {
    int below = 0, wide = 0;
    double worst_high = 0.0;
    for (std::size_t k = 0; k < c.benign.size(); ++k) {
      const double adv = c.adversarial[k].mean_abs_error_m;
      const double ben = c.benign[k].mean_abs_error_m;
      below += adv < ben;
      if (c.benign[k].x >= 20.0) {
        worst_high = std::max(worst_high, adv / ben);
        wide += !(adv / ben < 1.5);
      }
    }
    const std::string hop = fmt("%g MHz", c.hop / 1e6);
    o.require(below == 0, hop + " points with OTF below benign: " + std::to_string(below));
    o.require(wide == 0, hop + " >=20 dB points with ratio >= 1.5: " + std::to_string(wide) +
                             fmt(" (max %.3g)", worst_high));
  }
  return o;
}

Outcome interference() {
  Outcome o;
  std::vector<double> distances;
  for (int d = 10; d <= 300; ++d) distances.push_back(d);
  for (double hop : {1e6, 2e6}) {
    const auto r = sweep_prover_distance(interference_scenario(hop), distances);
    double worst = 0.0;
    for (const auto& rec : r) worst = std::max(worst, std::abs(rec.fitted_distance_m - 1.0));
    o.require(worst < 2.0, fmt("%g MHz", hop / 1e6) + fmt(" max deviation %.4f m", worst));
  }
  return o;
}

Outcome random_phase() {
  Outcome o;
  Scenario s = random_phase_scenario(20.0);
  s.iterations = 1000;
  const auto r = run_scenario(s);
  double sum = 0.0;
  int flagged = 0;
  for (const auto& rec : r) {
    sum += rec.fitted_distance_m;
    flagged += rec.detector_flag;
  }
  const double half = max_unambiguous_distance(s.plan.delta_f()) / 2.0;
  const double mean = sum / r.size();
  o.require(std::abs(mean - half) <= 0.1 * half, fmt("mean %.2f m", mean) + fmt(" vs %.2f m", half));
  o.require(flagged >= 950, "flagged " + std::to_string(flagged) + "/1000");
  return o;
}

Outcome tof_gate() {
  Outcome o;
  const auto p = tof_precision(2e6, 3e8);
  o.require(p.seconds == 500e-9 && p.meters == 150.0, fmt("2 Mbps -> %.17g s", p.seconds) + fmt(", %.17g m", p.meters));
  for (auto [d, accept] : {std::pair{100.0, true}, std::pair{200.0, false}}) {
    Scenario s;
    s.geometry = relay_at_one_metre(d);
    s.attacker.variant = CycleSlip{1.0};
    s.countermeasures.tof_data_rate_bps = 2e6;
    const auto r = run_scenario(s)[0];
    o.require(std::abs(r.fitted_distance_m - 1.0) < 1e-6 && r.tof_accepted == accept,
              fmt("%g m -> ", d) + fmt("%.3f m ", r.fitted_distance_m) + (r.tof_accepted ? "accepted" : "rejected"));
  }
  return o;
}

Outcome countermeasure_bypass() {
  Outcome o;
  auto flag_rate = [](Scenario s) {
    s.snr_db = 20.0;
    s.iterations = 1000;
    int flagged = 0;
    for (const auto& r : run_scenario(s)) flagged += r.detector_flag;
    return flagged / 1000.0;
  };
  Scenario benign;
  benign.countermeasures.secret_offsets = SecretOffsetConfig{7, false};
  Scenario blind = benign;
  blind.geometry = relay_at_one_metre(30.0);
  blind.attacker.variant = OtfMixer{};
  Scenario informed = blind;
  informed.countermeasures.secret_offsets->revealed_to_attacker = true;

  const double b = flag_rate(benign);
  const double x = flag_rate(blind);
  const double y = flag_rate(informed);
  o.require(x >= 0.95, fmt("hidden offsets flagged %.1f%%", 100 * x));
  o.require(std::abs(y - b) <= 0.02, fmt("revealed %.1f%%", 100 * y) + fmt(" vs benign %.1f%%", 100 * b));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 rollover table", rollover_table},
      {"2 benign round trip", benign_round_trip},
      {"3 delay sweep", delay_sweep},
      {"4 attack headline", attack_headline},
      {"5 amplify-only rollover", amplify_only},
      {"6 cycle-slip noise robustness", cycle_slip_noise},
      {"7 on-the-fly degradation", otf_noise},
      {"8 prover interference", interference},
      {"9 random phase", random_phase},
      {"10 rough time-of-flight gate", tof_gate},
      {"11 countermeasure bypass", countermeasure_bypass},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += !out.pass;
    std::printf("%s  %s: %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
