#include "mpr/figures.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>

#include "mpr/simulation.hpp"

namespace mpr {

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

std::vector<double> default_snr_grid() {
  std::vector<double> out;
  for (int s = 0; s <= 30; ++s) out.push_back(s);
  return out;
}

namespace {

Geometry relay_geometry(double d_vp, double d_va = 1.0) { return {d_vp, d_va, d_vp - d_va}; }

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

std::string hop_label(double delta_f) { return fmt(delta_f / 1e6) + " MHz"; }

}  // namespace

Scenario benign_scenario(const FrequencyPlan& plan, double d_vp, std::optional<double> snr_db) {
  Scenario s;
  s.id = "benign";
  s.plan = plan;
  s.geometry = relay_geometry(d_vp, std::min(1.0, d_vp));
  s.snr_db = snr_db;
  return s;
}

Scenario cycle_slip_scenario(const FrequencyPlan& plan, double d_vp, double target_m,
                             std::optional<double> snr_db) {
  Scenario s = benign_scenario(plan, d_vp, snr_db);
  s.id = "cycle_slip";
  s.geometry = relay_geometry(d_vp);
  s.attacker.variant = CycleSlip{target_m};
  return s;
}

Scenario otf_scenario(const FrequencyPlan& plan, double d_vp, double target_m,
                      std::optional<double> snr_db) {
  Scenario s = benign_scenario(plan, d_vp, snr_db);
  s.id = "otf";
  s.geometry = relay_geometry(d_vp);
  OtfMixer m;
  m.target_m = target_m;
  s.attacker.variant = m;
  return s;
}

Scenario uniform_delay_timeline(double d_vp, double snr_db, std::size_t steps, std::size_t attack_start) {
  Scenario s;
  s.id = "uniform_delay_timeline";
  s.geometry = relay_geometry(d_vp);
  s.snr_db = snr_db;
  s.attacker.variant = UniformDelay{};
  s.timeline = {steps, attack_start};
  return s;
}

Scenario interference_scenario(double delta_f_hz) {
  Scenario s;
  s.id = "interference";
  s.plan = FrequencyPlan::simulation_band(delta_f_hz);
  s.geometry = relay_geometry(30.0);
  s.prover_in_range = true;
  s.path_loss = true;
  s.attacker.variant = CycleSlip{1.0};
  s.attacker.output_amplitude = 1.0;
  return s;
}

Scenario random_phase_scenario(double snr_db) {
  Scenario s;
  s.id = "random_phase";
  s.geometry = relay_geometry(30.0);
  s.snr_db = snr_db;
  s.attacker.variant = RandomPhase{};
  return s;
}

namespace {

FigureOutput fig3(const FigureOptions&) {
  FigureOutput out{"fig3", {{"distance_m", "frequency_hz", "wrapped_phase_rad", "straightened_phase_rad"}, {}}, {}};
  out.plot = {"Phase profiles at 10 m and 20 m", "frequency (GHz)", "phase (rad)", {}};
  const auto plan = FrequencyPlan::simulation_band(2e6);
  for (double d : {10.0, 20.0}) {
    const auto profile = synthesize_phase_profile(d, plan);
    const auto straight = straighten(profile);
    PlotSeries wrapped{fmt(d) + " m wrapped", {}, {}, true};
    PlotSeries line{fmt(d) + " m straightened", {}, {}, false};
    for (std::size_t i = 0; i < plan.count(); ++i) {
      const double f = plan.frequency(i);
      out.table.add_row({fmt(d), fmt(f), fmt(profile.phases[i].value()), fmt(straight[i])});
      wrapped.x.push_back(f / 1e9);
      wrapped.y.push_back(profile.phases[i].value());
      line.x.push_back(f / 1e9);
      line.y.push_back(straight[i]);
    }
    out.plot.series.push_back(std::move(wrapped));
    out.plot.series.push_back(std::move(line));
  }
  return out;
}

FigureOutput fig5(const FigureOptions& o) {
  FigureOutput out{"fig5", {{"delay_ns", "distance_m"}, {}}, {}};
  out.plot = {"Uniform relay delay sweep, 30 m, 2 MHz hops", "delay (ns)", "measured distance (m)", {}};
  Scenario s;
  s.id = "fig5";
  s.seed = o.seed;
  s.attacker.variant = UniformDelay{0.0, 0.0, 0.0, 0.0};
  std::vector<double> delays;
  for (int t = 0; t <= 1000; ++t) delays.push_back(t);
  const auto records = sweep_delay(s, delays);
  PlotSeries series{"measured", {}, {}, false};
  for (std::size_t k = 0; k < records.size(); ++k) {
    out.table.add_row({fmt(delays[k]), fmt(records[k].fitted_distance_m)});
    series.x.push_back(delays[k]);
    series.y.push_back(records[k].fitted_distance_m);
  }
  out.plot.series.push_back(std::move(series));
  return out;
}

FigureOutput fig7(const FigureOptions&) {
  FigureOutput out{"fig7", {{"true_distance_m", "target_distance_m", "frequency_hz", "delay_ns"}, {}}, {}};
  out.plot = {"Per-carrier cycle-slip delays to reach 1 m", "frequency (GHz)", "delay (ns)", {}};
  const auto plan = FrequencyPlan::simulation_band(2e6);
  for (double d : {30.0, 74.0}) {
    const auto delays = plan_cycle_slip(synthesize_phase_profile(d, plan), 1.0);
    PlotSeries series{"from " + fmt(d) + " m", {}, {}, false};
    for (std::size_t i = 0; i < plan.count(); ++i) {
      out.table.add_row({fmt(d), fmt(1.0), fmt(plan.frequency(i)), fmt(delays.delays_s[i] * 1e9)});
      series.x.push_back(plan.frequency(i) / 1e9);
      series.y.push_back(delays.delays_s[i] * 1e9);
    }
    out.plot.series.push_back(std::move(series));
  }
  return out;
}

FigureOutput fig9(const FigureOptions& o) {
  FigureOutput out{"fig9",
                   {{"true_distance_m", "step", "attacked", "fitted_distance_m", "smoothed_distance_m"}, {}},
                   {}};
  out.plot = {"Uniform-delay attack timeline, 25 dB", "update", "smoothed distance (m)", {}};
  for (double d : {30.0, 40.0, 50.0}) {
    Scenario s = uniform_delay_timeline(d, 25.0, 40, 10);
    s.seed = o.seed;
    const auto records = run_scenario(s);
    PlotSeries series{fmt(d) + " m", {}, {}, false};
    for (const auto& r : records) {
      out.table.add_row({fmt(d), fmt(r.step), r.attack_variant == "none" ? "0" : "1",
                         fmt(r.fitted_distance_m), fmt(r.smoothed_distance_m)});
      series.x.push_back(static_cast<double>(r.step));
      series.y.push_back(r.smoothed_distance_m);
    }
    out.plot.series.push_back(std::move(series));
  }
  return out;
}

// Benign prover at 1 m against an attacker relaying from 30 m to a 1 m target.
FigureOutput snr_comparison(const std::string& id, const std::string& title,
                            const std::function<Scenario(const FrequencyPlan&)>& adversarial,
                            const FigureOptions& o) {
  FigureOutput out{id, {{"hop_mhz", "setting", "snr_db", "mean_abs_error_m", "trials"}, {}}, {}};
  out.plot = {title, "SNR (dB)", "mean distance error (m)", {}};
  const auto snrs = default_snr_grid();
  const std::size_t iterations = o.iterations.value_or(100);
  for (double hop : {1e6, 2e6}) {
    const auto plan = FrequencyPlan::simulation_band(hop);
    Scenario benign = benign_scenario(plan, 1.0, std::nullopt);
    Scenario attack = adversarial(plan);
    benign.seed = attack.seed = o.seed;
    for (const auto& [label, s] : {std::pair{"benign", &benign}, std::pair{"adversarial", &attack}}) {
      const auto errors = error_by_snr(sweep_snr(*s, snrs, iterations));
      PlotSeries series{std::string(label) + ", " + hop_label(hop), {}, {}, false};
      for (const auto& p : errors) {
        out.table.add_row({fmt(hop / 1e6), label, fmt(p.x), fmt(p.mean_abs_error_m), fmt(p.trials)});
        series.x.push_back(p.x);
        series.y.push_back(p.mean_abs_error_m);
      }
      out.plot.series.push_back(std::move(series));
    }
  }
  return out;
}

FigureOutput fig12(const FigureOptions& o) {
  return snr_comparison("fig12", "Cycle-slip attack vs benign under noise",
                        [](const FrequencyPlan& p) { return cycle_slip_scenario(p, 30.0, 1.0, std::nullopt); }, o);
}

FigureOutput fig13(const FigureOptions& o) {
  return snr_comparison("fig13", "On-the-fly attack vs benign under noise",
                        [](const FrequencyPlan& p) { return otf_scenario(p, 30.0, 1.0, std::nullopt); }, o);
}

FigureOutput fig14(const FigureOptions& o) {
  FigureOutput out{"fig14", {{"hop_mhz", "d_vp_m", "fitted_distance_m", "deviation_m"}, {}}, {}};
  out.plot = {"Prover interference, attacker at 1 m targeting 1 m", "verifier-prover distance (m)",
              "deviation from 1 m (m)", {}};
  std::vector<double> distances;
  for (int d = 2; d <= 100; ++d) distances.push_back(d);
  for (double hop : {1e6, 2e6}) {
    Scenario s = interference_scenario(hop);
    s.seed = o.seed;
    const auto records = sweep_prover_distance(s, distances);
    PlotSeries series{hop_label(hop), {}, {}, false};
    for (std::size_t k = 0; k < records.size(); ++k) {
      const double dev = std::abs(records[k].fitted_distance_m - 1.0);
      out.table.add_row({fmt(hop / 1e6), fmt(distances[k]), fmt(records[k].fitted_distance_m), fmt(dev)});
      series.x.push_back(distances[k]);
      series.y.push_back(dev);
    }
    out.plot.series.push_back(std::move(series));
  }
  return out;
}

FigureOutput fig15(const FigureOptions& o) {
  FigureOutput out{"fig15", {{"trial", "fitted_distance_m", "residual_rms_rad", "detector_flag"}, {}}, {}};
  out.plot = {"Random phase attack, 20 dB", "trial", "fitted distance (m)", {}};
  Scenario s = random_phase_scenario(20.0);
  s.seed = o.seed;
  s.iterations = o.iterations.value_or(1000);
  const auto records = run_scenario(s);
  PlotSeries points{"fitted", {}, {}, true};
  double sum = 0.0;
  for (const auto& r : records) {
    out.table.add_row({fmt(r.iteration), fmt(r.fitted_distance_m), fmt(r.residual_rms_rad),
                       r.detector_flag ? "1" : "0"});
    points.x.push_back(static_cast<double>(r.iteration));
    points.y.push_back(r.fitted_distance_m);
    sum += r.fitted_distance_m;
  }
  const double last = static_cast<double>(records.size() - 1);
  const double half = max_unambiguous_distance(s.plan.delta_f(), s.c) / 2.0;
  out.plot.series.push_back(std::move(points));
  out.plot.series.push_back({"mean", {0.0, last}, {sum / records.size(), sum / records.size()}, false});
  out.plot.series.push_back({"d_max / 2", {0.0, last}, {half, half}, false});
  return out;
}

const std::map<std::string, std::function<FigureOutput(const FigureOptions&)>, std::less<>>& recipes() {
  static const std::map<std::string, std::function<FigureOutput(const FigureOptions&)>, std::less<>> r{
      {"fig3", fig3},   {"fig5", fig5},   {"fig7", fig7},   {"fig9", fig9},
      {"fig12", fig12}, {"fig13", fig13}, {"fig14", fig14}, {"fig15", fig15}};
  return r;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig3", "fig5", "fig7", "fig9", "fig12", "fig13", "fig14", "fig15"};
  return ids;
}

FigureOutput reproduce_figure(std::string_view id, const FigureOptions& options) {
  const auto it = recipes().find(id);
  if (it == recipes().end()) throw std::invalid_argument("unknown figure id: " + std::string(id));
  return it->second(options);
}

std::vector<CalibrationPoint> calibrate_detector(
    const std::vector<std::pair<std::string, FrequencyPlan>>& plans, const std::vector<double>& snrs,
    const std::vector<std::size_t>& samples, std::size_t trials, double pct, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  std::vector<CalibrationPoint> out;
  for (const auto& [label, plan] : plans) {
    for (std::size_t m : samples) {
      Scenario s = benign_scenario(plan, 30.0, std::nullopt);
      s.samples = m;
      s.seed = seed;
      const auto records = sweep_snr(s, snrs, trials);
      for (std::size_t k = 0; k < snrs.size(); ++k) {
        std::vector<double> residuals;
        residuals.reserve(trials);
        for (std::size_t t = 0; t < trials; ++t) residuals.push_back(records[k * trials + t].residual_rms_rad);
        out.push_back({label, snrs[k], m, trials, pct, percentile(std::move(residuals), pct)});
      }
    }
  }
  return out;
}

Table calibration_table(const std::vector<CalibrationPoint>& points) {
  Table t{{"plan", "snr_db", "samples", "trials", "percentile", "threshold_rad"}, {}};
  for (const auto& p : points) {
    t.add_row({p.plan_label, fmt(p.snr_db), fmt(p.samples), fmt(p.trials), fmt(p.percentile),
               fmt(p.threshold_rad)});
  }
  return t;
}

}  // namespace mpr
