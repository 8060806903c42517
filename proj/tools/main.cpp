// Command-line front end: scenario runs, sweeps, figure recipes and
// detector calibration.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpr/figures.hpp"
#include "mpr/scenario.hpp"
#include "mpr/simulation.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string format = "csv";
  bool svg() const { return format == "csv+svg"; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Override the scenario seed");
  cmd->add_option("--out-dir", c.out_dir, "Directory for output files")->capture_default_str();
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "csv+svg"}))
      ->capture_default_str();
}

fs::path prepare(const Common& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / name;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
  std::cout << path.string() << '\n';
}

void write_records(const Common& c, const std::string& name, const std::vector<mpr::RunRecord>& records) {
  std::ostringstream body;
  mpr::write_records_csv(body, records);
  write_file(prepare(c, name), body.str());
}

void write_table(const Common& c, const std::string& name, const mpr::Table& t) {
  std::ostringstream body;
  mpr::write_csv(body, t);
  write_file(prepare(c, name), body.str());
}

void write_plot(const Common& c, const std::string& name, const mpr::Plot& p) {
  if (c.svg()) write_file(prepare(c, name), mpr::render_svg(p));
}

mpr::Scenario load(const std::string& path, const Common& c) {
  auto s = mpr::load_scenario(path);
  if (c.seed) s.seed = *c.seed;
  return s;
}

std::vector<double> grid(double lo, double hi, double step, const std::string& what) {
  if (!(step > 0.0) || hi < lo) throw mpr::ConfigError(what, "needs min <= max and a positive step");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) out.push_back(lo + step * static_cast<double>(k));
  return out;
}

mpr::FrequencyPlan plan_by_name(const std::string& name) {
  if (name == "ism") return mpr::FrequencyPlan::ism_profile();
  if (name == "sim1") return mpr::FrequencyPlan::simulation_band(1e6);
  if (name == "sim2") return mpr::FrequencyPlan::simulation_band(2e6);
  throw mpr::ConfigError("--plan", "unknown plan '" + name + "' (ism, sim1, sim2)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multicarrier phase ranging relay-attack simulator"};
  app.require_subcommand(1);

  Common common;
  std::string config;

  auto* simulate = app.add_subcommand("simulate", "Run every iteration and timeline step of a scenario");
  simulate->add_option("config", config, "Scenario JSON")->required();
  add_common(simulate, common);

  double snr_min = 0, snr_max = 30, snr_step = 1;
  std::size_t iterations = 100;
  auto* sweep_snr = app.add_subcommand("sweep-snr", "Mean distance error across an SNR grid");
  sweep_snr->add_option("config", config, "Scenario JSON")->required();
  sweep_snr->add_option("--snr-min", snr_min)->capture_default_str();
  sweep_snr->add_option("--snr-max", snr_max)->capture_default_str();
  sweep_snr->add_option("--snr-step", snr_step)->capture_default_str();
  sweep_snr->add_option("--iterations", iterations)->check(CLI::PositiveNumber)->capture_default_str();
  add_common(sweep_snr, common);

  double delay_min = 0, delay_max = 1000, delay_step = 1;
  auto* sweep_delay = app.add_subcommand("sweep-delay", "Fitted distance against a uniform relay delay (ns)");
  sweep_delay->add_option("config", config, "Scenario JSON")->required();
  sweep_delay->add_option("--delay-min", delay_min)->capture_default_str();
  sweep_delay->add_option("--delay-max", delay_max)->capture_default_str();
  sweep_delay->add_option("--delay-step", delay_step)->capture_default_str();
  add_common(sweep_delay, common);

  double d_min = 2, d_max = 100, d_step = 1;
  auto* sweep_prover = app.add_subcommand("sweep-prover", "Fitted distance against verifier-prover distance");
  sweep_prover->add_option("config", config, "Scenario JSON")->required();
  sweep_prover->add_option("--d-min", d_min)->capture_default_str();
  sweep_prover->add_option("--d-max", d_max)->capture_default_str();
  sweep_prover->add_option("--d-step", d_step)->capture_default_str();
  add_common(sweep_prover, common);

  std::string figure_id;
  std::optional<std::size_t> figure_iterations;
  auto* figure = app.add_subcommand("figure", "Reproduce a figure as CSV (and SVG)");
  figure->add_option("id", figure_id, "Figure id or 'all'")->required();
  figure->add_option("--iterations", figure_iterations, "Override Monte Carlo iterations");
  add_common(figure, common);

  std::vector<std::string> plans{"ism"};
  std::vector<double> cal_snrs{20.0};
  std::vector<std::size_t> cal_samples{mpr::kDefaultSamples};
  std::size_t trials = 5000;
  double pct = 99.0;
  auto* calibrate = app.add_subcommand("calibrate-detector", "Benign residual percentiles per (plan, SNR, M)");
  calibrate->add_option("--plan", plans, "ism, sim1, sim2")->capture_default_str();
  calibrate->add_option("--snr", cal_snrs)->capture_default_str();
  calibrate->add_option("--samples", cal_samples)->capture_default_str();
  calibrate->add_option("--trials", trials)->check(CLI::PositiveNumber)->capture_default_str();
  calibrate->add_option("--percentile", pct)->check(CLI::Range(0.0, 100.0))->capture_default_str();
  add_common(calibrate, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate) {
      const auto s = load(config, common);
      write_records(common, s.id + "_records.csv", mpr::run_scenario(s));
    } else if (*sweep_snr) {
      const auto s = load(config, common);
      const auto snrs = grid(snr_min, snr_max, snr_step, "--snr-step");
      const auto records = mpr::sweep_snr(s, snrs, iterations);
      write_records(common, s.id + "_snr_records.csv", records);
      mpr::Table t{{"snr_db", "mean_abs_error_m", "trials"}, {}};
      mpr::PlotSeries series{s.id, {}, {}, false};
      for (const auto& p : mpr::error_by_snr(records)) {
        t.add_row({mpr::format_number(p.x), mpr::format_number(p.mean_abs_error_m), std::to_string(p.trials)});
        series.x.push_back(p.x);
        series.y.push_back(p.mean_abs_error_m);
      }
      write_table(common, s.id + "_snr_error.csv", t);
      write_plot(common, s.id + "_snr_error.svg", {s.id, "SNR (dB)", "mean distance error (m)", {series}});
    } else if (*sweep_delay) {
      const auto s = load(config, common);
      const auto delays = grid(delay_min, delay_max, delay_step, "--delay-step");
      const auto records = mpr::sweep_delay(s, delays);
      write_records(common, s.id + "_delay_records.csv", records);
      mpr::PlotSeries series{s.id, {}, {}, false};
      for (std::size_t k = 0; k < records.size(); ++k) {
        series.x.push_back(delays[k / s.iterations]);
        series.y.push_back(records[k].fitted_distance_m);
      }
      write_plot(common, s.id + "_delay.svg", {s.id, "delay (ns)", "fitted distance (m)", {series}});
    } else if (*sweep_prover) {
      const auto s = load(config, common);
      const auto ds = grid(d_min, d_max, d_step, "--d-step");
      const auto records = mpr::sweep_prover_distance(s, ds);
      write_records(common, s.id + "_prover_records.csv", records);
      mpr::PlotSeries series{s.id, {}, {}, false};
      for (const auto& r : records) {
        series.x.push_back(r.true_distance_m);
        series.y.push_back(r.fitted_distance_m);
      }
      write_plot(common, s.id + "_prover.svg", {s.id, "verifier-prover distance (m)", "fitted distance (m)", {series}});
    } else if (*figure) {
      std::vector<std::string> ids{figure_id};
      if (figure_id == "all") ids = mpr::figure_ids();
      mpr::FigureOptions opts;
      opts.seed = common.seed.value_or(1);
      opts.iterations = figure_iterations;
      for (const auto& id : ids) {
        const auto out = mpr::reproduce_figure(id, opts);
        write_table(common, id + ".csv", out.table);
        write_plot(common, id + ".svg", out.plot);
      }
    } else if (*calibrate) {
      std::vector<std::pair<std::string, mpr::FrequencyPlan>> named;
      for (const auto& p : plans) named.emplace_back(p, plan_by_name(p));
      const auto points = mpr::calibrate_detector(named, cal_snrs, cal_samples, trials, pct, common.seed.value_or(1));
      write_table(common, "detector_calibration.csv", mpr::calibration_table(points));
    }
  } catch (const mpr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
