#pragma once

// Figure recipes and detector calibration. Each recipe yields a canonical
// table (written as CSV) and a plot of the same data.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpr/scenario.hpp"
#include "mpr/svg.hpp"

namespace mpr {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

void write_csv(std::ostream& out, const Table& table);

struct FigureOptions {
  std::uint64_t seed = 1;
  std::optional<std::size_t> iterations;  // overrides the recipe's Monte Carlo count
};

struct FigureOutput {
  std::string id;
  Table table;
  Plot plot;
};

const std::vector<std::string>& figure_ids();

/// Throws std::invalid_argument for an unknown id.
FigureOutput reproduce_figure(std::string_view id, const FigureOptions& options = {});

/// SNR grid used by the noise sweeps: 0..30 dB in 1 dB steps.
std::vector<double> default_snr_grid();

// Scenario builders shared by the recipes and the CLI.
Scenario benign_scenario(const FrequencyPlan& plan, double d_vp, std::optional<double> snr_db);
Scenario cycle_slip_scenario(const FrequencyPlan& plan, double d_vp, double target_m,
                             std::optional<double> snr_db);
Scenario otf_scenario(const FrequencyPlan& plan, double d_vp, double target_m,
                      std::optional<double> snr_db);
Scenario uniform_delay_timeline(double d_vp, double snr_db, std::size_t steps, std::size_t attack_start);
Scenario interference_scenario(double delta_f_hz);
Scenario random_phase_scenario(double snr_db);

struct CalibrationPoint {
  std::string plan_label;
  double snr_db = 0.0;
  std::size_t samples = 0;
  std::size_t trials = 0;
  double percentile = 99.0;
  double threshold_rad = 0.0;
};

/// Benign residual percentile for each (plan, snr, samples) combination.
std::vector<CalibrationPoint> calibrate_detector(const std::vector<std::pair<std::string, FrequencyPlan>>& plans,
                                                 const std::vector<double>& snrs,
                                                 const std::vector<std::size_t>& samples,
                                                 std::size_t trials, double percentile,
                                                 std::uint64_t seed);

Table calibration_table(const std::vector<CalibrationPoint>& points);


}  // namespace mpr
