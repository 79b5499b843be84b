#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smax/harness.hpp"

namespace smax {

/// One (noise, tau) operating point of the scaling figure.
struct ScalingSeries {
  double noise_db;
  int tau;
};

struct FigureDataConfig {
  std::size_t runs = 10000;
  std::uint64_t base_seed = 1;
  unsigned threads = 1;
  std::string out_dir = ".";

  // Error-rate and iteration figures.
  std::size_t agents = 1000;
  int m = 8;
  std::vector<double> noise_db;  // empty: -5.5 .. 15.5 in 1 dB steps
  std::vector<int> taus{2, 3, 4, 5, 10, 20};

  // Scaling figure.
  std::vector<std::size_t> scaling_agents{1000, 2000, 3000, 4000, 5000};
  std::vector<ScalingSeries> scaling_series{{-1.0, 2}, {5.0, 6}, {7.0, 10}};
  double target_error = 0.005;
};

/// One row of the scaling CSV.
struct ScalingRow {
  std::size_t agents = 0;
  Scheme scheme = Scheme::scalablemax_ec;
  double noise_power = 0;
  std::optional<int> termination_parameter;
  std::size_t runs = 0;
  double error_rate = 0;
  std::optional<double> average_iterations;
  /// Mean finishing-phase broadcasts among survivors (EC rows only).
  std::optional<double> average_finishing_broadcasts;
  /// Empirical 99.5% quantile of iterations to consensus (baselines).
  std::optional<std::uint64_t> iterations_q995;
  /// rb_iterations_for_error at the target error (RB rows only).
  std::optional<std::uint64_t> analytic_iterations;
};

inline constexpr const char* kScalingHeader =
    "agents,scheme,noise_power,termination_parameter,runs,error_rate,average_iterations,"
    "average_finishing_broadcasts,iterations_q995,analytic_iterations";

void write_scaling_rows(std::ostream& out, std::span<const ScalingRow> rows);

/// Records of the no-EC series followed by one series per tau.
std::vector<ExperimentRecord> error_rate_records(const FigureDataConfig& config);

/// Three EC series plus RB and RP, for every agent count.
std::vector<ScalingRow> scaling_rows(const FigureDataConfig& config);

struct FigureDataPaths {
  std::string error_rate;
  std::string iterations;
  std::string scaling;
};

/// Writes fig1_error_rate.csv, fig2_iterations.csv (both in the record
/// schema) and fig3_scaling.csv into config.out_dir.
FigureDataPaths write_figures_data(const FigureDataConfig& config);

}  // namespace smax
