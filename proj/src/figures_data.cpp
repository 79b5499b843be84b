#include "smax/figures_data.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>

#include "smax/baselines.hpp"
#include "smax/csv.hpp"

namespace smax {

namespace {

std::vector<double> default_noise_grid() { return parse_db_range("-5.5:15.5:1"); }

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return csv::format_number(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

void write_scaling_rows(std::ostream& out, std::span<const ScalingRow> rows) {
  out << kScalingHeader << '\n';
  for (const auto& r : rows) {
    out << r.agents << ',' << to_string(r.scheme) << ',' << csv::format_number(r.noise_power)
        << ',' << opt(r.termination_parameter) << ',' << r.runs << ','
        << csv::format_number(r.error_rate) << ',' << opt(r.average_iterations) << ','
        << opt(r.average_finishing_broadcasts) << ',' << opt(r.iterations_q995) << ','
        << opt(r.analytic_iterations) << '\n';
  }
}

std::vector<ExperimentRecord> error_rate_records(const FigureDataConfig& config) {
  ExperimentConfig base;
  base.agents = {config.agents};
  base.m = config.m;
  base.noise_db = config.noise_db.empty() ? default_noise_grid() : config.noise_db;
  base.runs = config.runs;
  base.base_seed = config.base_seed;
  base.threads = config.threads;

  ExperimentConfig plain = base;
  plain.scheme = Scheme::scalablemax;
  auto records = run_experiment(plain);

  ExperimentConfig ec = base;
  ec.scheme = Scheme::scalablemax_ec;
  ec.taus = config.taus;
  auto ec_records = run_experiment(ec);
  records.insert(records.end(), ec_records.begin(), ec_records.end());
  return records;
}

std::vector<ScalingRow> scaling_rows(const FigureDataConfig& config) {
  std::vector<ScalingRow> rows;
  for (const auto& series : config.scaling_series) {
    ExperimentConfig ec;
    ec.scheme = Scheme::scalablemax_ec;
    ec.agents = config.scaling_agents;
    ec.m = config.m;
    ec.taus = {series.tau};
    ec.noise_db = {series.noise_db};
    ec.runs = config.runs;
    ec.base_seed = config.base_seed;
    ec.threads = config.threads;
    for (const auto& r : run_experiment(ec)) {
      ScalingRow row;
      row.agents = r.agents;
      row.scheme = r.scheme;
      row.noise_power = r.noise_power;
      row.termination_parameter = r.termination_parameter;
      row.runs = r.runs;
      row.error_rate = 1 - r.success_rate;
      row.average_iterations = r.average_iterations_in_successful_runs;
      row.average_finishing_broadcasts = r.average_survivor_count;
      rows.push_back(row);
    }
  }
  for (Scheme s : {Scheme::rb, Scheme::rp}) {
    ExperimentConfig g;
    g.scheme = s;
    g.agents = config.scaling_agents;
    g.m = config.m;
    g.runs = config.runs;
    g.base_seed = config.base_seed;
    g.threads = config.threads;
    for (const auto& r : run_experiment(g)) {
      ScalingRow row;
      row.agents = r.agents;
      row.scheme = s;
      row.noise_power = r.noise_power;
      row.runs = r.runs;
      row.error_rate = 1 - r.success_rate;
      row.average_iterations = r.average_iterations_in_successful_runs;
      row.iterations_q995 = r.iterations_q995;
      if (s == Scheme::rb && r.agents >= 2) {
        row.analytic_iterations = rb_iterations_for_error(r.agents, config.target_error);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

FigureDataPaths write_figures_data(const FigureDataConfig& config) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create directory '" + config.out_dir + "'");

  FigureDataPaths paths{(fs::path(config.out_dir) / "fig1_error_rate.csv").string(),
                        (fs::path(config.out_dir) / "fig2_iterations.csv").string(),
                        (fs::path(config.out_dir) / "fig3_scaling.csv").string()};

  const auto records = error_rate_records(config);
  std::ostringstream records_text;
  csv::write_records(records_text, records);
  csv::write_file_atomically(paths.error_rate, records_text.str());
  csv::write_file_atomically(paths.iterations, records_text.str());

  std::ostringstream scaling_text;
  const auto rows = scaling_rows(config);
  write_scaling_rows(scaling_text, rows);
  csv::write_file_atomically(paths.scaling, scaling_text.str());
  return paths;
}

}  // namespace smax
