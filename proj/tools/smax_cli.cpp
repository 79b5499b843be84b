// Command-line front end for the max-consensus simulator.
//
//   smax run    --scheme scalablemax --agents 1000 --noise-db 5 --runs 10000
//   smax sweep  --scheme scalablemax-ec --tau 2,3,4 --noise-db-range -5.5:15.5:1 --out ec.csv
//   smax figures-data --runs 10000 --out-dir results
//
// Every option may also come from a flat key=value file given by --config;
// command-line values take precedence.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "smax/csv.hpp"
#include "smax/figures_data.hpp"
#include "smax/harness.hpp"

namespace {

struct Options {
  std::string scheme = "scalablemax";
  std::vector<std::size_t> agents{1000};
  int m = 8;
  std::vector<int> taus;
  std::vector<std::string> noise_db;
  std::string noise_db_range;
  std::size_t runs = 10000;
  std::uint64_t seed = 1;
  std::uint64_t max_iterations = 0;
  std::string initial_estimate;
  std::string topology;
  std::string out;
  std::size_t prefix_length = 0;
  unsigned threads = 1;
  std::string out_dir = ".";
};

smax::ExperimentConfig to_config(const Options& o) {
  smax::ExperimentConfig c;
  c.scheme = smax::parse_scheme(o.scheme);
  c.agents = o.agents;
  c.m = o.m;
  c.taus = o.taus;
  c.noise_db.clear();
  for (const auto& s : o.noise_db) c.noise_db.push_back(smax::parse_db(s));
  if (!o.noise_db_range.empty()) {
    auto range = smax::parse_db_range(o.noise_db_range);
    c.noise_db.insert(c.noise_db.end(), range.begin(), range.end());
  }
  if (o.noise_db.empty() && o.noise_db_range.empty()) c.noise_db = {0.0};
  c.runs = o.runs;
  c.base_seed = o.seed;
  c.max_iterations = o.max_iterations;
  c.initial_estimate = smax::Estimate::from_string(o.initial_estimate);
  c.topology_file = o.topology;
  c.prefix_length = o.prefix_length;
  c.threads = o.threads;
  return c;
}

void emit(const std::vector<smax::ExperimentRecord>& records, const std::string& out) {
  std::ostringstream text;
  smax::csv::write_records(text, records);
  if (out.empty()) {
    std::cout << text.str();
  } else {
    smax::csv::write_file_atomically(out, text.str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-consensus over a noisy multiple-access channel"};
  app.set_config("--config", "", "Flat key=value file with default option values");
  app.require_subcommand(1);

  Options o;
  app.add_option("--scheme", o.scheme, "scalablemax, scalablemax-ec, rb, rp or multi-coordinator")
      ->capture_default_str();
  app.add_option("--agents", o.agents, "Agent count(s), comma separated")->delimiter(',')
      ->capture_default_str();
  app.add_option("--m", o.m, "Survivor bound m (even)")->capture_default_str();
  app.add_option("--tau", o.taus, "Termination threshold(s) for scalablemax-ec")->delimiter(',');
  app.add_option("--noise-db", o.noise_db, "Noise power(s) in dB; -inf for none")->delimiter(',');
  app.add_option("--noise-db-range", o.noise_db_range, "Noise grid lo:hi:step in dB");
  app.add_option("--runs", o.runs, "Runs per grid point")->capture_default_str();
  app.add_option("--seed", o.seed, "Base seed")->capture_default_str();
  app.add_option("--max-iterations", o.max_iterations, "Iteration cap; 0 = default");
  app.add_option("--initial-estimate", o.initial_estimate, "Starting estimate as a bit string");
  app.add_option("--topology", o.topology, "Edge-list topology file");
  app.add_option("--prefix-length", o.prefix_length, "Shared leading input bits");
  app.add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  app.add_option("--out", o.out, "Output CSV (stdout if omitted)");
  app.add_option("--out-dir", o.out_dir, "Output directory for figures-data")->capture_default_str();

  auto* run = app.add_subcommand("run", "Run one configuration and print its record")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "Run a grid of configurations into a CSV")->fallthrough();
  auto* figures = app.add_subcommand("figures-data", "Emit the CSVs behind the three result figures")
                      ->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto config = to_config(o);
      if (smax::grid_points(config).size() != 1) {
        throw smax::ConfigError("'run' takes a single configuration; use 'sweep' for grids");
      }
      emit(smax::run_experiment(config), o.out);
    } else if (sweep->parsed()) {
      if (o.out.empty()) throw smax::ConfigError("'sweep' needs --out");
      smax::sweep(to_config(o), o.out);
    } else if (figures->parsed()) {
      smax::FigureDataConfig fc;
      fc.runs = o.runs;
      fc.base_seed = o.seed;
      fc.threads = o.threads;
      fc.out_dir = o.out_dir;
      fc.agents = o.agents.front();
      fc.m = o.m;
      if (!o.noise_db_range.empty()) fc.noise_db = smax::parse_db_range(o.noise_db_range);
      if (!o.taus.empty()) fc.taus = o.taus;
      const auto paths = smax::write_figures_data(fc);
      std::cout << paths.error_rate << '\n' << paths.iterations << '\n' << paths.scaling << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "smax: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
