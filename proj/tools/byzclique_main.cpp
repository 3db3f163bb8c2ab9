#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "byzclique/adversary.hpp"
#include "byzclique/scenario.hpp"

namespace {

std::string default_out_dir() {
  const char* dir = std::getenv("BYZCLIQUE_OUT_DIR");
  return dir && *dir ? dir : ".";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_run(const std::string& config, uint64_t seed, const std::string& out) {
  byz::Scenario s = byz::load_scenario(config);
  byz::RunReport report = byz::execute_scenario(s, seed);
  std::string path = out.empty() ? default_out_dir() + "/report.json" : out;
  std::ofstream of(path);
  if (!of) throw std::runtime_error("cannot write: " + path);
  of << report.to_json() << "\n";
  int accepts = 0;
  for (int d : report.decisions) accepts += d;
  std::cout << "n=" << report.n << " b=" << report.b << " class=" << report.class_name
            << " accepts=" << accepts << "/" << report.n << " rounds=" << report.total_rounds
            << " words=" << report.total_words << (report.flagged ? " FLAGGED" : "")
            << "\nreport: " << path << "\n";
  return 0;
}

int cmd_impossibility(int f, int seeds) {
  byz::ScenarioPair pair = byz::indistinguishability_scenario(f);
  byz::ProtocolBody body = [](byz::RoundEngine& eng, const byz::Graph& g,
                              const byz::RowProvider& rows, int b) {
    byz::run_recognition(eng, g, b, byz::forests_class(), rows);
  };
  int pass = 0, fail = 0;
  for (int i = 1; i <= seeds; ++i)
    (byz::assert_indistinguishable(pair, static_cast<uint64_t>(i), body) ? pass : fail) += 1;
  std::cout << "f=" << f << " n=" << pair.no.g.node_count() << " seeds=" << seeds
            << " indistinguishable=" << pass << " distinguished=" << fail << "\n";
  if (fail) {
    std::cerr << "error: some seed distinguished the two sides\n";
    return 1;
  }
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& out) {
  byz::SweepConfig cfg = byz::parse_sweep(read_file(config));
  auto rows = byz::run_sweep(cfg);
  std::string path = out.empty() ? default_out_dir() + "/sweep.csv" : out;
  std::ofstream of(path);
  if (!of) throw std::runtime_error("cannot write: " + path);
  of << byz::sweep_csv_header() << "\n";
  int failures = 0;
  for (const auto& r : rows) {
    of << byz::sweep_csv_row(r) << "\n";
    failures += !r.error.empty();
  }
  std::cout << rows.size() << " rows (" << failures << " failed) -> " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Byzantine congested clique recognition experiments"};
  app.require_subcommand(1);

  std::string run_config, run_out;
  uint64_t run_seed = 0;
  auto* run = app.add_subcommand("run", "execute one scenario config");
  run->add_option("--config", run_config, "scenario JSON")->required();
  run->add_option("--seed", run_seed, "override the config seed");
  run->add_option("--out", run_out, "report path (default $BYZCLIQUE_OUT_DIR/report.json)");

  int imp_f = 0, imp_seeds = 100;
  auto* imp = app.add_subcommand("impossibility", "transcript-equality harness");
  imp->add_option("--f", imp_f, "target gap (>= 1)")->required()->check(CLI::Range(1, 20));
  imp->add_option("--seeds", imp_seeds, "seed count")->check(CLI::Range(1, 1000000));

  std::string sweep_config, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "run a parameter grid, emit CSV");
  sweep->add_option("--config", sweep_config, "sweep JSON")->required();
  sweep->add_option("--out", sweep_out, "CSV path (default $BYZCLIQUE_OUT_DIR/sweep.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_config, run_seed, run_out);
    if (imp->parsed()) return cmd_impossibility(imp_f, imp_seeds);
    return cmd_sweep(sweep_config, sweep_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
