// Command-line front end: spectral analysis and Lang-Kobayashi sweeps of the
// time-delayed two-laser system, emitting CSV artifacts.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sideband/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Time-delayed coupled-laser spectra and sideband analysis"};

  std::string config_path, mode, out, variant;
  std::vector<std::string> sets;
  long long seed = -1;
  int workers = -1;

  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--mode", mode,
                 "eigen | dome | sweep-eigen | simulate | sweep-lk | sow | fig3");
  app.add_option("--out", out, "output directory for CSV artifacts");
  app.add_option("--seed", seed, "global random seed");
  app.add_option("--workers", workers, "worker thread count for sweeps");
  app.add_option("--set", sets, "repeated key=value overrides");

  CLI11_PARSE(app, argc, argv);

  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: config-error: cannot read " << config_path << '\n';
        return 2;
      }
      std::ostringstream os;
      os << in.rdbuf();
      text = os.str();
    }
    std::vector<std::string> overrides = sets;
    if (!mode.empty()) overrides.push_back("mode=" + mode);
    if (!out.empty()) overrides.push_back("out=" + out);
    if (seed >= 0) overrides.push_back("seed=" + std::to_string(seed));
    if (workers >= 0) overrides.push_back("workers=" + std::to_string(workers));

    const auto config = sideband::cli::parse_config(text, overrides, &std::cerr);
    return sideband::cli::run(config);
  } catch (const sideband::ConfigError& e) {
    std::cerr << "error: config-error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: numerical-failure: " << e.what() << '\n';
    return 3;
  }
}
