// Monte Carlo driver: runs the configured precoders over seeded channel
// draws and writes raw rows, per-SNR aggregates and an SVG chart.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hprec/bench.hpp"
#include "hprec/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfigInvalid = 2;
constexpr int kExitTooLarge = 3;

std::vector<hprec::Algorithm> parse_list(const std::string& list) {
  std::vector<hprec::Algorithm> out;
  std::stringstream ss(list);
  std::string tag;
  while (std::getline(ss, tag, ',')) {
    if (tag.empty()) continue;
    const auto a = hprec::parse_algorithm(tag);
    if (!a) throw hprec::ConfigInvalid("unknown algorithm: " + tag);
    out.push_back(*a);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid precoding Monte Carlo simulator"};
  std::string config_path;
  std::string out_path = "results.csv";
  std::string agg_path;
  std::string plot_path;
  std::string profile = "paper";
  std::string algorithms;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  bool no_timing = false;
  bool print_config = false;

  app.add_option("--config", config_path, "JSON file with SimConfig fields (snake_case)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "raw per-trial CSV");
  app.add_option("--agg", agg_path, "aggregate CSV (mean/std per SNR and algorithm)");
  app.add_option("--plot", plot_path, "SVG line chart of mean rate versus SNR");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--profile", profile, "base parameter set")
      ->check(CLI::IsMember({"paper", "desk"}));
  app.add_option("--algorithms", algorithms,
                 "comma list: exhaustive,dg_hp,gs_hp,approx_gs_hp,svd_bound");
  app.add_option("--trials", trials, "number of channel draws");
  app.add_flag("--no-timing", no_timing, "write wall_time_us as 0 (byte-reproducible output)");
  app.add_flag("--print-config", print_config, "print the resolved config as JSON and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigInvalid;
  }

  try {
    hprec::SimConfig config = profile == "desk" ? hprec::desk_profile() : hprec::paper_profile();
    if (!config_path.empty()) config = hprec::load_config(config_path, config);
    if (seed) config.seed = *seed;
    if (trials) config.trials = *trials;
    if (!algorithms.empty()) config.algorithms = parse_list(algorithms);
    config.validate();

    if (print_config) {
      std::cout << hprec::config_to_json(config).dump(2) << '\n';
      return kExitOk;
    }

    hprec::RunOptions options;
    options.record_timing = !no_timing;
    const auto rows = hprec::run_experiment(config, options);
    hprec::write_csv(rows, out_path);
    const auto summary = hprec::aggregate(rows);
    if (!agg_path.empty()) hprec::write_csv(summary, agg_path);
    if (!plot_path.empty()) hprec::emit_svg(summary, plot_path);

    for (const auto& r : summary) {
      std::cout << r.snr_db << " dB  " << hprec::to_string(r.algorithm) << "  " << r.mean_rate
                << " bps/Hz (n=" << r.n << ")\n";
    }
  } catch (const hprec::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigInvalid;
  } catch (const hprec::TooLarge& e) {
    std::cerr << "search too large: " << e.what() << '\n';
    return kExitTooLarge;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
