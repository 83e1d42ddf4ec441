#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "hprec/channel.hpp"
#include "hprec/precoding.hpp"

namespace hprec {

struct SimConfig {
  ChannelConfig channel;
  int n_rf = 3;
  int n_s = 3;
  int n_cb = 64;
  std::vector<double> snr_db{-10.0, -5.0, 0.0, 5.0, 10.0};
  int trials = 100;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::DGHP, Algorithm::GSHP, Algorithm::ApproxGSHP,
                                    Algorithm::SvdBound};
  bool fast_eig_path = false;

  // Throws ConfigInvalid; TooLarge when exhaustive is enabled above the guard.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

// N_BS=32, N_MS=16, N_S=N_RF=3, N_CB=64, K=512, D=128, L=6, R=5, 10 deg.
// Exhaustive search is left out at this scale.
SimConfig paper_profile();
// Small link where exhaustive search is cheap: N_BS=16, N_MS=8, N_RF=N_S=2,
// N_CB=16, K=16.
SimConfig desk_profile();

// Fields missing from `j` keep the values of `base`. Throws ConfigInvalid on
// unknown keys or wrong types.
SimConfig config_from_json(const nlohmann::json& j, SimConfig base);
nlohmann::json config_to_json(const SimConfig& config);
SimConfig load_config(const std::filesystem::path& path, SimConfig base);

struct ResultRow {
  double snr_db = 0.0;
  Algorithm algorithm = Algorithm::SvdBound;
  int trial = 0;
  double rate = 0.0;
  std::int64_t wall_time_us = 0;

  bool operator==(const ResultRow&) const = default;
};

struct AggregateRow {
  double snr_db = 0.0;
  Algorithm algorithm = Algorithm::SvdBound;
  double mean_rate = 0.0;
  double std_rate = 0.0;
  int n = 0;

  bool operator==(const AggregateRow&) const = default;
};

struct RunOptions {
  // 0 picks hardware concurrency, capped by HYBRID_PRECODE_THREADS.
  unsigned threads = 0;
  // When false, wall_time_us is written as 0 so outputs are byte-reproducible.
  bool record_timing = true;
};

// splitmix64 mix of (seed, trial).
std::uint64_t derive_trial_seed(std::uint64_t seed, int trial);

// Worker count honoring HYBRID_PRECODE_THREADS.
unsigned resolve_threads(unsigned requested, int trials);

// Rows ordered by trial, then SNR grid order, then configured algorithm order.
std::vector<ResultRow> run_experiment(const SimConfig& config, const RunOptions& options = {});

// Grouped by (snr_db, algorithm), sorted by SNR then algorithm. Sample std,
// reported as 0 for single-row groups. Throws EmptyInput.
std::vector<AggregateRow> aggregate(std::span<const ResultRow> rows);

void write_csv(std::span<const ResultRow> rows, const std::filesystem::path& path);
void write_csv(std::span<const AggregateRow> rows, const std::filesystem::path& path);
std::vector<ResultRow> read_result_csv(const std::filesystem::path& path);
std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path);

// Line chart of mean rate versus SNR, one polyline per algorithm.
void emit_svg(std::span<const AggregateRow> rows, const std::filesystem::path& path);

}  // namespace hprec
