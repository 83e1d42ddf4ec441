#include "hprec/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>

#include "hprec/errors.hpp"

namespace hprec {

void SimConfig::validate() const {
  channel.validate();
  if (n_s < 1) throw ConfigInvalid("n_s must be >= 1");
  if (n_rf < n_s) throw ConfigInvalid("n_rf must be >= n_s");
  if (n_rf > std::min(channel.n_bs, channel.n_ms))
    throw ConfigInvalid("n_rf must not exceed min(n_bs, n_ms)");
  if (n_cb < n_rf) throw ConfigInvalid("n_cb must be >= n_rf");
  if (trials < 1) throw ConfigInvalid("trials must be >= 1");
  if (snr_db.empty()) throw ConfigInvalid("snr_db must not be empty");
  for (double s : snr_db)
    if (!std::isfinite(s)) throw ConfigInvalid("snr_db entries must be finite");
  if (algorithms.empty()) throw ConfigInvalid("at least one algorithm is required");
  std::set<Algorithm> seen(algorithms.begin(), algorithms.end());
  if (seen.size() != algorithms.size()) throw ConfigInvalid("algorithms must be distinct");
  if (seen.count(Algorithm::Exhaustive) && combination_count(n_cb, n_rf) > kExhaustiveLimit)
    throw TooLarge("exhaustive search is enabled but C(n_cb, n_rf) exceeds the limit");
}

SimConfig paper_profile() { return SimConfig{}; }

SimConfig desk_profile() {
  SimConfig c;
  c.channel.n_bs = 16;
  c.channel.n_ms = 8;
  c.channel.k_subcarriers = 16;
  c.channel.cp_length = 4;  // same D/K ratio as the full-size link
  c.n_rf = 2;
  c.n_s = 2;
  c.n_cb = 16;
  c.algorithms = {Algorithm::Exhaustive, Algorithm::DGHP, Algorithm::GSHP, Algorithm::ApproxGSHP,
                  Algorithm::SvdBound};
  return c;
}

namespace {

using nlohmann::json;

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigInvalid(std::string(where) + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigInvalid(std::string("unknown key in ") + where + ": " + key);
  }
}

}  // namespace

SimConfig config_from_json(const json& j, SimConfig base) {
  try {
    check_keys(j,
               {"channel", "n_rf", "n_s", "n_cb", "snr_db", "trials", "seed", "algorithms",
                "fast_eig_path"},
               "config");
    if (j.contains("channel")) {
      const json& c = j.at("channel");
      check_keys(c,
                 {"n_bs", "n_ms", "k_subcarriers", "cp_length", "n_clusters", "rays_per_cluster",
                  "angle_spread_deg", "sample_period"},
                 "channel");
      take(c, "n_bs", base.channel.n_bs);
      take(c, "n_ms", base.channel.n_ms);
      take(c, "k_subcarriers", base.channel.k_subcarriers);
      take(c, "cp_length", base.channel.cp_length);
      take(c, "n_clusters", base.channel.n_clusters);
      take(c, "rays_per_cluster", base.channel.rays_per_cluster);
      take(c, "angle_spread_deg", base.channel.angle_spread_deg);
      take(c, "sample_period", base.channel.sample_period);
    }
    take(j, "n_rf", base.n_rf);
    take(j, "n_s", base.n_s);
    take(j, "n_cb", base.n_cb);
    take(j, "snr_db", base.snr_db);
    take(j, "trials", base.trials);
    take(j, "seed", base.seed);
    take(j, "fast_eig_path", base.fast_eig_path);
    if (j.contains("algorithms")) {
      base.algorithms.clear();
      for (const auto& tag : j.at("algorithms")) {
        const auto a = parse_algorithm(tag.get<std::string>());
        if (!a) throw ConfigInvalid("unknown algorithm: " + tag.get<std::string>());
        base.algorithms.push_back(*a);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("malformed config: ") + e.what());
  }
  return base;
}

json config_to_json(const SimConfig& c) {
  json algorithms = json::array();
  for (auto a : c.algorithms) algorithms.push_back(std::string(to_string(a)));
  return {{"channel",
           {{"n_bs", c.channel.n_bs},
            {"n_ms", c.channel.n_ms},
            {"k_subcarriers", c.channel.k_subcarriers},
            {"cp_length", c.channel.cp_length},
            {"n_clusters", c.channel.n_clusters},
            {"rays_per_cluster", c.channel.rays_per_cluster},
            {"angle_spread_deg", c.channel.angle_spread_deg},
            {"sample_period", c.channel.sample_period}}},
          {"n_rf", c.n_rf},
          {"n_s", c.n_s},
          {"n_cb", c.n_cb},
          {"snr_db", c.snr_db},
          {"trials", c.trials},
          {"seed", c.seed},
          {"algorithms", algorithms},
          {"fast_eig_path", c.fast_eig_path}};
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j, std::move(base));
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<ResultRow> run_trial(const SimConfig& config, const Codebook& codebook, int trial,
                                 bool record_timing) {
  using Clock = std::chrono::steady_clock;
  auto micros = [&](Clock::time_point since) -> std::int64_t {
    if (!record_timing) return 0;
    return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - since).count();
  };

  const ChannelRealization channel =
      generate_channel(config.channel, derive_trial_seed(config.seed, trial));
  const LinkCache cache(channel, &codebook);
  const GreedyOptions greedy{config.fast_eig_path};

  // The approximate algorithm's RF choice does not depend on SNR.
  std::optional<std::vector<int>> approx_selection;
  std::int64_t approx_select_us = 0;

  std::vector<ResultRow> rows;
  rows.reserve(config.snr_db.size() * config.algorithms.size());
  for (double snr : config.snr_db) {
    const double rho = std::pow(10.0, snr / 10.0);
    for (Algorithm a : config.algorithms) {
      const auto start = Clock::now();
      double rate = 0.0;
      std::int64_t carried = 0;  // reused approx selection time
      switch (a) {
        case Algorithm::Exhaustive:
          rate = exhaustive_hp(cache, config.n_rf, rho, config.n_s).rate;
          break;
        case Algorithm::DGHP:
          rate = dg_hp(cache, config.n_rf, rho, config.n_s).rate;
          break;
        case Algorithm::GSHP:
          rate = gs_hp(cache, config.n_rf, rho, config.n_s, greedy).rate;
          break;
        case Algorithm::ApproxGSHP:
          if (approx_selection) {
            carried = approx_select_us;
          } else {
            approx_selection = approx_gs_hp_select(cache, config.n_rf, config.n_s);
            approx_select_us = micros(start);
          }
          rate = finish_with_optimal_baseband(Algorithm::ApproxGSHP, cache, *approx_selection,
                                              rho, config.n_s)
                     .rate;
          break;
        case Algorithm::SvdBound:
          rate = svd_bound(cache, rho, config.n_s).rate;
          break;
      }
      rows.push_back({snr, a, trial, rate, micros(start) + carried});
    }
  }
  return rows;
}

}  // namespace

std::uint64_t derive_trial_seed(std::uint64_t seed, int trial) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial)));
}

unsigned resolve_threads(unsigned requested, int trials) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HYBRID_PRECODE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(std::max(trials, 1))));
}

std::vector<ResultRow> run_experiment(const SimConfig& config, const RunOptions& options) {
  config.validate();
  const Codebook codebook = beamsteering_codebook(config.channel.n_bs, config.n_cb);
  const unsigned workers = resolve_threads(options.threads, config.trials);

  std::vector<std::vector<ResultRow>> per_trial(config.trials);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= config.trials) return;
      try {
        per_trial[t] = run_trial(config, codebook, t, options.record_timing);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(config.trials);
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRow> rows;
  for (auto& block : per_trial) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

}  // namespace hprec
