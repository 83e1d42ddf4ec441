#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hprec/bench.hpp"
#include "hprec/errors.hpp"

using namespace hprec;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hprec_bench_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

SimConfig tiny_config() {
  SimConfig c = desk_profile();
  c.channel.k_subcarriers = 8;
  c.channel.cp_length = 2;
  c.trials = 2;
  c.snr_db = {-5.0, 0.0, 5.0};
  c.algorithms = {Algorithm::DGHP, Algorithm::ApproxGSHP};
  return c;
}

}  // namespace

TEST_CASE("paper profile snapshot") {
  const SimConfig c = paper_profile();
  CHECK(c.channel.n_clusters == 6);
  CHECK(c.channel.rays_per_cluster == 5);
  CHECK(c.channel.angle_spread_deg == 10.0);
  CHECK(c.channel.k_subcarriers == 512);
  CHECK(c.channel.cp_length == 128);
  CHECK(c.n_cb == 64);
  CHECK(c.channel.n_bs == 32);
  CHECK(c.channel.n_ms == 16);
  CHECK(c.n_s == 3);
  CHECK(c.n_rf == 3);
  CHECK(c.trials == 100);
  CHECK(c.snr_db == std::vector<double>{-10, -5, 0, 5, 10});
  CHECK(std::find(c.algorithms.begin(), c.algorithms.end(), Algorithm::Exhaustive) ==
        c.algorithms.end());
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("desk profile includes exhaustive search") {
  const SimConfig c = desk_profile();
  CHECK(c.channel.k_subcarriers == 16);
  CHECK(c.n_cb == 16);
  CHECK(c.channel.n_bs == 16);
  CHECK(c.channel.n_ms == 8);
  CHECK(c.n_rf == 2);
  CHECK(c.algorithms.front() == Algorithm::Exhaustive);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config validation") {
  SimConfig c = desk_profile();
  c.n_s = 3;
  CHECK_THROWS_AS(c.validate(), ConfigInvalid);
  c = desk_profile();
  c.n_rf = c.n_s = 9;  // more than n_ms = 8
  CHECK_THROWS_AS(c.validate(), ConfigInvalid);
  c = desk_profile();
  c.snr_db.clear();
  CHECK_THROWS_AS(c.validate(), ConfigInvalid);
  c = desk_profile();
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), ConfigInvalid);
  c = desk_profile();
  c.algorithms = {Algorithm::DGHP, Algorithm::DGHP};
  CHECK_THROWS_AS(c.validate(), ConfigInvalid);
  c = desk_profile();
  c.n_cb = 2000;  // C(2000, 2) > 1e6
  CHECK_THROWS_AS(c.validate(), TooLarge);
  c.algorithms = {Algorithm::DGHP};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config JSON round-trips and rejects junk") {
  SimConfig c = desk_profile();
  c.seed = 0xfeedfacecafebeefULL;
  c.fast_eig_path = true;
  c.snr_db = {-3.5, 7.25};
  CHECK(config_from_json(config_to_json(c), paper_profile()) == c);

  const auto partial = config_from_json(nlohmann::json::parse(R"({"trials": 7,
      "channel": {"n_bs": 24}, "algorithms": ["svd_bound", "gs_hp"]})"),
                                        paper_profile());
  CHECK(partial.trials == 7);
  CHECK(partial.channel.n_bs == 24);
  CHECK(partial.channel.n_ms == 16);
  CHECK(partial.algorithms == std::vector<Algorithm>{Algorithm::SvdBound, Algorithm::GSHP});

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"bogus": 1})"), c), ConfigInvalid);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"trials": "ten"})"), c),
                  ConfigInvalid);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"algorithms": ["omp"]})"), c),
                  ConfigInvalid);

  const auto path = temp_file("config.json");
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_config(path, c), ConfigInvalid);
  std::filesystem::remove(path);
}

TEST_CASE("run_experiment emits one row per (trial, snr, algorithm)") {
  const SimConfig c = tiny_config();
  const auto rows = run_experiment(c, {1, false});
  REQUIRE(rows.size() == 12);
  std::size_t i = 0;
  for (int t = 0; t < 2; ++t)
    for (double snr : c.snr_db)
      for (Algorithm a : c.algorithms) {
        CHECK(rows[i].trial == t);
        CHECK(rows[i].snr_db == snr);
        CHECK(rows[i].algorithm == a);
        CHECK(std::isfinite(rows[i].rate));
        CHECK(rows[i].rate >= 0.0);
        CHECK(rows[i].wall_time_us == 0);
        ++i;
      }
}

TEST_CASE("run_experiment is reproducible and thread-count independent") {
  SimConfig c = tiny_config();
  c.trials = 5;
  const auto serial = run_experiment(c, {1, false});
  CHECK(serial == run_experiment(c, {1, false}));
  CHECK(serial == run_experiment(c, {3, false}));

  const auto a = temp_file("a.csv"), b = temp_file("b.csv");
  write_csv(serial, a);
  write_csv(run_experiment(c, {4, false}), b);
  CHECK(slurp(a) == slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);

  c.seed += 1;
  CHECK_FALSE(serial == run_experiment(c, {1, false}));
}

TEST_CASE("timing is recorded when requested") {
  SimConfig c = tiny_config();
  c.trials = 1;
  std::int64_t total = 0;
  for (const auto& r : run_experiment(c, {1, true})) {
    CHECK(r.wall_time_us >= 0);
    total += r.wall_time_us;
  }
  CHECK(total > 0);
}

TEST_CASE("stored rows respect the rate ordering chain") {
  SimConfig c = desk_profile();
  c.trials = 4;
  const auto rows = run_experiment(c, {1, false});
  auto rate = [&](int t, double snr, Algorithm a) {
    for (const auto& r : rows)
      if (r.trial == t && r.snr_db == snr && r.algorithm == a) return r.rate;
    FAIL("missing row");
    return 0.0;
  };
  for (int t = 0; t < c.trials; ++t) {
    for (double snr : c.snr_db) {
      const double svd = rate(t, snr, Algorithm::SvdBound);
      const double ex = rate(t, snr, Algorithm::Exhaustive);
      const double dg = rate(t, snr, Algorithm::DGHP);
      CHECK(svd >= ex - 1e-9);
      CHECK(ex >= dg - 1e-9);
      CHECK(std::abs(dg - rate(t, snr, Algorithm::GSHP)) < 1e-9 * dg);
      CHECK(ex >= rate(t, snr, Algorithm::ApproxGSHP) - 1e-9);
    }
  }
}

TEST_CASE("aggregate statistics") {
  SUBCASE("single row") {
    const std::vector<ResultRow> rows{{0.0, Algorithm::DGHP, 0, 4.5, 0}};
    const auto agg = aggregate(rows);
    REQUIRE(agg.size() == 1);
    CHECK(agg[0].mean_rate == 4.5);
    CHECK(agg[0].std_rate == 0.0);
    CHECK(agg[0].n == 1);
  }
  SUBCASE("equal rates") {
    const std::vector<ResultRow> rows{{0.0, Algorithm::DGHP, 0, 2.0, 0},
                                      {0.0, Algorithm::DGHP, 1, 2.0, 0}};
    CHECK(aggregate(rows)[0].std_rate == 0.0);
  }
  SUBCASE("four-row fixture") {
    // rates 1, 2, 3, 6: mean 3, squared deviations 4 + 1 + 0 + 9 = 14, sample var 14/3
    const std::vector<ResultRow> rows{{5.0, Algorithm::GSHP, 0, 1.0, 0},
                                      {5.0, Algorithm::GSHP, 1, 2.0, 0},
                                      {-5.0, Algorithm::GSHP, 0, 9.0, 0},
                                      {5.0, Algorithm::GSHP, 2, 3.0, 0},
                                      {5.0, Algorithm::GSHP, 3, 6.0, 0}};
    const auto agg = aggregate(rows);
    REQUIRE(agg.size() == 2);
    CHECK(agg[0].snr_db == -5.0);
    CHECK(agg[1].snr_db == 5.0);
    CHECK(agg[1].mean_rate == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(agg[1].std_rate == doctest::Approx(std::sqrt(14.0 / 3.0)).epsilon(1e-15));
    CHECK(agg[1].n == 4);
  }
  CHECK_THROWS_AS(aggregate({}), EmptyInput);
}

TEST_CASE("CSV writers use the fixed headers and round-trip") {
  const std::vector<ResultRow> rows{{-10.0, Algorithm::SvdBound, 0, 1.0 / 3.0, 17},
                                    {2.5, Algorithm::ApproxGSHP, 12, 12.345678901234567, 0},
                                    {10.0, Algorithm::Exhaustive, 3, 0.0, 99}};
  const auto raw = temp_file("raw.csv");
  write_csv(rows, raw);
  CHECK(slurp(raw).rfind("snr_db,algorithm,trial,rate_bps_hz,wall_time_us\n", 0) == 0);
  CHECK(read_result_csv(raw) == rows);

  const auto agg_rows = aggregate(rows);
  const auto agg = temp_file("agg.csv");
  write_csv(agg_rows, agg);
  CHECK(slurp(agg).rfind("snr_db,algorithm,mean_rate,std_rate,n\n", 0) == 0);
  CHECK(read_aggregate_csv(agg) == agg_rows);

  write_csv(std::span<const AggregateRow>{}, agg);
  CHECK(slurp(agg) == "snr_db,algorithm,mean_rate,std_rate,n\n");

  std::ofstream(raw) << "wrong,header\n";
  CHECK_THROWS_AS(read_result_csv(raw), IoError);
  CHECK_THROWS_AS(write_csv(rows, "/nonexistent-dir/x.csv"), IoError);
  std::filesystem::remove(raw);
  std::filesystem::remove(agg);
}

TEST_CASE("SVG has one polyline per algorithm with matching legend labels") {
  std::vector<ResultRow> rows;
  for (double snr : {-10.0, 0.0, 10.0}) {
    rows.push_back({snr, Algorithm::DGHP, 0, 5 + snr / 5, 0});
    rows.push_back({snr, Algorithm::ApproxGSHP, 0, 4 + snr / 5, 0});
    rows.push_back({snr, Algorithm::SvdBound, 0, 7 + snr / 5, 0});
  }
  const auto path = temp_file("plot.svg");
  emit_svg(aggregate(rows), path);
  const std::string svg = slurp(path);
  std::size_t polylines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos;
       pos = svg.find("<polyline", pos + 1))
    ++polylines;
  CHECK(polylines == 3);
  for (const char* tag : {">dg_hp<", ">approx_gs_hp<", ">svd_bound<"})
    CHECK(svg.find(tag) != std::string::npos);
  CHECK(svg.rfind("<svg", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("trial seeds are stable and distinct") {
  CHECK(derive_trial_seed(1, 0) == derive_trial_seed(1, 0));
  CHECK(derive_trial_seed(1, 0) != derive_trial_seed(1, 1));
  CHECK(derive_trial_seed(1, 0) != derive_trial_seed(2, 0));
}

TEST_CASE("worker count honors the environment cap") {
  ::setenv("HYBRID_PRECODE_THREADS", "2", 1);
  CHECK(resolve_threads(8, 100) == 2);
  CHECK(resolve_threads(8, 1) == 1);
  ::setenv("HYBRID_PRECODE_THREADS", "junk", 1);
  CHECK(resolve_threads(8, 100) == 8);
  ::unsetenv("HYBRID_PRECODE_THREADS");
  CHECK(resolve_threads(3, 100) == 3);
  CHECK(resolve_threads(0, 100) >= 1);
}
