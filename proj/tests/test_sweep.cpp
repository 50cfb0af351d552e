#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "itlab/io.hpp"
#include "itlab/sampling.hpp"
#include "itlab/sweep.hpp"

using namespace itlab;

namespace {

const char* kValidConfig = R"({
  "points": [{"m": 3, "r": 1, "q": 2}, {"m": 4, "r": 1, "q": 3, "semiring": "modq"}],
  "n_grid": [0, 3, 5, 9],
  "trials": 50,
  "master_seed": 11,
  "mode": "mc",
  "csv": "out.csv",
  "svg": "out.svg"
})";

std::string patched(const std::string& needle, const std::string& replacement) {
  std::string text = kValidConfig;
  const std::size_t pos = text.find(needle);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, needle.size(), replacement);
  return text;
}

}  // namespace

TEST_CASE("config parsing") {
  SweepConfig config = sweep_config_from_json(kValidConfig);
  CHECK(config.points.size() == 2);
  CHECK(config.points[0].m == 3);
  CHECK(config.points[1].semiring == Semiring::ModQProduct);
  CHECK(config.n_grid == std::vector<int>{0, 3, 5, 9});
  CHECK(config.alpha_grid.empty());
  CHECK(config.trials == 50);
  CHECK(config.master_seed == 11);
  CHECK(config.mode == ErrorRateMode::MonteCarlo);
  CHECK_FALSE(config.record_runtime);
  CHECK(config.csv_name == "out.csv");
  CHECK(config.svg_name == "out.svg");
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(sweep_config_from_json("not json"), ValidationError);
  CHECK_THROWS_AS(sweep_config_from_json("[]"), ValidationError);
  CHECK_THROWS_AS(sweep_config_from_json("{}"), ValidationError);

  // unknown keys never pass silently
  CHECK_THROWS_AS(sweep_config_from_json(patched("\"trials\": 50", "\"trails\": 50")),
                  ValidationError);
  CHECK_THROWS_AS(
      sweep_config_from_json(patched("{\"m\": 3, \"r\": 1, \"q\": 2}",
                                     "{\"m\": 3, \"r\": 1, \"q\": 2, \"rank\": 1}")),
      ValidationError);

  // exactly one grid
  CHECK_THROWS_AS(
      sweep_config_from_json(patched("\"n_grid\": [0, 3, 5, 9]",
                                     "\"n_grid\": [0, 3], \"alpha_grid\": [0.5]")),
      ValidationError);
  CHECK_THROWS_AS(sweep_config_from_json(patched("\"n_grid\": [0, 3, 5, 9],", "")),
                  ValidationError);

  // grids must rise strictly
  CHECK_THROWS_AS(sweep_config_from_json(patched("[0, 3, 5, 9]", "[0, 3, 3, 9]")),
                  ValidationError);
  CHECK_THROWS_AS(sweep_config_from_json(patched("[0, 3, 5, 9]", "[-1, 3]")), ValidationError);

  // model parameters are validated up front: 4 is not prime
  CHECK_THROWS_AS(
      sweep_config_from_json(patched("\"q\": 3, \"semiring\": \"modq\"",
                                     "\"q\": 4, \"semiring\": \"modq\"")),
      ValidationError);
  CHECK_THROWS_AS(sweep_config_from_json(patched("\"mode\": \"mc\"", "\"mode\": \"fast\"")),
                  ValidationError);
  CHECK_THROWS_AS(sweep_config_from_json(patched("\"trials\": 50", "\"trials\": 0")),
                  ValidationError);
  CHECK_THROWS_AS(sweep_config_from_json(patched("\"trials\": 50", "\"trials\": -3")),
                  ValidationError);
}

TEST_CASE("exact_coverage_failure small fractions") {
  // m = 2, n = 2: only the two diagonal pairs cover both lines
  CHECK(exact_coverage_failure(2, 1, 2, 1000) == doctest::Approx(4.0 / 6).epsilon(1e-15));
  // m = 3, n = 3: the 3! permutation patterns out of C(9,3) = 84
  CHECK(exact_coverage_failure(3, 1, 3, 1000) == doctest::Approx(78.0 / 84).epsilon(1e-15));
  // m = 3, n = 4: inclusion-exclusion gives 81 uncovered subsets of 126
  CHECK(exact_coverage_failure(3, 1, 4, 1000) == doctest::Approx(9.0 / 14).epsilon(1e-15));

  CHECK(exact_coverage_failure(3, 1, 9, 1000) == 0.0);
  CHECK(exact_coverage_failure(2, 0, 0, 1000) == 0.0);   // nothing required
  CHECK(exact_coverage_failure(2, 1, 0, 1000) == 1.0);   // nothing observed
  CHECK(exact_coverage_failure(2, 3, 4, 1000) == 1.0);   // r > m is unattainable

  CHECK_THROWS_AS(exact_coverage_failure(5, 1, 12, 1000), BudgetExceeded);  // C(25,12)
  CHECK_THROWS_AS(exact_coverage_failure(2, 1, 5, 1000), ValidationError);
}

TEST_CASE("exact coverage failure obeys the row-column union bound") {
  // 2m * Pr(Binomial(n, 1/m) < r) dominates the exact subset fraction
  for (int n : {3, 4, 5, 6, 7, 8}) {
    double exact = exact_coverage_failure(3, 1, n, 1000);
    double marginal = binomial_tail_below(n, 1.0 / 3, 1);
    CHECK(exact <= 6 * marginal + 1e-12);
  }
}

TEST_CASE("exact sweep equals the per-call exact results") {
  SweepConfig config;
  config.points = {{3, 1, 2, Semiring::IntegerProduct}};
  config.n_grid = {0, 3, 5, 9};
  config.mode = ErrorRateMode::ExactAverage;
  std::vector<ResultRow> rows = run_sweep(config);
  REQUIRE(rows.size() == 4);

  const ModelParams p{3, 1, 2, Semiring::IntegerProduct};
  for (const ResultRow& row : rows) {
    CHECK(row.mode == "exact");
    ErrorRateReport rep = exact_error_rate(p, row.n);
    CHECK(row.pe_hat == doctest::Approx(rep.pe).epsilon(1e-15));
    CHECK(row.trials == rep.trials);
    CHECK(row.failures == rep.failures);
    CHECK(row.ci95_lo == row.pe_hat);  // exact rows carry no sampling error
    CHECK(row.coverage_fail_hat ==
          doctest::Approx(exact_coverage_failure(3, 1, row.n, kDefaultLocationBudget))
              .epsilon(1e-15));
    CHECK(row.runtime_ms == 0);
  }
  CHECK(rows[0].pe_hat == 1.0);
  CHECK(rows[3].pe_hat == 0.0);
}

TEST_CASE("mc sweep output is deterministic and thread-count independent") {
  SweepConfig config;
  config.points = {{3, 1, 2, Semiring::IntegerProduct}, {4, 1, 2, Semiring::IntegerProduct}};
  config.alpha_grid = {0.5, 1.0, 1.5, 2.0, 2.6};
  config.trials = 150;
  config.master_seed = 9;

  const std::string first = rows_to_csv(run_sweep(config));
  const std::string second = rows_to_csv(run_sweep(config));
  CHECK(first == second);

  setenv("LOWRANK_ITLAB_THREADS", "1", 1);
  const std::string serial = rows_to_csv(run_sweep(config));
  setenv("LOWRANK_ITLAB_THREADS", "5", 1);
  const std::string five = rows_to_csv(run_sweep(config));
  unsetenv("LOWRANK_ITLAB_THREADS");
  CHECK(first == serial);
  CHECK(first == five);
}

TEST_CASE("mc sweep rows behave like a completion curve") {
  SweepConfig config;
  config.points = {{3, 1, 2, Semiring::IntegerProduct}};
  config.n_grid = {0, 2, 4, 6, 8, 9};
  config.trials = 400;
  config.master_seed = 4;
  std::vector<ResultRow> rows = run_sweep(config);
  REQUIRE(rows.size() == 6);

  double prev_pe = 1.0, prev_cov = 1.0;
  for (const ResultRow& row : rows) {
    CHECK(row.mode == "mc");
    CHECK(row.trials == 400);
    // nested prefixes make both curves monotone trial by trial, hence
    // also in aggregate
    CHECK(row.pe_hat <= prev_pe + 1e-15);
    CHECK(row.coverage_fail_hat <= prev_cov + 1e-15);
    CHECK(row.ci95_lo <= row.pe_hat);
    CHECK(row.pe_hat <= row.ci95_hi);
    prev_pe = row.pe_hat;
    prev_cov = row.coverage_fail_hat;
  }
  CHECK(rows.front().pe_hat == 1.0);  // nothing observed
  CHECK(rows.back().pe_hat == 0.0);   // everything observed
  CHECK(rows.back().coverage_fail_hat == 0.0);

  // agrees with the exact curve within Monte Carlo resolution
  const ModelParams p{3, 1, 2, Semiring::IntegerProduct};
  for (const ResultRow& row : rows) {
    const double exact = exact_error_rate(p, row.n).pe;
    CHECK(row.pe_hat == doctest::Approx(exact).epsilon(0.08));
  }
}

TEST_CASE("infeasible work is emitted as skipped rows") {
  SweepConfig config;
  config.points = {{3, 1, 2, Semiring::IntegerProduct}};
  config.n_grid = {0, 4, 12};  // 12 > 9 cells
  config.trials = 40;
  std::vector<ResultRow> rows = run_sweep(config);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].mode == "mc");
  CHECK(rows[1].mode == "mc");
  CHECK(rows[2].mode == "skipped");
  CHECK(rows[2].n == 12);
  CHECK(rows[2].trials == 0);
  CHECK(rows[2].pe_hat == 0.0);

  // an enumeration budget too small for 2^6 sources skips the whole point
  config.n_grid = {0, 4};
  config.enum_budget = 10;
  rows = run_sweep(config);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].mode == "skipped");
  CHECK(rows[1].mode == "skipped");

  // same in exact mode, via the location budget
  config = SweepConfig{};
  config.points = {{4, 1, 2, Semiring::IntegerProduct}};
  config.n_grid = {0, 8};
  config.mode = ErrorRateMode::ExactAverage;
  config.location_budget = 100;  // C(16, 8) = 12870
  rows = run_sweep(config);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].mode == "exact");
  CHECK(rows[1].mode == "skipped");
}

TEST_CASE("csv round trip") {
  SweepConfig config;
  config.points = {{2, 1, 2, Semiring::IntegerProduct}};
  config.alpha_grid = {0.8, 1.9, 4.2};
  config.trials = 30;
  config.master_seed = 2;
  std::vector<ResultRow> rows = run_sweep(config);

  const std::string text = rows_to_csv(rows);
  const std::string header_line = text.substr(0, text.find('\n'));
  CHECK(header_line ==
        "m,r,q,semiring,n,alpha,trials,failures,pe_hat,ci95_lo,ci95_hi,"
        "coverage_fail_hat,seed,mode,runtime_ms");

  std::vector<ResultRow> back = rows_from_csv(text);
  REQUIRE(back.size() == rows.size());
  CHECK(rows_to_csv(back) == text);  // serialization is a fixed point
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].n == rows[i].n);
    CHECK(back[i].mode == rows[i].mode);
    CHECK(back[i].failures == rows[i].failures);
  }

  // an explicit n grid leaves alpha blank and NaN survives the trip
  config.alpha_grid.clear();
  config.n_grid = {0, 3};
  rows = run_sweep(config);
  const std::string blank = rows_to_csv(rows);
  CHECK(blank.find(",,") != std::string::npos);
  back = rows_from_csv(blank);
  CHECK(std::isnan(back[0].alpha));

  CHECK_THROWS_AS(rows_from_csv(""), ValidationError);
  CHECK_THROWS_AS(rows_from_csv("nope\n"), ValidationError);
  CHECK_THROWS_AS(rows_from_csv(std::string(kResultCsvHeader) + "\n1,2\n"), ValidationError);
  CHECK_THROWS_AS(rows_from_csv(std::string(kResultCsvHeader) +
                                "\nx,1,2,integer,0,,1,1,1,1,1,1,0,mc,0\n"),
                  ValidationError);
}

TEST_CASE("exact sweep golden output") {
  // frozen after the values were verified against independent
  // enumeration; any byte change here is a behavior change
  SweepConfig config;
  config.points = {{3, 1, 2, Semiring::IntegerProduct}};
  config.n_grid = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  config.mode = ErrorRateMode::ExactAverage;
  const char* golden =
      "m,r,q,semiring,n,alpha,trials,failures,pe_hat,ci95_lo,ci95_hi,"
      "coverage_fail_hat,seed,mode,runtime_ms\n"
      "3,1,2,integer,0,,64,64,1,1,1,1,0,exact,0\n"
      "3,1,2,integer,1,,576,576,1,1,1,1,0,exact,0\n"
      "3,1,2,integer,2,,2304,2304,1,1,1,1,0,exact,0\n"
      "3,1,2,integer,3,,5376,5370,0.9988839286,0.9988839286,0.9988839286,"
      "0.9285714286,0,exact,0\n"
      "3,1,2,integer,4,,8064,7839,0.9720982143,0.9720982143,0.9720982143,"
      "0.6428571429,0,exact,0\n"
      "3,1,2,integer,5,,8064,7227,0.8962053571,0.8962053571,0.8962053571,"
      "0.2857142857,0,exact,0\n"
      "3,1,2,integer,6,,5376,4164,0.7745535714,0.7745535714,0.7745535714,"
      "0.07142857143,0,exact,0\n"
      "3,1,2,integer,7,,2304,1422,0.6171875,0.6171875,0.6171875,0,0,exact,0\n"
      "3,1,2,integer,8,,576,252,0.4375,0.4375,0.4375,0,0,exact,0\n"
      "3,1,2,integer,9,,64,0,0,0,0,0,0,exact,0\n";
  CHECK(rows_to_csv(run_sweep(config)) == golden);
}

TEST_CASE("degenerate emissions") {
  CHECK(rows_to_csv({}) == std::string(kResultCsvHeader) + "\n");

  ResultRow lone;
  lone.m = 2;
  lone.r = 1;
  lone.q = 2;
  lone.n = 3;
  lone.pe_hat = 0.5;
  lone.mode = "mc";
  const std::string svg = svg_chart({lone}, "n", "pe_hat");
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("<polyline") == std::string::npos);  // one point, no line
}

TEST_CASE("csv files round trip through disk") {
  SweepConfig config;
  config.points = {{2, 1, 2, Semiring::IntegerProduct}};
  config.n_grid = {0, 2, 4};
  config.mode = ErrorRateMode::ExactAverage;
  std::vector<ResultRow> rows = run_sweep(config);

  const std::string path = "/tmp/itlab_test_rows.csv";
  emit_csv(rows, path);
  CHECK(rows_to_csv(rows_from_csv(read_text_file(path))) == rows_to_csv(rows));
  std::remove(path.c_str());

  CHECK_THROWS_AS(read_text_file("/tmp/itlab_missing_file.csv"), IoError);
}

TEST_CASE("svg chart structure") {
  SweepConfig config;
  config.points = {{2, 1, 2, Semiring::IntegerProduct}, {3, 1, 2, Semiring::IntegerProduct}};
  config.n_grid = {0, 2, 4};
  config.trials = 50;
  config.master_seed = 3;
  std::vector<ResultRow> rows = run_sweep(config);

  const std::string svg = svg_chart(rows, "n", "pe_hat");
  CHECK(svg.rfind("<svg ", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("m=2 r=1 q=2 integer") != std::string::npos);
  CHECK(svg.find("m=3 r=1 q=2 integer") != std::string::npos);
  CHECK(svg.find(">n</text>") != std::string::npos);
  CHECK(svg.find(">pe_hat</text>") != std::string::npos);
  CHECK(svg == svg_chart(rows, "n", "pe_hat"));  // deterministic

  // log scale tolerates zero values by clamping them to a decade below
  // the smallest positive one
  const std::string logsvg = svg_chart(rows, "n", "pe_hat", true);
  CHECK(logsvg.find("<circle") != std::string::npos);

  CHECK_THROWS_AS(svg_chart(rows, "n", "bogus_field"), ValidationError);
  CHECK_THROWS_AS(svg_chart({}, "n", "pe_hat"), ValidationError);

  std::vector<ResultRow> skipped_only(1);
  skipped_only[0].mode = "skipped";
  CHECK_THROWS_AS(svg_chart(skipped_only, "n", "pe_hat"), ValidationError);
}

TEST_CASE("threshold estimation over synthetic curves") {
  auto mk = [](int m, int n, double pe, const char* mode) {
    ResultRow row;
    row.m = m;
    row.r = 1;
    row.q = 2;
    row.n = n;
    row.pe_hat = pe;
    row.mode = mode;
    return row;
  };
  std::vector<ResultRow> rows = {
      mk(4, 2, 1.0, "mc"),  mk(4, 4, 0.5, "mc"),  mk(4, 6, 0.08, "mc"), mk(4, 8, 0.0, "mc"),
      mk(6, 4, 0.9, "mc"),  mk(6, 8, 0.4, "mc"),  mk(6, 10, 0.1, "mc"), mk(6, 12, 0.01, "mc"),
      // a decoy that would cross immediately if skipped rows were counted
      mk(6, 1, 0.0, "skipped"),
  };

  ThresholdTable table = threshold_estimate(rows, 0.1);
  REQUIRE(table.entries.size() == 2);
  CHECK(table.entries[0].point.m == 4);
  CHECK(table.entries[0].n_star == 6);
  CHECK(table.entries[1].n_star == 10);  // pe = 0.1 itself counts

  CHECK(table.c_linear == doctest::Approx(6.0 / 4).epsilon(1e-12));
  CHECK(table.entries[1].ref_linear == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(table.c_mlogm == doctest::Approx(6.0 / (4 * std::log(4.0))).epsilon(1e-12));
  CHECK(table.entries[1].ref_mlogm ==
        doctest::Approx(table.c_mlogm * 6 * std::log(6.0)).epsilon(1e-12));

  CHECK_THROWS_AS(threshold_estimate(rows, 1e-9), NoCrossing);  // m=6 never hits 0
  CHECK_THROWS_AS(threshold_estimate(rows, -0.5), ValidationError);
  CHECK_THROWS_AS(threshold_estimate({mk(6, 1, 0.0, "skipped")}, 0.5), ValidationError);
}
