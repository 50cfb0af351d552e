#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "itlab/decoder.hpp"
#include "itlab/model.hpp"

namespace itlab {

struct SweepPoint {
  int m = 1;
  int r = 1;
  std::int64_t q = 2;
  Semiring semiring = Semiring::IntegerProduct;
};

/// One experiment description. Exactly one of n_grid / alpha_grid is set;
/// an alpha entry maps to n = ceil(alpha * m * ln m) clamped to [0, m^2],
/// so the same grid adapts across points with different m.
struct SweepConfig {
  std::vector<SweepPoint> points;
  std::vector<int> n_grid;
  std::vector<double> alpha_grid;
  std::uint64_t trials = 200;
  std::uint64_t master_seed = 0;
  ErrorRateMode mode = ErrorRateMode::MonteCarlo;
  std::uint64_t enum_budget = kDefaultEnumBudget;
  std::uint64_t location_budget = kDefaultLocationBudget;
  /// Off by default: rows then carry runtime_ms = 0 and repeat runs of the
  /// same config are byte-identical.
  bool record_runtime = false;
  std::string csv_name = "sweep.csv";
  std::string svg_name = "sweep.svg";

  void validate() const;
};

/// Parses the JSON schema documented in the README. Unknown keys are
/// rejected.
SweepConfig sweep_config_from_json(const std::string& text);

struct ResultRow {
  int m = 1;
  int r = 1;
  std::int64_t q = 2;
  Semiring semiring = Semiring::IntegerProduct;
  int n = 0;
  /// NaN when n was configured explicitly; emitted as a blank CSV field.
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double pe_hat = 0;
  double ci95_lo = 0;
  double ci95_hi = 0;
  double coverage_fail_hat = 0;
  std::uint64_t seed = 0;
  std::string mode;  // "exact" | "mc" | "skipped"
  std::uint64_t runtime_ms = 0;
};

inline constexpr const char* kResultCsvHeader =
    "m,r,q,semiring,n,alpha,trials,failures,pe_hat,ci95_lo,ci95_hi,"
    "coverage_fail_hat,seed,mode,runtime_ms";

/// One row per (point, grid entry), points in configuration order, grid
/// ascending in n. Rows whose n exceeds m^2 or whose state counts exceed
/// a budget are emitted with mode "skipped", never dropped. Within one
/// point all Monte Carlo trials reuse nested location prefixes, so pe_hat
/// is nonincreasing in n row by row, and output is independent of thread
/// count.
std::vector<ResultRow> run_sweep(const SweepConfig& config);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

/// Self-contained line chart, one series per distinct (m, r, q, semiring).
/// Skipped rows and NaN fields are left out. log_y clamps zero values to
/// a tenth of the smallest positive y.
std::string svg_chart(const std::vector<ResultRow>& rows, const std::string& x_field,
                      const std::string& y_field, bool log_y = false);
void emit_svg_curve(const std::vector<ResultRow>& rows, const std::string& x_field,
                    const std::string& y_field, const std::string& path, bool log_y = false);

struct ThresholdEntry {
  SweepPoint point;
  int n_star = 0;
  double ref_linear = 0;  // c_linear * m
  double ref_mlogm = 0;   // c_mlogm * m * ln m
};

/// Smallest n with pe_hat <= target for each (m, r, q, semiring) group,
/// with c*m and c*m*ln m reference curves fitted through the first
/// group's crossing for visual comparison. Throws NoCrossing when some
/// group never reaches the target.
struct ThresholdTable {
  std::vector<ThresholdEntry> entries;
  double c_linear = 0;
  double c_mlogm = 0;
};

ThresholdTable threshold_estimate(const std::vector<ResultRow>& rows, double target_pe);

/// Fraction of the C(m^2, n) location subsets in which some row or column
/// has fewer than r observed entries. Exact enumeration.
double exact_coverage_failure(int m, int r, int n, std::uint64_t location_budget);

}  // namespace itlab
