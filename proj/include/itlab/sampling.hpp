#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "itlab/errors.hpp"
#include "itlab/rng.hpp"

namespace itlab {

/// An ordered sequence of distinct observed cells of an m x m matrix.
struct LocationSequence {
  int m = 0;
  std::vector<std::pair<int, int>> locations;  // (row, col), 0-based

  std::size_t size() const { return locations.size(); }
  /// Distinctness, index range, and size <= m^2. Throws ValidationError.
  void validate() const;
};

struct CoverageStats {
  std::vector<int> row_counts;
  std::vector<int> col_counts;
  int min_row = 0;
  int min_col = 0;
  bool in_g = false;  // every row and column has at least r observed entries
};

/// Diagnostics around the balls-in-bins view of row/column coverage.
/// Bound fields may exceed 1; they are clamped only for display.
struct BinsReport {
  int m = 0;
  int r = 0;
  double alpha = 0;
  int n_used = 0;
  double exact_marginal_tail = 0;   // Pr(Binomial(n_used, 1/m) < r)
  double chernoff_bound = 0;        // exp(-(mu/2)(1 - r/mu)^2), mu = alpha ln m
  double chernoff_paper_simple = 0; // m^{-alpha/2}
  double paper_bound = 0;           // 2m * m^{-alpha/2}
  double mc_estimate = 0;           // without-replacement coverage failure rate
  double mc_ci95_lo = 0;
  double mc_ci95_hi = 0;
  std::uint64_t trials = 0;
};

struct ChernoffBound {
  double value = 0;
  double paper_simple = 0;
};

/// A uniformly random n-subset of the m^2 cells, in random order.
///
/// Built as the first n steps of a seeded Fisher-Yates shuffle, so for a
/// fixed seed the n-sample is a prefix of every longer sample (the
/// prefix-of-permutation construction the decoder's monotonicity tests
/// rely on).
LocationSequence sample_locations(int m, int n, const SeedSpec& seed);

CoverageStats coverage_check(const LocationSequence& locs, int r);

/// Exact Pr(Binomial(n, p) < r) by stable log-space summation.
double binomial_tail_below(std::int64_t n, double p, std::int64_t r);

/// Lower-tail multiplicative Chernoff bound exp(-(mu/2)(1 - r/mu)^2).
/// Valid for r <= mu.
double chernoff_lower_tail(double mu, double r);

/// Chernoff bound with mu = alpha * ln(m), plus the simplified form m^{-alpha/2}
/// reached by dropping the (1 - r/mu)^2 factor. Throws PreconditionFailed
/// when r > alpha * ln(m).
ChernoffBound chernoff_bin_bound(int m, int r, double alpha);

/// ceil(alpha * m * ln m), clamped to [0, m^2].
int coverage_sample_count(int m, double alpha);

/// Monte Carlo coverage failure rate of the true without-replacement
/// sampling process at n = ceil(alpha m ln m), with the exact binomial
/// marginal and both Chernoff-side bounds attached for reference.
BinsReport coverage_failure_report(int m, int r, double alpha, std::uint64_t trials,
                                   const SeedSpec& seed);

}  // namespace itlab
