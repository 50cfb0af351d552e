#include "itlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "itlab/parallel.hpp"

namespace itlab {

void LocationSequence::validate() const {
  if (m < 1) throw ValidationError("location sequence: m must be >= 1");
  const std::uint64_t cells = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m);
  if (locations.size() > cells) {
    throw ValidationError("location sequence longer than m^2");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& [row, col] : locations) {
    if (row < 0 || row >= m || col < 0 || col >= m) {
      throw ValidationError("location (" + std::to_string(row) + "," + std::to_string(col) +
                            ") outside the " + std::to_string(m) + "x" + std::to_string(m) +
                            " grid");
    }
    if (!seen.insert({row, col}).second) {
      throw ValidationError("duplicate location (" + std::to_string(row) + "," +
                            std::to_string(col) + ")");
    }
  }
}

LocationSequence sample_locations(int m, int n, const SeedSpec& seed) {
  if (m < 1) throw ValidationError("m must be >= 1");
  const std::int64_t cells = static_cast<std::int64_t>(m) * m;
  if (n < 0 || n > cells) {
    throw ValidationError("sample count n=" + std::to_string(n) + " outside [0, m^2=" +
                          std::to_string(cells) + "]");
  }
  std::vector<std::int32_t> ids(static_cast<std::size_t>(cells));
  std::iota(ids.begin(), ids.end(), 0);
  Rng rng(seed);
  LocationSequence out;
  out.m = m;
  out.locations.reserve(static_cast<std::size_t>(n));
  // Partial Fisher-Yates: position k is final after step k, so the first n
  // draws are a prefix of any longer sample from the same seed.
  for (int k = 0; k < n; ++k) {
    const auto j = k + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cells - k)));
    std::swap(ids[static_cast<std::size_t>(k)], ids[static_cast<std::size_t>(j)]);
    const std::int32_t id = ids[static_cast<std::size_t>(k)];
    out.locations.emplace_back(id / m, id % m);
  }
  return out;
}

CoverageStats coverage_check(const LocationSequence& locs, int r) {
  locs.validate();
  if (r < 0) throw ValidationError("coverage threshold r must be >= 0");
  CoverageStats stats;
  stats.row_counts.assign(static_cast<std::size_t>(locs.m), 0);
  stats.col_counts.assign(static_cast<std::size_t>(locs.m), 0);
  for (const auto& [row, col] : locs.locations) {
    ++stats.row_counts[static_cast<std::size_t>(row)];
    ++stats.col_counts[static_cast<std::size_t>(col)];
  }
  stats.min_row = *std::min_element(stats.row_counts.begin(), stats.row_counts.end());
  stats.min_col = *std::min_element(stats.col_counts.begin(), stats.col_counts.end());
  stats.in_g = stats.min_row >= r && stats.min_col >= r;
  return stats;
}

double binomial_tail_below(std::int64_t n, double p, std::int64_t r) {
  if (n < 0) throw ValidationError("binomial_tail_below: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binomial_tail_below: p outside [0,1]");
  if (r < 0) throw ValidationError("binomial_tail_below: r must be >= 0");
  if (r == 0) return 0.0;
  if (r > n) return 1.0;
  if (p == 0.0) return 1.0;  // X = 0 surely and r >= 1
  if (p == 1.0) return 0.0;  // X = n surely and r <= n
  const double logp = std::log(p);
  const double log1mp = std::log1p(-p);
  long double sum = 0.0L;
  // Ascending k adds the smaller terms first when r is below the mean.
  for (std::int64_t k = 0; k < r; ++k) {
    const double lchoose = std::lgamma(static_cast<double>(n) + 1.0) -
                           std::lgamma(static_cast<double>(k) + 1.0) -
                           std::lgamma(static_cast<double>(n - k) + 1.0);
    sum += std::exp(lchoose + static_cast<double>(k) * logp +
                    static_cast<double>(n - k) * log1mp);
  }
  return std::min(1.0, static_cast<double>(sum));
}

double chernoff_lower_tail(double mu, double r) {
  if (!(mu > 0.0)) throw ValidationError("chernoff_lower_tail: mu must be > 0");
  if (r < 0.0 || r > mu) {
    throw PreconditionFailed("chernoff_lower_tail: requires 0 <= r <= mu");
  }
  const double slack = 1.0 - r / mu;
  return std::exp(-(mu / 2.0) * slack * slack);
}

ChernoffBound chernoff_bin_bound(int m, int r, double alpha) {
  if (m < 1) throw ValidationError("chernoff_bin_bound: m must be >= 1");
  if (r < 0) throw ValidationError("chernoff_bin_bound: r must be >= 0");
  if (!(alpha > 0.0)) throw ValidationError("chernoff_bin_bound: alpha must be > 0");
  const double mu = alpha * std::log(static_cast<double>(m));
  if (static_cast<double>(r) > mu) {
    throw PreconditionFailed("chernoff_bin_bound: r=" + std::to_string(r) +
                             " exceeds alpha*ln(m)=" + std::to_string(mu) +
                             "; bound not applicable");
  }
  ChernoffBound out;
  out.value = chernoff_lower_tail(mu, static_cast<double>(r));
  out.paper_simple = std::pow(static_cast<double>(m), -alpha / 2.0);
  return out;
}

int coverage_sample_count(int m, double alpha) {
  if (m < 1) throw ValidationError("m must be >= 1");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  const double raw = std::ceil(alpha * static_cast<double>(m) * std::log(static_cast<double>(m)));
  const double cells = static_cast<double>(m) * static_cast<double>(m);
  return static_cast<int>(std::min(std::max(raw, 0.0), cells));
}

BinsReport coverage_failure_report(int m, int r, double alpha, std::uint64_t trials,
                                   const SeedSpec& seed) {
  if (trials < 1) throw ValidationError("coverage_failure_report: trials must be >= 1");
  BinsReport report;
  report.m = m;
  report.r = r;
  report.alpha = alpha;
  report.n_used = coverage_sample_count(m, alpha);
  report.trials = trials;
  report.exact_marginal_tail = binomial_tail_below(report.n_used, 1.0 / m, r);
  const ChernoffBound cb = chernoff_bin_bound(m, r, alpha);
  report.chernoff_bound = cb.value;
  report.chernoff_paper_simple = cb.paper_simple;
  report.paper_bound = 2.0 * m * cb.paper_simple;

  const std::uint64_t base = derive_seed(seed.master_seed, seed.stream_index);
  std::vector<std::uint8_t> failed(trials, 0);
  parallel_for(trials, [&](std::uint64_t t) {
    const LocationSequence locs =
        sample_locations(m, report.n_used, SeedSpec{base, t});
    const CoverageStats stats = coverage_check(locs, r);
    failed[t] = stats.in_g ? 0 : 1;
  });
  std::uint64_t failures = 0;
  for (std::uint8_t f : failed) failures += f;
  const double phat = static_cast<double>(failures) / static_cast<double>(trials);
  const double sigma = std::sqrt(phat * (1.0 - phat) / static_cast<double>(trials));
  report.mc_estimate = phat;
  report.mc_ci95_lo = std::max(0.0, phat - 1.96 * sigma);
  report.mc_ci95_hi = std::min(1.0, phat + 1.96 * sigma);
  return report;
}

}  // namespace itlab
