#include "itlab/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "itlab/parallel.hpp"

namespace itlab {

const char* to_string(ErrorRateMode mode) {
  return mode == ErrorRateMode::ExactAverage ? "exact" : "mc";
}

void Observation::validate(const ModelParams& params) const {
  params.validate();
  locs.validate();
  if (locs.m != params.m) {
    throw ValidationError("observation grid size does not match params.m");
  }
  if (values.size() != locs.locations.size()) {
    throw ValidationError("observation has " + std::to_string(values.size()) + " values for " +
                          std::to_string(locs.locations.size()) + " locations");
  }
  const EntryRange range = entry_range(params);
  for (std::int64_t v : values) {
    if (v < range.min || v > range.max) {
      throw ValidationError("observed value " + std::to_string(v) + " outside entry range [" +
                            std::to_string(range.min) + ", " + std::to_string(range.max) + "]");
    }
  }
}

Observation observe(const ProductMatrix& s, const LocationSequence& locs) {
  locs.validate();
  if (s.rows != locs.m || s.cols != locs.m) {
    throw ValidationError("matrix dimensions do not match location grid");
  }
  Observation obs;
  obs.locs = locs;
  obs.values.reserve(locs.locations.size());
  for (const auto& [row, col] : locs.locations) obs.values.push_back(s.at(row, col));
  return obs;
}

std::vector<ProductMatrix> enumerate_consistent(const Observation& obs, const ModelParams& params,
                                                std::uint64_t budget) {
  obs.validate(params);
  std::set<ProductMatrix> found;
  for_each_source(params, budget, [&](const FactorPair& pair) {
    const ProductMatrix s = product(pair, params);
    for (std::size_t k = 0; k < obs.values.size(); ++k) {
      const auto& [row, col] = obs.locs.locations[k];
      if (s.at(row, col) != obs.values[k]) return;
    }
    found.insert(s);
  });
  return {found.begin(), found.end()};
}

namespace {

// Search state for the backtracking route: U is fixed, V is assembled column
// by column from the per-column feasible sets.
struct ColumnConstraints {
  // (row index, observed value) pairs for one column of S.
  std::vector<std::pair<int, std::int64_t>> cells;
};

// All columns c in Z_q^r such that u_row . c matches every observed cell of
// this column. Digits of c are assigned one at a time; integer semiring
// prunes on running sum bounds, mod-q checks once the column is complete.
void feasible_columns(const IntMatrix& u, const ModelParams& params,
                      const ColumnConstraints& constraints, std::vector<IntMatrix>& out) {
  const int r = params.r;
  const std::int64_t q = params.q;
  const bool modq = params.semiring == Semiring::ModQProduct;
  std::vector<std::int64_t> digits(static_cast<std::size_t>(r), 0);
  // partial[c] tracks sum_{t<=k} u[row_c][t] * digits[t] for each constraint c.
  std::vector<std::int64_t> partial(constraints.cells.size(), 0);
  // max_rest[c][k] = (q-1) * sum_{t>k} u[row_c][t]: the largest possible
  // remaining contribution after digit k is fixed.
  std::vector<std::vector<std::int64_t>> max_rest(constraints.cells.size());
  for (std::size_t c = 0; c < constraints.cells.size(); ++c) {
    max_rest[c].assign(static_cast<std::size_t>(r), 0);
    std::int64_t acc = 0;
    for (int k = r - 1; k >= 0; --k) {
      max_rest[c][static_cast<std::size_t>(k)] = acc;
      acc += (q - 1) * u.at(constraints.cells[c].first, k);
    }
  }

  std::vector<std::vector<std::int64_t>> partial_stack(static_cast<std::size_t>(r) + 1);
  partial_stack[0].assign(constraints.cells.size(), 0);

  int k = 0;
  digits[0] = -1;
  while (k >= 0) {
    ++digits[static_cast<std::size_t>(k)];
    if (digits[static_cast<std::size_t>(k)] >= q) {
      --k;
      if (k >= 0) continue;
      break;
    }
    const auto& base = partial_stack[static_cast<std::size_t>(k)];
    auto& cur = partial_stack[static_cast<std::size_t>(k) + 1];
    cur.resize(constraints.cells.size());
    bool ok = true;
    for (std::size_t c = 0; c < constraints.cells.size(); ++c) {
      const auto [row, want] = constraints.cells[c];
      cur[c] = base[c] + u.at(row, k) * digits[static_cast<std::size_t>(k)];
      if (modq) {
        if (k == r - 1 && cur[c] % q != want) {
          ok = false;
          break;
        }
      } else {
        if (cur[c] > want || cur[c] + max_rest[c][static_cast<std::size_t>(k)] < want) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    if (k == r - 1) {
      IntMatrix col(r, 1);
      for (int t = 0; t < r; ++t) col.at(t, 0) = digits[static_cast<std::size_t>(t)];
      out.push_back(std::move(col));
      continue;
    }
    ++k;
    digits[static_cast<std::size_t>(k)] = -1;
  }
}

}  // namespace

std::vector<ProductMatrix> pruned_consistent(const Observation& obs, const ModelParams& params,
                                             std::uint64_t budget) {
  obs.validate(params);
  source_count_checked(params, budget);
  const int m = params.m;
  const int r = params.r;
  const std::int64_t q = params.q;
  const bool modq = params.semiring == Semiring::ModQProduct;

  std::vector<ColumnConstraints> by_column(static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < obs.values.size(); ++k) {
    const auto& [row, col] = obs.locs.locations[k];
    by_column[static_cast<std::size_t>(col)].cells.emplace_back(row, obs.values[k]);
  }

  std::set<ProductMatrix> found;
  // Enumerate U via its own odometer; V columns come from feasible_columns.
  std::vector<std::int64_t> u_digits(static_cast<std::size_t>(m) * static_cast<std::size_t>(r), 0);
  IntMatrix u(m, r);
  std::vector<std::vector<IntMatrix>> columns(static_cast<std::size_t>(m));
  std::vector<std::size_t> pick(static_cast<std::size_t>(m));
  bool u_done = false;
  while (!u_done) {
    std::copy(u_digits.begin(), u_digits.end(), u.a.begin());

    bool all_feasible = true;
    for (int j = 0; j < m && all_feasible; ++j) {
      columns[static_cast<std::size_t>(j)].clear();
      feasible_columns(u, params, by_column[static_cast<std::size_t>(j)],
                       columns[static_cast<std::size_t>(j)]);
      all_feasible = !columns[static_cast<std::size_t>(j)].empty();
    }
    if (all_feasible) {
      // Cartesian product over per-column feasible sets; columns of S are
      // independent once U is fixed.
      std::fill(pick.begin(), pick.end(), 0);
      for (;;) {
        ProductMatrix s(m, m);
        for (int j = 0; j < m; ++j) {
          const IntMatrix& col = columns[static_cast<std::size_t>(j)][pick[static_cast<std::size_t>(j)]];
          for (int i = 0; i < m; ++i) {
            std::int64_t acc = 0;
            for (int t = 0; t < r; ++t) acc += u.at(i, t) * col.at(t, 0);
            s.at(i, j) = modq ? acc % q : acc;
          }
        }
        found.insert(std::move(s));
        int j = m - 1;
        while (j >= 0 && ++pick[static_cast<std::size_t>(j)] ==
                             columns[static_cast<std::size_t>(j)].size()) {
          pick[static_cast<std::size_t>(j)] = 0;
          --j;
        }
        if (j < 0) break;
      }
    }

    // advance U odometer
    std::size_t k = u_digits.size();
    u_done = true;
    while (k-- > 0) {
      if (u_digits[k] < q - 1) {
        ++u_digits[k];
        u_done = false;
        break;
      }
      u_digits[k] = 0;
    }
  }
  return {found.begin(), found.end()};
}

DecodeOutcome decode(const Observation& obs, const ModelParams& params, std::uint64_t budget) {
  const std::vector<ProductMatrix> consistent = pruned_consistent(obs, params, budget);
  if (consistent.empty()) {
    throw ValidationError("observation is not realizable by any source in this model");
  }
  DecodeOutcome out;
  out.kind = consistent.size() == 1 ? DecodeKind::Unique : DecodeKind::Ambiguous;
  out.reconstruction = consistent.front();
  out.consistent_count = consistent.size();
  return out;
}

std::optional<std::uint64_t> subset_count(std::uint64_t cells, std::uint64_t n) {
  if (n > cells) return 0;
  n = std::min(n, cells - n);
  std::uint64_t result = 1;
  for (std::uint64_t k = 1; k <= n; ++k) {
    // result * (cells - n + k) / k, computed without intermediate overflow
    // where possible; bail out on overflow.
    const std::uint64_t factor = cells - n + k;
    const std::uint64_t g = std::gcd(result, k);
    const std::uint64_t reduced = result / g;
    const std::uint64_t kk = k / g;
    const std::uint64_t f2 = factor / kk;  // k/g divides factor after reduction
    if (reduced > std::numeric_limits<std::uint64_t>::max() / f2) return std::nullopt;
    result = reduced * f2;
  }
  return result;
}

namespace {

// Tallies the induced distribution over product matrices once so the
// per-subset pass only touches distinct products.
struct ProductTally {
  std::vector<ProductMatrix> matrices;
  std::vector<std::uint64_t> weights;  // generating factor pairs per matrix
  std::uint64_t pair_count = 0;
};

ProductTally tally_products(const ModelParams& params, std::uint64_t budget) {
  std::map<ProductMatrix, std::uint64_t> tally;
  const std::uint64_t pairs = for_each_source(params, budget, [&](const FactorPair& pair) {
    ++tally[product(pair, params)];
  });
  ProductTally out;
  out.pair_count = pairs;
  out.matrices.reserve(tally.size());
  out.weights.reserve(tally.size());
  for (auto& [mat, w] : tally) {
    out.matrices.push_back(mat);
    out.weights.push_back(w);
  }
  return out;
}

}  // namespace

ErrorRateReport exact_error_rate(const ModelParams& params, int n, std::uint64_t enum_budget,
                                 std::uint64_t location_budget) {
  params.validate();
  const std::uint64_t cells = static_cast<std::uint64_t>(params.m) * params.m;
  if (n < 0 || static_cast<std::uint64_t>(n) > cells) {
    throw ValidationError("n outside [0, m^2]");
  }
  const auto subsets = subset_count(cells, static_cast<std::uint64_t>(n));
  if (!subsets) {
    throw BudgetExceeded(std::numeric_limits<std::uint64_t>::max(), location_budget, true);
  }
  if (*subsets > location_budget) throw BudgetExceeded(*subsets, location_budget);

  const ProductTally tally = tally_products(params, enum_budget);

  // Group sources by their value tuple at the subset: the decoder's outcome
  // depends on the observation alone, and the consistent set of a tuple is
  // exactly the set of distinct products carrying that tuple. A source fails
  // iff its tuple group holds more than one distinct product.
  struct Group {
    std::uint64_t weight = 0;
    std::uint32_t first_product = 0;
    bool multiple = false;
  };

  std::vector<int> subset(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) subset[static_cast<std::size_t>(i)] = i;

  std::uint64_t failing_mass = 0;  // (pair, subset) combinations that fail
  std::uint64_t done_subsets = 0;
  std::unordered_map<std::vector<std::int64_t>, Group, Int64VecHash> groups;
  std::vector<std::int64_t> key(static_cast<std::size_t>(n));
  for (;;) {
    groups.clear();
    for (std::uint32_t p = 0; p < tally.matrices.size(); ++p) {
      const ProductMatrix& s = tally.matrices[p];
      for (int i = 0; i < n; ++i) {
        key[static_cast<std::size_t>(i)] = s.a[static_cast<std::size_t>(subset[static_cast<std::size_t>(i)])];
      }
      Group& g = groups[key];
      if (g.weight == 0) {
        g.first_product = p;
      } else if (g.first_product != p) {
        g.multiple = true;
      }
      g.weight += tally.weights[p];
    }
    for (const auto& [_, g] : groups) {
      if (g.multiple) failing_mass += g.weight;
    }
    ++done_subsets;

    // next n-combination of [0, cells)
    int i = n - 1;
    while (i >= 0 &&
           subset[static_cast<std::size_t>(i)] ==
               static_cast<int>(cells) - n + i) {
      --i;
    }
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  ErrorRateReport report;
  report.params = params;
  report.n = n;
  report.mode = ErrorRateMode::ExactAverage;
  report.pair_count = tally.pair_count;
  report.subset_count = done_subsets;
  report.failures = failing_mass;
  report.trials = tally.pair_count * done_subsets;
  report.pe = static_cast<double>(failing_mass) / static_cast<double>(report.trials);
  report.ci95_lo = report.pe;
  report.ci95_hi = report.pe;
  return report;
}

ErrorRateReport mc_error_rate(const ModelParams& params, int n, std::uint64_t trials,
                              const SeedSpec& seed, std::uint64_t budget) {
  params.validate();
  const std::uint64_t cells = static_cast<std::uint64_t>(params.m) * params.m;
  if (n < 0 || static_cast<std::uint64_t>(n) > cells) {
    throw ValidationError("n outside [0, m^2]");
  }
  if (trials < 1) throw ValidationError("mc_error_rate: trials must be >= 1");
  source_count_checked(params, budget);

  const std::uint64_t base = derive_seed(seed.master_seed, seed.stream_index);
  std::vector<std::uint8_t> failed(trials, 0);
  parallel_for(trials, [&](std::uint64_t t) {
    const std::uint64_t trial_seed = derive_seed(base, t);
    const FactorPair pair = generate_source(params, SeedSpec{trial_seed, 0});
    const ProductMatrix truth = product(pair, params);
    const LocationSequence locs = sample_locations(params.m, n, SeedSpec{trial_seed, 1});
    const DecodeOutcome outcome = decode(observe(truth, locs), params, budget);
    failed[t] = (outcome.kind != DecodeKind::Unique || outcome.reconstruction != truth) ? 1 : 0;
  });
  std::uint64_t failures = 0;
  for (std::uint8_t f : failed) failures += f;

  ErrorRateReport report;
  report.params = params;
  report.n = n;
  report.mode = ErrorRateMode::MonteCarlo;
  report.trials = trials;
  report.failures = failures;
  report.pe = static_cast<double>(failures) / static_cast<double>(trials);
  const double sigma = std::sqrt(report.pe * (1.0 - report.pe) / static_cast<double>(trials));
  report.ci95_lo = std::max(0.0, report.pe - 1.96 * sigma);
  report.ci95_hi = std::min(1.0, report.pe + 1.96 * sigma);
  return report;
}

}  // namespace itlab
