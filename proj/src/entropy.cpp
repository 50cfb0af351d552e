#include "itlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace itlab {
namespace {

std::string tally_note(const char* what, std::uint64_t states) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s over %llu states", what,
                static_cast<unsigned long long>(states));
  return buf;
}

// H of a count tally with the given total, in bits:
// log2(total) - sum c log2 c / total.
template <class Map>
double entropy_of_counts(const Map& counts, double total) {
  double acc = 0;
  for (const auto& kv : counts) {
    const double c = static_cast<double>(kv.second);
    acc += c * std::log2(c);
  }
  return std::log2(total) - acc / total;
}

// Fraction-free Gaussian elimination (exact over the integers). Entries
// stay minors of the input, so divisions are exact and 128-bit
// intermediates cover every size the enumeration budget admits.
int rank_over_rationals(const IntMatrix& mat) {
  const int rows = mat.rows, cols = mat.cols;
  std::vector<__int128> a(mat.a.begin(), mat.a.end());
  auto at = [&](int i, int j) -> __int128& {
    return a[static_cast<std::size_t>(i) * cols + j];
  };
  int rank = 0;
  __int128 prev = 1;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i) {
      if (at(i, col) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != rank) {
      for (int j = 0; j < cols; ++j) std::swap(at(piv, j), at(rank, j));
    }
    for (int i = rank + 1; i < rows; ++i) {
      for (int j = col + 1; j < cols; ++j) {
        at(i, j) = (at(rank, col) * at(i, j) - at(i, col) * at(rank, j)) / prev;
      }
      at(i, col) = 0;
    }
    prev = at(rank, col);
    ++rank;
  }
  return rank;
}

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  std::int64_t out = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) out = out * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return out;
}

int rank_mod_q(const IntMatrix& mat, std::int64_t q) {
  const int rows = mat.rows, cols = mat.cols;
  std::vector<std::int64_t> a(mat.a.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = ((mat.a[k] % q) + q) % q;
  auto at = [&](int i, int j) -> std::int64_t& {
    return a[static_cast<std::size_t>(i) * cols + j];
  };
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i) {
      if (at(i, col) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != rank) {
      for (int j = 0; j < cols; ++j) std::swap(at(piv, j), at(rank, j));
    }
    const std::int64_t inv = mod_pow(at(rank, col), q - 2, q);  // q prime
    for (int i = rank + 1; i < rows; ++i) {
      const std::int64_t f = at(i, col) * inv % q;
      if (f == 0) continue;
      for (int j = col; j < cols; ++j) at(i, j) = ((at(i, j) - f * at(rank, j)) % q + q) % q;
    }
    ++rank;
  }
  return rank;
}

// Odometer over `digits.size()` base-q digits, leftmost most significant.
// Returns false once the odometer wraps back to all zeros.
bool advance_digits(std::vector<std::int64_t>& digits, std::int64_t q) {
  std::size_t k = digits.size();
  while (k-- > 0) {
    if (digits[k] < q - 1) {
      ++digits[k];
      return true;
    }
    digits[k] = 0;
  }
  return false;
}

}  // namespace

double binary_entropy_bits(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

int matrix_rank(const IntMatrix& mat, const ModelParams& params) {
  if (params.semiring == Semiring::ModQProduct) return rank_mod_q(mat, params.q);
  return rank_over_rationals(mat);
}

EntropyReport exact_source_entropy(const ModelParams& params, std::uint64_t budget) {
  params.validate();
  std::unordered_map<std::vector<std::int64_t>, std::uint64_t, Int64VecHash> tally;
  const std::uint64_t pairs = for_each_source(
      params, budget, [&](const FactorPair& p) { ++tally[product(p, params).a]; });
  EntropyReport rep;
  rep.value_bits = entropy_of_counts(tally, static_cast<double>(pairs));
  rep.support_size = tally.size();
  rep.exact = true;
  rep.method = tally_note("product tally", pairs);
  return rep;
}

ConditionalSourceEntropy conditional_source_entropy_given_v(const ModelParams& params,
                                                            std::uint64_t budget) {
  params.validate();
  source_count_checked(params, budget);
  const int m = params.m, r = params.r;
  const std::int64_t q = params.q;

  FactorPair pair;
  pair.u = IntMatrix(m, r);
  pair.v = IntMatrix(r, m);

  ConditionalSourceEntropy out;
  std::uint64_t v_count = 0;
  std::uint64_t fullrank_count = 0;
  std::unordered_map<std::vector<std::int64_t>, std::uint64_t, Int64VecHash> tally;
  double u_total = 0;
  do {
    tally.clear();
    std::uint64_t u_count = 0;
    std::fill(pair.u.a.begin(), pair.u.a.end(), 0);
    do {
      ++tally[product(pair, params).a];
      ++u_count;
    } while (advance_digits(pair.u.a, q));
    u_total = static_cast<double>(u_count);
    const double h_v = entropy_of_counts(tally, u_total);
    out.h_total_bits += h_v;
    ++v_count;
    if (matrix_rank(pair.v, params) == r) {
      ++fullrank_count;
      out.h_given_fullrank_v_bits += h_v;
    }
  } while (advance_digits(pair.v.a, q));

  out.h_total_bits /= static_cast<double>(v_count);
  out.prob_v_fullrank = static_cast<double>(fullrank_count) / static_cast<double>(v_count);
  if (fullrank_count > 0) {
    out.h_given_fullrank_v_bits /= static_cast<double>(fullrank_count);
  }
  return out;
}

Lemma32Report lemma32_conditional_entropy(int r, std::int64_t q, Semiring semiring,
                                          std::uint64_t budget) {
  ModelParams shape{r, r, q, semiring};
  shape.validate();

  const unsigned digit_count = static_cast<unsigned>(r) * static_cast<unsigned>(r + 1);
  const auto states = checked_pow(static_cast<std::uint64_t>(q), digit_count);
  if (!states.has_value()) {
    throw BudgetExceeded(std::numeric_limits<std::uint64_t>::max(), budget, true);
  }
  if (*states > budget) throw BudgetExceeded(*states, budget);

  // Dense tallies keyed by positional encoding of the value tuple.
  const std::int64_t vmax =
      semiring == Semiring::IntegerProduct ? static_cast<std::int64_t>(r) * (q - 1) * (q - 1)
                                           : q - 1;
  const std::uint64_t base = static_cast<std::uint64_t>(vmax) + 1;
  std::uint64_t full_size = 1, prefix_size = 1;
  for (int i = 0; i < r; ++i) full_size *= base;
  for (int i = 0; i + 1 < r; ++i) prefix_size *= base;
  std::vector<std::uint32_t> full(full_size, 0), prefix(prefix_size, 0);
  std::vector<std::uint64_t> full_keys, prefix_keys;

  IntMatrix c(r, r);
  std::vector<std::int64_t> a_vec(static_cast<std::size_t>(r), 0);
  std::vector<std::int64_t> x(static_cast<std::size_t>(r), 0);

  double h_sum = 0;
  std::uint64_t c_count = 0;
  std::unordered_set<std::int64_t> last_values;
  do {
    full_keys.clear();
    prefix_keys.clear();
    std::fill(a_vec.begin(), a_vec.end(), 0);
    std::uint64_t a_count = 0;
    do {
      for (int i = 0; i < r; ++i) {
        std::int64_t dot = 0;
        for (int j = 0; j < r; ++j) dot += c.at(i, j) * a_vec[static_cast<std::size_t>(j)];
        if (semiring == Semiring::ModQProduct) dot %= q;
        x[static_cast<std::size_t>(i)] = dot;
      }
      last_values.insert(x[static_cast<std::size_t>(r - 1)]);
      std::uint64_t key = 0;
      for (int i = 0; i < r; ++i) key = key * base + static_cast<std::uint64_t>(x[i]);
      if (full[key]++ == 0) full_keys.push_back(key);
      const std::uint64_t pkey = key / base;  // drops the last coordinate
      if (prefix[pkey]++ == 0) prefix_keys.push_back(pkey);
      ++a_count;
    } while (advance_digits(a_vec, q));

    const double total = static_cast<double>(a_count);
    double acc_full = 0, acc_prefix = 0;
    for (std::uint64_t k : full_keys) {
      const double cnt = full[k];
      acc_full += cnt * std::log2(cnt);
      full[k] = 0;
    }
    for (std::uint64_t k : prefix_keys) {
      const double cnt = prefix[k];
      acc_prefix += cnt * std::log2(cnt);
      prefix[k] = 0;
    }
    // H(X_1..X_r | C=c) - H(X_1..X_{r-1} | C=c); the log2(total) terms cancel.
    h_sum += (acc_prefix - acc_full) / total;
    ++c_count;
  } while (advance_digits(c.a, q));

  Lemma32Report rep;
  rep.entropy.value_bits = h_sum / static_cast<double>(c_count);
  rep.entropy.support_size = last_values.size();
  rep.entropy.exact = true;
  rep.entropy.method = tally_note("row-functional tally", *states);
  rep.bound_bits = (1.0 - static_cast<double>(r) * static_cast<double>(r) /
                              static_cast<double>(q)) *
                   std::log2(static_cast<double>(q));
  rep.holds = rep.entropy.value_bits >= rep.bound_bits - 1e-9;
  return rep;
}

EntropyReport observation_entropy(const ModelParams& params, const LocationSequence& locs,
                                  std::uint64_t budget) {
  params.validate();
  locs.validate();
  if (locs.m != params.m) throw ValidationError("location grid size does not match model");
  std::unordered_map<std::vector<std::int64_t>, std::uint64_t, Int64VecHash> tally;
  std::vector<std::int64_t> vals(locs.size());
  const std::uint64_t pairs = for_each_source(params, budget, [&](const FactorPair& p) {
    const ProductMatrix s = product(p, params);
    for (std::size_t k = 0; k < locs.size(); ++k) {
      vals[k] = s.at(locs.locations[k].first, locs.locations[k].second);
    }
    ++tally[vals];
  });
  EntropyReport rep;
  rep.value_bits = entropy_of_counts(tally, static_cast<double>(pairs));
  rep.support_size = tally.size();
  rep.exact = true;
  rep.method = tally_note("observed-value tally", pairs);
  return rep;
}

double agreement_probability(const Observation& obs, const ModelParams& params,
                             std::uint64_t budget) {
  params.validate();
  obs.validate(params);
  std::uint64_t hits = 0;
  const std::uint64_t pairs = for_each_source(params, budget, [&](const FactorPair& p) {
    const ProductMatrix s = product(p, params);
    for (std::size_t k = 0; k < obs.locs.size(); ++k) {
      const auto [i, j] = obs.locs.locations[k];
      if (s.at(i, j) != obs.values[k]) return;
    }
    ++hits;
  });
  return static_cast<double>(hits) / static_cast<double>(pairs);
}

FanoCheck fano_verify(const ModelParams& params, const LocationSequence& locs,
                      std::uint64_t budget) {
  params.validate();
  locs.validate();
  if (locs.m != params.m) throw ValidationError("location grid size does not match model");

  // Per observed-value tuple: the tally of product matrices carrying it.
  // A product determines its values at locs, so the groups partition the
  // induced S distribution.
  using ProductTally = std::map<std::vector<std::int64_t>, std::uint64_t>;
  std::unordered_map<std::vector<std::int64_t>, ProductTally, Int64VecHash> groups;
  std::vector<std::int64_t> vals(locs.size());
  const std::uint64_t pairs = for_each_source(params, budget, [&](const FactorPair& p) {
    const ProductMatrix s = product(p, params);
    for (std::size_t k = 0; k < locs.size(); ++k) {
      vals[k] = s.at(locs.locations[k].first, locs.locations[k].second);
    }
    ++groups[vals][s.a];
  });

  const double n = static_cast<double>(pairs);
  FanoCheck out;
  std::uint64_t support = 0;
  std::uint64_t committed_hits = 0;
  for (const auto& [tuple, tally] : groups) {
    support += tally.size();
    std::uint64_t group_total = 0;
    double acc = 0;
    for (const auto& [prod, cnt] : tally) {
      group_total += cnt;
      acc += static_cast<double>(cnt) * std::log2(static_cast<double>(cnt));
    }
    const double t = static_cast<double>(group_total);
    out.h_s_given_obs_bits += (t / n) * (std::log2(t) - acc / t);
    // Committed estimate: lexicographically least consistent product, the
    // same rule decode() applies.
    committed_hits += tally.begin()->second;
  }
  out.pe = 1.0 - static_cast<double>(committed_hits) / n;
  out.support_size = support;
  double tail = 0;
  if (out.pe > 0 && support > 1) {
    tail = out.pe * std::log2(static_cast<double>(support - 1));
  }
  out.fano_rhs_bits = binary_entropy_bits(out.pe) + tail;
  out.holds = out.h_s_given_obs_bits <= out.fano_rhs_bits + 1e-9;
  return out;
}

}  // namespace itlab
