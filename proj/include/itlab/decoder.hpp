#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "itlab/model.hpp"
#include "itlab/sampling.hpp"

namespace itlab {

inline constexpr std::uint64_t kDefaultEnumBudget = 10'000'000;     // factor pairs
inline constexpr std::uint64_t kDefaultLocationBudget = 100'000;    // location subsets

/// Sampled locations plus the matrix values revealed at them.
struct Observation {
  LocationSequence locs;
  std::vector<std::int64_t> values;  // values[k] = s[locs[k]]

  /// Lengths match, locations valid, each value within entry_range(params).
  void validate(const ModelParams& params) const;
};

/// Reads the ground-truth matrix at the given locations.
Observation observe(const ProductMatrix& s, const LocationSequence& locs);

enum class DecodeKind { Unique, Ambiguous };

struct DecodeOutcome {
  DecodeKind kind = DecodeKind::Ambiguous;
  /// The lexicographically least consistent product matrix. Equals the truth
  /// when kind == Unique; otherwise it is the committed estimate used for
  /// Fano verification.
  ProductMatrix reconstruction;
  std::uint64_t consistent_count = 0;
};

/// Brute force over all q^{2rm} factor pairs: every distinct product matrix
/// agreeing with the observation at all observed cells, sorted
/// lexicographically by row-major entry list. This is the reference
/// implementation that pruned_consistent is checked against.
std::vector<ProductMatrix> enumerate_consistent(const Observation& obs, const ModelParams& params,
                                                std::uint64_t budget = kDefaultEnumBudget);

/// Same contract and same result as enumerate_consistent, computed by
/// backtracking over the digits of U and V. V is filled column by column so
/// each observed cell becomes checkable as soon as its U-row and V-column
/// are assigned; over the integers, partially assigned columns are also
/// pruned by the running lower/upper sum bounds.
std::vector<ProductMatrix> pruned_consistent(const Observation& obs, const ModelParams& params,
                                             std::uint64_t budget = kDefaultEnumBudget);

/// Unique when exactly one consistent product matrix exists. Throws
/// ValidationError if the observation is not realizable by any source.
DecodeOutcome decode(const Observation& obs, const ModelParams& params,
                     std::uint64_t budget = kDefaultEnumBudget);

enum class ErrorRateMode { ExactAverage, MonteCarlo };

const char* to_string(ErrorRateMode mode);

struct ErrorRateReport {
  ModelParams params;
  int n = 0;
  ErrorRateMode mode = ErrorRateMode::ExactAverage;
  double pe = 0;
  std::uint64_t trials = 0;    // mc: trial count; exact: pair_count * subset_count
  std::uint64_t failures = 0;  // numerator of pe
  std::uint64_t pair_count = 0;
  std::uint64_t subset_count = 0;
  double ci95_lo = 0;  // mc only; equals pe in exact mode
  double ci95_hi = 0;
};

/// C(cells, n), or nullopt on 64-bit overflow.
std::optional<std::uint64_t> subset_count(std::uint64_t cells, std::uint64_t n);

/// Exact P_e: the failure indicator averaged uniformly over all factor
/// pairs and all n-subsets of cells, where failure means the observation
/// does not determine the product matrix uniquely.
ErrorRateReport exact_error_rate(const ModelParams& params, int n,
                                 std::uint64_t enum_budget = kDefaultEnumBudget,
                                 std::uint64_t location_budget = kDefaultLocationBudget);

/// Monte Carlo estimate of the same quantity with fresh source and fresh
/// without-replacement locations per trial. Deterministic per seed.
ErrorRateReport mc_error_rate(const ModelParams& params, int n, std::uint64_t trials,
                              const SeedSpec& seed,
                              std::uint64_t budget = kDefaultEnumBudget);

}  // namespace itlab
