#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "itlab/errors.hpp"
#include "itlab/matrix.hpp"
#include "itlab/rng.hpp"

namespace itlab {

/// Whether the factor product u*v is taken over the integers or modulo q.
enum class Semiring { IntegerProduct, ModQProduct };

const char* to_string(Semiring s);
Semiring semiring_from_string(std::string_view s);

bool is_prime(std::int64_t n);

/// The universe of one experiment: an m x m source S = U*V with U (m x r)
/// and V (r x m), entries uniform on {0, ..., q-1}.
struct ModelParams {
  int m = 1;
  int r = 1;
  std::int64_t q = 2;
  Semiring semiring = Semiring::IntegerProduct;

  /// Throws ValidationError unless m,r >= 1, q >= 1, and q prime for ModQProduct.
  void validate() const;
};

/// One source realization.
struct FactorPair {
  IntMatrix u;  // m x r
  IntMatrix v;  // r x m
};

using ProductMatrix = IntMatrix;

struct EntryRange {
  std::int64_t min = 0;
  std::int64_t max = 0;
};

/// All 2rm factor digits drawn independently uniform on {0,...,q-1}.
/// Pure function of (params, seed).
FactorPair generate_source(const ModelParams& params, const SeedSpec& seed);

/// s = u*v in the selected semiring. Throws ValidationError on dimension
/// mismatch or out-of-range factor entries.
ProductMatrix product(const FactorPair& pair, const ModelParams& params);

/// Tight entry bounds: [0, r(q-1)^2] for IntegerProduct, [0, q-1] for ModQProduct.
EntryRange entry_range(const ModelParams& params);

/// base^exp, or nullopt if the result does not fit in 64 bits.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp);

/// q^{2rm} when it fits and is within budget; throws BudgetExceeded otherwise.
std::uint64_t source_count_checked(const ModelParams& params, std::uint64_t budget);

/// The factor pair at a given position in lexicographic order of the
/// flattened digit string (u row-major, then v row-major; leftmost digit
/// most significant).
FactorPair source_at(const ModelParams& params, std::uint64_t index);

/// Yields each of the q^{2rm} factor pairs exactly once, in lexicographic
/// order. The returned pointer refers to internal storage and is
/// invalidated by the next call.
class SourceEnumerator {
 public:
  SourceEnumerator(const ModelParams& params, std::uint64_t budget);

  const FactorPair* next();
  std::uint64_t total() const { return total_; }

 private:
  ModelParams params_;
  std::uint64_t total_ = 0;
  std::uint64_t index_ = 0;
  FactorPair pair_;
};

template <class F>
std::uint64_t for_each_source(const ModelParams& params, std::uint64_t budget, F&& fn) {
  SourceEnumerator e(params, budget);
  while (const FactorPair* p = e.next()) fn(*p);
  return e.total();
}

}  // namespace itlab
