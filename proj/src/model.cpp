#include "itlab/model.hpp"

#include <limits>

namespace itlab {

const char* to_string(Semiring s) {
  return s == Semiring::IntegerProduct ? "integer" : "modq";
}

Semiring semiring_from_string(std::string_view s) {
  if (s == "integer") return Semiring::IntegerProduct;
  if (s == "modq") return Semiring::ModQProduct;
  throw ValidationError("unknown semiring '" + std::string(s) + "' (expected 'integer' or 'modq')");
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

void ModelParams::validate() const {
  if (m < 1) throw ValidationError("m must be >= 1");
  if (r < 1) throw ValidationError("r must be >= 1");
  if (q < 1) throw ValidationError("q must be >= 1");
  if (semiring == Semiring::ModQProduct && !is_prime(q)) {
    throw ValidationError("ModQProduct requires prime q, got q=" + std::to_string(q));
  }
}

FactorPair generate_source(const ModelParams& params, const SeedSpec& seed) {
  params.validate();
  Rng rng(seed);
  FactorPair pair{IntMatrix(params.m, params.r), IntMatrix(params.r, params.m)};
  const auto q = static_cast<std::uint64_t>(params.q);
  for (auto& x : pair.u.a) x = q == 1 ? 0 : static_cast<std::int64_t>(rng.below(q));
  for (auto& x : pair.v.a) x = q == 1 ? 0 : static_cast<std::int64_t>(rng.below(q));
  return pair;
}

ProductMatrix product(const FactorPair& pair, const ModelParams& params) {
  params.validate();
  if (pair.u.rows != params.m || pair.u.cols != params.r || pair.v.rows != params.r ||
      pair.v.cols != params.m) {
    throw ValidationError("factor dimensions do not match params (expected " +
                          std::to_string(params.m) + "x" + std::to_string(params.r) + " and " +
                          std::to_string(params.r) + "x" + std::to_string(params.m) + ")");
  }
  for (const auto* mat : {&pair.u, &pair.v}) {
    for (std::int64_t x : mat->a) {
      if (x < 0 || x >= params.q) {
        throw ValidationError("factor entry " + std::to_string(x) + " outside [0, q-1]");
      }
    }
  }
  ProductMatrix s(params.m, params.m);
  for (int i = 0; i < params.m; ++i) {
    for (int j = 0; j < params.m; ++j) {
      std::int64_t acc = 0;
      for (int k = 0; k < params.r; ++k) acc += pair.u.at(i, k) * pair.v.at(k, j);
      s.at(i, j) = params.semiring == Semiring::ModQProduct ? acc % params.q : acc;
    }
  }
  return s;
}

EntryRange entry_range(const ModelParams& params) {
  params.validate();
  if (params.semiring == Semiring::ModQProduct) return {0, params.q - 1};
  return {0, params.r * (params.q - 1) * (params.q - 1)};
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::nullopt;
    }
    result *= base;
  }
  return result;
}

std::uint64_t source_count_checked(const ModelParams& params, std::uint64_t budget) {
  params.validate();
  const unsigned digits = 2u * static_cast<unsigned>(params.r) * static_cast<unsigned>(params.m);
  const auto count = checked_pow(static_cast<std::uint64_t>(params.q), digits);
  if (!count) throw BudgetExceeded(std::numeric_limits<std::uint64_t>::max(), budget, true);
  if (*count > budget) throw BudgetExceeded(*count, budget);
  return *count;
}

FactorPair source_at(const ModelParams& params, std::uint64_t index) {
  params.validate();
  FactorPair pair{IntMatrix(params.m, params.r), IntMatrix(params.r, params.m)};
  const std::size_t nu = pair.u.a.size();
  const std::size_t nv = pair.v.a.size();
  const auto q = static_cast<std::uint64_t>(params.q);
  // Leftmost digit (u[0][0]) is most significant; v digits follow all u digits.
  for (std::size_t k = nu + nv; k-- > 0;) {
    const std::int64_t digit = static_cast<std::int64_t>(index % q);
    index /= q;
    if (k < nu) {
      pair.u.a[k] = digit;
    } else {
      pair.v.a[k - nu] = digit;
    }
  }
  return pair;
}

SourceEnumerator::SourceEnumerator(const ModelParams& params, std::uint64_t budget)
    : params_(params),
      total_(source_count_checked(params, budget)),
      pair_{IntMatrix(params.m, params.r), IntMatrix(params.r, params.m)} {}

const FactorPair* SourceEnumerator::next() {
  if (index_ >= total_) return nullptr;
  if (index_ > 0) {
    // Odometer increment on the flattened (u, v) digit string, least
    // significant digit last, which yields ascending lexicographic order.
    const std::int64_t top = params_.q - 1;
    std::size_t k = pair_.v.a.size();
    while (k-- > 0) {
      if (pair_.v.a[k] < top) {
        ++pair_.v.a[k];
        goto done;
      }
      pair_.v.a[k] = 0;
    }
    k = pair_.u.a.size();
    while (k-- > 0) {
      if (pair_.u.a[k] < top) {
        ++pair_.u.a[k];
        goto done;
      }
      pair_.u.a[k] = 0;
    }
  done:;
  }
  ++index_;
  return &pair_;
}

}  // namespace itlab
