#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "itlab/entropy.hpp"
#include "oracles.hpp"

using namespace itlab;

namespace {

IntMatrix mat(int rows, int cols, std::vector<std::int64_t> entries) {
  IntMatrix m(rows, cols);
  m.a = std::move(entries);
  return m;
}

double tallied_source_entropy(const ModelParams& p) {
  std::map<std::vector<std::int64_t>, std::uint64_t> counts;
  oracle::for_each_product(p, [&](const IntMatrix& s) { ++counts[s.a]; });
  return oracle::entropy_bits(counts);
}

}  // namespace

TEST_CASE("binary_entropy_bits") {
  CHECK(binary_entropy_bits(0.0) == 0.0);
  CHECK(binary_entropy_bits(1.0) == 0.0);
  CHECK(binary_entropy_bits(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy_bits(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-15));
  CHECK(binary_entropy_bits(0.1) == doctest::Approx(binary_entropy_bits(0.9)).epsilon(1e-15));
}

TEST_CASE("matrix_rank over the rationals") {
  ModelParams p{2, 2, 5, Semiring::IntegerProduct};
  CHECK(matrix_rank(mat(2, 2, {1, 2, 2, 4}), p) == 1);
  CHECK(matrix_rank(mat(2, 2, {1, 2, 3, 4}), p) == 2);
  CHECK(matrix_rank(mat(1, 2, {2, 4}), p) == 1);
  CHECK(matrix_rank(mat(2, 2, {0, 0, 0, 0}), p) == 0);
  CHECK(matrix_rank(mat(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9}), p) == 2);
}

TEST_CASE("matrix_rank over prime fields") {
  ModelParams p2{2, 2, 2, Semiring::ModQProduct};
  CHECK(matrix_rank(mat(2, 2, {1, 1, 1, 1}), p2) == 1);
  CHECK(matrix_rank(mat(1, 1, {2}), p2) == 0);  // 2 = 0 mod 2
  CHECK(matrix_rank(mat(2, 2, {1, 1, 1, 0}), p2) == 2);

  ModelParams p5{2, 2, 5, Semiring::ModQProduct};
  CHECK(matrix_rank(mat(2, 2, {2, 4, 1, 2}), p5) == 1);  // row0 = 2 * row1 mod 5
  CHECK(matrix_rank(mat(2, 2, {2, 4, 1, 3}), p5) == 2);
}

TEST_CASE("exact_source_entropy closed-form pins") {
  // m = r = 1, q = 2: the product is Bernoulli(1/4)
  EntropyReport rep = exact_source_entropy({1, 1, 2, Semiring::IntegerProduct});
  CHECK(rep.value_bits == doctest::Approx(binary_entropy_bits(0.25)).epsilon(1e-14));
  CHECK(rep.support_size == 2);
  CHECK(rep.exact);

  // 16 factor pairs spread over 10 distinct products
  rep = exact_source_entropy({2, 1, 2, Semiring::IntegerProduct});
  CHECK(rep.value_bits == doctest::Approx(2.7717822215997982).epsilon(1e-12));
  CHECK(rep.support_size == 10);

  // q = 1: a single all-zero source
  rep = exact_source_entropy({3, 2, 1, Semiring::IntegerProduct});
  CHECK(rep.value_bits == 0.0);
  CHECK(rep.support_size == 1);
}

TEST_CASE("exact_source_entropy equals an independent tally") {
  struct Shape {
    int m, r;
    std::int64_t q;
  };
  const Shape shapes[] = {{1, 1, 3}, {2, 1, 2}, {2, 1, 3}, {1, 2, 3}, {2, 2, 2}, {3, 1, 2}};
  for (Semiring sr : {Semiring::IntegerProduct, Semiring::ModQProduct}) {
    for (const auto& [m, r, q] : shapes) {
      ModelParams p{m, r, q, sr};
      EntropyReport rep = exact_source_entropy(p);
      CHECK(rep.value_bits == doctest::Approx(tallied_source_entropy(p)).epsilon(1e-12));
      CHECK(rep.value_bits <= std::log2(static_cast<double>(rep.support_size)) + 1e-12);
    }
  }
}

TEST_CASE("exact_source_entropy honors the budget") {
  CHECK_THROWS_AS(exact_source_entropy({2, 1, 2, Semiring::IntegerProduct}, 15), BudgetExceeded);
}

TEST_CASE("conditional entropy given V, closed cases") {
  // v = 0 freezes S, v = 1 copies U: H(UV|V) = 1/2
  ConditionalSourceEntropy c = conditional_source_entropy_given_v({1, 1, 2, Semiring::IntegerProduct});
  CHECK(c.h_total_bits == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c.h_given_fullrank_v_bits == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.prob_v_fullrank == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("full-rank V makes the factor map injective") {
  struct Shape {
    int m, r;
    std::int64_t q;
  };
  const Shape shapes[] = {{1, 1, 2}, {2, 1, 2}, {2, 1, 3}, {2, 2, 2}, {3, 1, 2}};
  for (Semiring sr : {Semiring::IntegerProduct, Semiring::ModQProduct}) {
    for (const auto& [m, r, q] : shapes) {
      ModelParams p{m, r, q, sr};
      ConditionalSourceEntropy c = conditional_source_entropy_given_v(p);
      const double full = m * r * std::log2(static_cast<double>(q));
      CHECK(c.h_given_fullrank_v_bits == doctest::Approx(full).epsilon(1e-12));
      CHECK(c.prob_v_fullrank > 0);
      CHECK(c.h_total_bits <= full + 1e-12);

      // conditioning on V can only reduce entropy
      CHECK(c.h_total_bits <= exact_source_entropy(p).value_bits + 1e-12);
      // and the full-rank slice alone already supports this floor
      CHECK(exact_source_entropy(p).value_bits >= c.prob_v_fullrank * full - 1e-12);
    }
  }
}

TEST_CASE("V wider than its rank never counts as full rank") {
  ConditionalSourceEntropy c = conditional_source_entropy_given_v({1, 2, 2, Semiring::IntegerProduct});
  CHECK(c.prob_v_fullrank == 0.0);  // a 2 x 1 matrix has rank at most 1
}

TEST_CASE("sequential conditional entropy meets its closed-form floor") {
  struct Pin {
    int r;
    std::int64_t q;
    double integer;
    double modq;
  };
  // frozen from exhaustive enumeration over all q^{r^2 + r} states
  const Pin pins[] = {
      {1, 2, 0.5, 0.5},
      {1, 3, 1.0566416671474375, 1.0566416671474375},
      {2, 3, 0.890365878, 1.095776544},
      {2, 5, 1.196860653, 1.872402816},
      {2, 7, 1.327780112, 2.413319683},
      {3, 3, 0.648984257, 1.107533112},
  };
  for (const Pin& pin : pins) {
    Lemma32Report ri = lemma32_conditional_entropy(pin.r, pin.q, Semiring::IntegerProduct);
    Lemma32Report rm = lemma32_conditional_entropy(pin.r, pin.q, Semiring::ModQProduct);
    CHECK(ri.entropy.value_bits == doctest::Approx(pin.integer).epsilon(1e-8));
    CHECK(rm.entropy.value_bits == doctest::Approx(pin.modq).epsilon(1e-8));

    const double bound =
        (1.0 - static_cast<double>(pin.r) * pin.r / static_cast<double>(pin.q)) *
        std::log2(static_cast<double>(pin.q));
    CHECK(ri.bound_bits == doctest::Approx(bound).epsilon(1e-12));
    CHECK(ri.entropy.value_bits >= bound - 1e-9);
    CHECK(rm.entropy.value_bits >= bound - 1e-9);
    CHECK(ri.holds);
    CHECK(rm.holds);
  }

  // r = 1 leaves nothing to condition on besides C itself, and a scalar
  // c is invertible whenever nonzero, so the floor is attained exactly
  Lemma32Report eq = lemma32_conditional_entropy(1, 2, Semiring::IntegerProduct);
  CHECK(eq.entropy.value_bits == doctest::Approx(eq.bound_bits).epsilon(1e-12));
  CHECK(eq.entropy.support_size == 2);
}

TEST_CASE("dropping earlier products from the condition raises the entropy") {
  for (Semiring sr : {Semiring::IntegerProduct, Semiring::ModQProduct}) {
    const int r = 2;
    const std::int64_t q = 3;
    Lemma32Report rep = lemma32_conditional_entropy(r, q, sr);

    // independent tally of H(last product | C alone): enumerate all C and
    // A, group the last row product by C
    ModelParams p{r, r, q, sr};
    double h_given_c = 0;
    std::uint64_t c_states = 0;
    std::uint64_t cq = 1;
    for (int i = 0; i < r * r; ++i) cq *= static_cast<std::uint64_t>(q);
    std::uint64_t aq = 1;
    for (int i = 0; i < r; ++i) aq *= static_cast<std::uint64_t>(q);

    for (std::uint64_t ci = 0; ci < cq; ++ci) {
      std::vector<std::int64_t> c(r * r);
      std::uint64_t t = ci;
      for (int i = r * r - 1; i >= 0; --i) {
        c[i] = static_cast<std::int64_t>(t % q);
        t /= q;
      }
      std::map<std::int64_t, std::uint64_t> tally;
      for (std::uint64_t ai = 0; ai < aq; ++ai) {
        std::vector<std::int64_t> a(r);
        std::uint64_t s = ai;
        for (int i = r - 1; i >= 0; --i) {
          a[i] = static_cast<std::int64_t>(s % q);
          s /= q;
        }
        std::int64_t x = 0;
        for (int k = 0; k < r; ++k) x += c[(r - 1) * r + k] * a[k];
        if (sr == Semiring::ModQProduct) x %= q;
        ++tally[x];
      }
      h_given_c += oracle::entropy_bits(tally);
      ++c_states;
    }
    h_given_c /= static_cast<double>(c_states);

    CHECK(h_given_c >= rep.entropy.value_bits - 1e-12);
  }
}

TEST_CASE("observation entropy: empty, full, and chain behavior") {
  ModelParams p{2, 1, 2, Semiring::IntegerProduct};
  LocationSequence empty{2, {}};
  EntropyReport rep = observation_entropy(p, empty);
  CHECK(rep.value_bits == 0.0);
  CHECK(rep.support_size == 1);

  LocationSequence full{2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  rep = observation_entropy(p, full);
  CHECK(rep.value_bits == doctest::Approx(exact_source_entropy(p).value_bits).epsilon(1e-12));

  // prefix extension never loses information
  double prev = 0;
  LocationSequence locs{2, {}};
  for (auto cell : full.locations) {
    locs.locations.push_back(cell);
    double h = observation_entropy(p, locs).value_bits;
    CHECK(h >= prev - 1e-12);
    // each value lives in [0, r(q-1)^2], so n cells cap the entropy
    CHECK(h <= static_cast<double>(locs.size()) *
                   std::log2(static_cast<double>(entry_range(p).max + 1)) +
                   1e-12);
    prev = h;
  }

  LocationSequence wrong_m{3, {{2, 2}}};
  CHECK_THROWS_AS(observation_entropy(p, wrong_m), ValidationError);
}

TEST_CASE("observation entropy equals an independent tuple tally") {
  for (Semiring sr : {Semiring::IntegerProduct, Semiring::ModQProduct}) {
    ModelParams p{2, 1, 3, sr};
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const int n = static_cast<int>(seed) % 5;
      LocationSequence locs = sample_locations(2, n, SeedSpec{seed, 3});
      std::map<std::vector<std::int64_t>, std::uint64_t> counts;
      oracle::for_each_product(p, [&](const IntMatrix& s) {
        std::vector<std::int64_t> tuple;
        for (auto [i, j] : locs.locations) tuple.push_back(s.at(i, j));
        ++counts[tuple];
      });
      CHECK(observation_entropy(p, locs).value_bits ==
            doctest::Approx(oracle::entropy_bits(counts)).epsilon(1e-12));
    }
  }
}

TEST_CASE("agreement probability is the exact marginal of the observed tuple") {
  ModelParams p{2, 1, 2, Semiring::IntegerProduct};

  Observation empty;
  empty.locs = {2, {}};
  CHECK(agreement_probability(empty, p) == doctest::Approx(1.0).epsilon(1e-15));

  // every subset of at most two cells, every realizable value tuple
  for (int n : {0, 1, 2}) {
    oracle::for_each_subset(2, n, [&](const LocationSequence& locs) {
      std::map<std::vector<std::int64_t>, std::uint64_t> counts;
      std::uint64_t total = 0;
      oracle::for_each_product(p, [&](const IntMatrix& s) {
        std::vector<std::int64_t> tuple;
        for (auto [i, j] : locs.locations) tuple.push_back(s.at(i, j));
        ++counts[tuple];
        ++total;
      });
      for (const auto& [tuple, count] : counts) {
        Observation obs;
        obs.locs = locs;
        obs.values = tuple;
        const double want = static_cast<double>(count) / static_cast<double>(total);
        CHECK(agreement_probability(obs, p) == doctest::Approx(want).epsilon(1e-12));
      }
    });
  }

  // single-cell pins: P(S_00 = 1) = P(u_0 v_0 = 1) = 1/4
  Observation one;
  one.locs = {2, {{0, 0}}};
  one.values = {1};
  CHECK(agreement_probability(one, p) == doctest::Approx(0.25).epsilon(1e-15));
  one.values = {0};
  CHECK(agreement_probability(one, p) == doctest::Approx(0.75).epsilon(1e-15));

  // a rank-2 pattern no source can produce
  Observation impossible;
  impossible.locs = {2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  impossible.values = {1, 1, 1, 0};
  CHECK(agreement_probability(impossible, p) == 0.0);
}

TEST_CASE("fano check: residual entropy against the committed error rate") {
  ModelParams p{1, 1, 2, Semiring::IntegerProduct};

  // nothing observed: H(S) = h2(1/4) and the committed all-zeros guess
  // errs exactly when S = 1, so Fano holds with equality
  FanoCheck chk = fano_verify(p, {1, {}});
  CHECK(chk.pe == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(chk.support_size == 2);
  CHECK(chk.h_s_given_obs_bits == doctest::Approx(binary_entropy_bits(0.25)).epsilon(1e-14));
  CHECK(chk.fano_rhs_bits == doctest::Approx(chk.h_s_given_obs_bits).epsilon(1e-14));
  CHECK(chk.holds);

  // the full observation pins S down
  chk = fano_verify(p, {1, {{0, 0}}});
  CHECK(chk.pe == 0.0);
  CHECK(chk.h_s_given_obs_bits == 0.0);
  CHECK(chk.holds);
}

TEST_CASE("fano holds across every subset of a 2 x 2 model") {
  for (std::int64_t q : {2, 3}) {
    ModelParams p{2, 1, q, Semiring::IntegerProduct};
    for (int n = 0; n <= 4; ++n) {
      oracle::for_each_subset(2, n, [&](const LocationSequence& locs) {
        FanoCheck chk = fano_verify(p, locs);
        CHECK(chk.holds);
        CHECK(chk.h_s_given_obs_bits <= chk.fano_rhs_bits + 1e-9);
        CHECK((0.0 <= chk.pe && chk.pe <= 1.0));
      });
    }
  }
}
