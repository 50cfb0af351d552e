#pragma once

#include <cstdint>
#include <string>

#include "itlab/decoder.hpp"
#include "itlab/model.hpp"
#include "itlab/sampling.hpp"

namespace itlab {

/// An exactly computed entropy in bits, with the support size of the
/// tallied variable. Always 0 <= value_bits <= log2(support_size).
struct EntropyReport {
  double value_bits = 0;
  std::uint64_t support_size = 0;
  bool exact = true;
  std::string method;
};

struct ConditionalSourceEntropy {
  double h_total_bits = 0;             // H(UV | V)
  double h_given_fullrank_v_bits = 0;  // mean of H(UV | V=v) over full-rank v
  double prob_v_fullrank = 0;
};

/// H(C_r A | C_1 A, ..., C_{r-1} A, C) for uniform C in Z_q^{r x r} and
/// uniform A in Z_q^r, with C_i the i-th row of C, compared against the
/// closed-form floor (1 - r^2/q) log2 q. The floor may be negative, in
/// which case holds is vacuous.
struct Lemma32Report {
  EntropyReport entropy;
  double bound_bits = 0;
  bool holds = false;
};

struct FanoCheck {
  double h_s_given_obs_bits = 0;
  double pe = 0;                   // committed-estimator error probability
  std::uint64_t support_size = 0;  // distinct product matrices of the model
  double fano_rhs_bits = 0;        // h2(pe) + pe * log2(support_size - 1)
  bool holds = false;
};

/// -p log2 p - (1-p) log2(1-p), with 0 log 0 = 0.
double binary_entropy_bits(double p);

/// Rank of an integer matrix: over the rationals for IntegerProduct,
/// over Z_q for ModQProduct (q prime).
int matrix_rank(const IntMatrix& mat, const ModelParams& params);

/// H(S) of the induced distribution over product matrices, tallied over
/// all q^{2rm} factor pairs. support_size counts distinct products; the
/// factor-pair count is echoed in method.
EntropyReport exact_source_entropy(const ModelParams& params,
                                   std::uint64_t budget = kDefaultEnumBudget);

/// Exact H(UV|V), the same conditioned on full-rank V only, and the
/// probability that V is full rank. For every full-rank v the map
/// u -> uv is injective, so h_given_fullrank_v_bits = mr log2 q.
ConditionalSourceEntropy conditional_source_entropy_given_v(
    const ModelParams& params, std::uint64_t budget = kDefaultEnumBudget);

Lemma32Report lemma32_conditional_entropy(int r, std::int64_t q, Semiring semiring,
                                          std::uint64_t budget = kDefaultEnumBudget);

/// Entropy of the value tuple revealed at locs, tallied over all factor
/// pairs. Empty locs give 0 bits.
EntropyReport observation_entropy(const ModelParams& params, const LocationSequence& locs,
                                  std::uint64_t budget = kDefaultEnumBudget);

/// Pr over a fresh uniform factor pair that its product matches obs at
/// every observed cell; exactly the marginal probability of obs.values
/// at obs.locs.
double agreement_probability(const Observation& obs, const ModelParams& params,
                             std::uint64_t budget = kDefaultEnumBudget);

/// Exact H(S | values at locs) together with the exact error probability
/// of the committed decoder (lexicographically least consistent matrix)
/// on this location set, checked against the full Fano bound.
FanoCheck fano_verify(const ModelParams& params, const LocationSequence& locs,
                      std::uint64_t budget = kDefaultEnumBudget);

}  // namespace itlab
