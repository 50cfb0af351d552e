#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "itlab/model.hpp"

namespace itlab {

enum class LogUnit { Bits, Nats };

const char* to_string(LogUnit u);
LogUnit log_unit_from_string(std::string_view s);

/// Inputs to the lossless sample-count bound
/// n >= (mr log q - pe 2rm log q) / log(rq^2).
struct ConverseInput {
  int m = 1;
  int r = 1;
  std::int64_t q = 2;
  double pe = 0;

  void validate() const;
};

/// Inputs to the distortion bounds. d_level is the per-matrix distortion
/// budget D in D*m^beta; delta_slack is the entropy slack in
/// 2rm(log q - delta), interpreted in `unit`; h_star is the differential
/// entropy rate of the continuous source, also in `unit`.
struct DistortionInput {
  int m = 1;
  int r = 1;
  std::int64_t q = 2;
  double d_level = 0;
  double beta_exp = 1;
  double delta_slack = 0;
  double h_star = 0;
  LogUnit unit = LogUnit::Nats;

  void validate() const;
};

/// A sample-count lower bound. The raw formula value is clamped at 0;
/// clamped records whether that happened. Sample counts are ratios of
/// logarithms and therefore base-independent.
struct BoundReport {
  std::string formula;
  std::string inputs;
  double bound_value = 0;
  double ceil_value = 0;
  bool clamped = false;
};

/// The squared-error information bound in two variants: the headline form
/// rm*h - m^beta*log(2*pi*e*D), and the form the max-entropy step
/// h(f) <= (m^beta/2) log(2*pi*e*sigma^2) actually yields. The two differ
/// by a factor of 2 on the m^beta term; both are reported so the
/// discrepancy stays visible.
struct GaussianBoundReport {
  std::string formula = "gaussian-rd";
  std::string inputs;
  double variant_paper = 0;
  double variant_derivation = 0;
  bool clamped_paper = false;
  bool clamped_derivation = false;
  bool infinite = false;  // d_level == 0: exact reconstruction regime
  LogUnit unit = LogUnit::Nats;
};

/// max(0, mr log q (1 - 2 pe) / log(rq^2)), the minimum sample count
/// implied by the lossless converse chain. q = 1 carries no information
/// and yields 0.
BoundReport fano_min_samples(const ConverseInput& inp);

/// max(0, (2rm(log q - delta) - D m^beta log(2rq^2)) / log(rq^2)), the
/// Hamming-distortion sample-count bound.
BoundReport hamming_rd_min_samples(const DistortionInput& inp);

/// D m^beta log(2rq^2), the maximum-entropy cap on the Hamming error
/// matrix, in the chosen unit.
double hamming_error_entropy_cap(int m, int r, std::int64_t q, double d_level, double beta_exp,
                                 LogUnit unit = LogUnit::Bits);

/// Both variants of the continuous-source information bound, in
/// inp.unit. d_level = 0 sets the infinite flag (exact reconstruction of
/// a continuous source), d_level < 0 is invalid.
GaussianBoundReport gaussian_rd_info_bound(const DistortionInput& inp);

}  // namespace itlab
