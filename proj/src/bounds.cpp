#include "itlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>

namespace itlab {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_inputs(const char* fmt, ...) {
  char buf[192];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

double to_bits(double x, LogUnit unit) { return unit == LogUnit::Nats ? x / std::log(2.0) : x; }

double from_nats(double x, LogUnit unit) {
  return unit == LogUnit::Nats ? x : x / std::log(2.0);
}

BoundReport clamp_report(std::string formula, std::string inputs, double raw) {
  BoundReport rep;
  rep.formula = std::move(formula);
  rep.inputs = std::move(inputs);
  rep.clamped = raw < 0;
  rep.bound_value = rep.clamped ? 0 : raw;
  rep.ceil_value = std::ceil(rep.bound_value);
  return rep;
}

}  // namespace

const char* to_string(LogUnit u) { return u == LogUnit::Bits ? "bits" : "nats"; }

LogUnit log_unit_from_string(std::string_view s) {
  if (s == "bits") return LogUnit::Bits;
  if (s == "nats") return LogUnit::Nats;
  throw ValidationError("unknown log unit: " + std::string(s));
}

void ConverseInput::validate() const {
  if (m < 1 || r < 1 || q < 1) throw ValidationError("m, r, q must all be >= 1");
  if (!(pe >= 0 && pe <= 1)) throw ValidationError("pe must lie in [0, 1]");
}

void DistortionInput::validate() const {
  if (m < 1 || r < 1 || q < 1) throw ValidationError("m, r, q must all be >= 1");
  if (!(d_level >= 0)) throw ValidationError("distortion level must be >= 0");
  if (!(delta_slack >= 0)) throw ValidationError("delta slack must be >= 0");
}

BoundReport fano_min_samples(const ConverseInput& inp) {
  inp.validate();
  const std::string inputs =
      fmt_inputs("m=%d r=%d q=%lld pe=%.17g", inp.m, inp.r, static_cast<long long>(inp.q), inp.pe);
  if (inp.q < 2) return clamp_report("fano-converse", inputs, 0);
  const double m = inp.m, r = inp.r, q = static_cast<double>(inp.q);
  const double numerator = m * r * std::log2(q) * (1 - 2 * inp.pe);
  const double denominator = std::log2(r) + 2 * std::log2(q);  // log2(r q^2)
  return clamp_report("fano-converse", inputs, numerator / denominator);
}

BoundReport hamming_rd_min_samples(const DistortionInput& inp) {
  inp.validate();
  const std::string inputs = fmt_inputs("m=%d r=%d q=%lld D=%.17g beta=%.17g delta=%.17g [%s]",
                                        inp.m, inp.r, static_cast<long long>(inp.q), inp.d_level,
                                        inp.beta_exp, inp.delta_slack, to_string(inp.unit));
  const double m = inp.m, r = inp.r, q = static_cast<double>(inp.q);
  const double delta_bits = to_bits(inp.delta_slack, inp.unit);
  if (inp.q < 2) {
    // log q = 0: the source carries at most 0 bits and the bound degenerates.
    const double numerator = 2 * r * m * (0 - delta_bits) -
                             inp.d_level * std::pow(m, inp.beta_exp) * (1 + std::log2(r));
    return clamp_report("hamming-rd", inputs, std::min(numerator, 0.0));
  }
  const double numerator = 2 * r * m * (std::log2(q) - delta_bits) -
                           inp.d_level * std::pow(m, inp.beta_exp) *
                               (1 + std::log2(r) + 2 * std::log2(q));  // log2(2 r q^2)
  const double denominator = std::log2(r) + 2 * std::log2(q);
  return clamp_report("hamming-rd", inputs, numerator / denominator);
}

double hamming_error_entropy_cap(int m, int r, std::int64_t q, double d_level, double beta_exp,
                                 LogUnit unit) {
  if (m < 1 || r < 1 || q < 1) throw ValidationError("m, r, q must all be >= 1");
  if (!(d_level >= 0)) throw ValidationError("distortion level must be >= 0");
  const double cap_bits = d_level * std::pow(static_cast<double>(m), beta_exp) *
                          (1 + std::log2(static_cast<double>(r)) +
                           2 * std::log2(static_cast<double>(q)));
  return unit == LogUnit::Bits ? cap_bits : cap_bits * std::log(2.0);
}

GaussianBoundReport gaussian_rd_info_bound(const DistortionInput& inp) {
  if (inp.m < 1 || inp.r < 1) throw ValidationError("m and r must be >= 1");
  if (!(inp.d_level >= 0)) throw ValidationError("distortion level must be >= 0");
  GaussianBoundReport rep;
  rep.unit = inp.unit;
  rep.inputs = fmt_inputs("m=%d r=%d D=%.17g beta=%.17g hstar=%.17g [%s]", inp.m, inp.r,
                          inp.d_level, inp.beta_exp, inp.h_star, to_string(inp.unit));
  if (inp.d_level == 0) {
    rep.infinite = true;
    rep.variant_paper = std::numeric_limits<double>::infinity();
    rep.variant_derivation = std::numeric_limits<double>::infinity();
    return rep;
  }
  const double h_star_nats = inp.unit == LogUnit::Nats ? inp.h_star : inp.h_star * std::log(2.0);
  const double rm_h = static_cast<double>(inp.r) * static_cast<double>(inp.m) * h_star_nats;
  const double m_beta = std::pow(static_cast<double>(inp.m), inp.beta_exp);
  const double log_term = std::log(2 * kPi * std::exp(1.0) * inp.d_level);
  const double paper_nats = rm_h - m_beta * log_term;
  const double derivation_nats = rm_h - (m_beta / 2) * log_term;
  rep.clamped_paper = paper_nats < 0;
  rep.clamped_derivation = derivation_nats < 0;
  rep.variant_paper = rep.clamped_paper ? 0 : from_nats(paper_nats, inp.unit);
  rep.variant_derivation = rep.clamped_derivation ? 0 : from_nats(derivation_nats, inp.unit);
  return rep;
}

}  // namespace itlab
