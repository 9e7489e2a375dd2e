#pragma once

// Rayleigh block-fading link model. The squared magnitude of a Rayleigh
// channel is exponentially distributed, so the four link gains are modeled as
// independent exponentials with means Omega_ij. This header provides the
// exponential pdf/CDF, the CDF of a sum of two independent exponentials
// (hypoexponential, with the Erlang-2 limit at equal rates) and seeded gain
// sampling.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hdfd/rng.hpp"

namespace hdfd {

struct ChannelParams {
  // Mean squared channel gains, linear scale:
  //   omega_11: source -> relay antenna 1      omega_12: source -> antenna 2
  //   omega_21: relay antenna 1 -> destination omega_22: antenna 2 -> dest
  double omega_11 = 1.0;
  double omega_12 = 1.0;
  double omega_21 = 1.0;
  double omega_22 = 1.0;

  double lambda_11() const { return 1.0 / omega_11; }
  double lambda_12() const { return 1.0 / omega_12; }
  double lambda_21() const { return 1.0 / omega_21; }
  double lambda_22() const { return 1.0 / omega_22; }

  void validate() const {
    check_mean(omega_11, "omega_11");
    check_mean(omega_12, "omega_12");
    check_mean(omega_21, "omega_21");
    check_mean(omega_22, "omega_22");
  }

 private:
  static void check_mean(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::domain_error(std::string(name) + " must be positive and finite");
    }
  }
};

// One block-fading realization of the four squared channel gains.
struct GainSample {
  double g11 = 0.0;
  double g12 = 0.0;
  double g21 = 0.0;
  double g22 = 0.0;
};

namespace detail {

inline void check_rate(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("rate parameter must be positive and finite");
  }
}

inline void check_gain(double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("gain argument must be nonnegative");
  }
}

// int_0^u e^{-d x} dx, continuous through d == 0.
inline double exp_integral(double d, double u) {
  if (d == 0.0) return u;
  return -std::expm1(-d * u) / d;
}

}  // namespace detail

inline double gain_pdf(double lambda, double x) {
  detail::check_rate(lambda);
  detail::check_gain(x);
  return lambda * std::exp(-lambda * x);
}

inline double gain_cdf(double lambda, double x) {
  detail::check_rate(lambda);
  detail::check_gain(x);
  return -std::expm1(-lambda * x);
}

// CDF at x of X + Y with X ~ Exp(lambda_a), Y ~ Exp(lambda_b) independent.
// With lo <= hi the two rates ordered,
//   F(x) = 1 - e^{-lo x} (1 + lo * J),   J = int_0^x e^{-(hi-lo) t} dt,
// which is the hypoexponential form for hi > lo and collapses to the Erlang-2
// form 1 - e^{-lambda x}(1 + lambda x) at hi == lo. The expm1-based J is
// cancellation-free, so no threshold switch between the two regimes is
// needed, and ordering the rates first makes the result exactly symmetric in
// (lambda_a, lambda_b).
inline double sum_gain_cdf(double lambda_a, double lambda_b, double x) {
  detail::check_rate(lambda_a);
  detail::check_rate(lambda_b);
  detail::check_gain(x);
  if (std::isinf(x)) return 1.0;
  const double lo = std::min(lambda_a, lambda_b);
  const double hi = std::max(lambda_a, lambda_b);
  const double j = detail::exp_integral(hi - lo, x);
  const double f = 1.0 - std::exp(-lo * x) * (1.0 + lo * j);
  return std::clamp(f, 0.0, 1.0);
}

// Inverse-CDF exponential draws, one uniform per gain, in the fixed order
// g11, g12, g21, g22. Bit-reproducible for a fixed (seed, counter) stream.
inline GainSample sample_gains(const ChannelParams& params, SplitMix64& rng) {
  params.validate();
  GainSample s;
  s.g11 = -params.omega_11 * std::log1p(-rng.next_unit());
  s.g12 = -params.omega_12 * std::log1p(-rng.next_unit());
  s.g21 = -params.omega_21 * std::log1p(-rng.next_unit());
  s.g22 = -params.omega_22 * std::log1p(-rng.next_unit());
  return s;
}

}  // namespace hdfd
