#pragma once

// Closed-form outage probabilities of the hybrid HD/FD scheme: standalone FD
// and HD outage, the split of the FD outage into the three disjoint
// per-hop-failure events, the conditional HD outage under each event, and the
// assembled system outage
//
//   p_sys = sum_e Pr{e} * Pr{HD fails | e}.
//
// The conditioning events constrain only g11 and g22, the HD hop sums add
// g12 / g21 on top, so every conditional reduces to a truncated-exponential
// convolution in one variable.

#include <algorithm>
#include <array>
#include <cmath>

#include "hdfd/modes.hpp"

namespace hdfd {

// Disjoint ways the FD mode fails: source-relay hop only (A), relay-dest hop
// only (B), both hops (C).
enum class EventTag { A = 0, B = 1, C = 2 };
enum class Hop { SourceRelay, RelayDest };

inline constexpr std::array<EventTag, 3> kEventTags{EventTag::A, EventTag::B, EventTag::C};

inline const char* event_name(EventTag t) {
  switch (t) {
    case EventTag::A: return "A";
    case EventTag::B: return "B";
    default: return "C";
  }
}

struct HopConditional {
  double p_sr = 0.0;     // Pr{HD sr hop fails | event}
  double p_rd = 0.0;     // Pr{HD rd hop fails | event}
  double p_joint = 0.0;  // product of the two, the hops being independent
  double p_total = 0.0;  // inclusion-exclusion, clamped to [0, 1]
  bool sr_degenerate = false;  // conditioning probability underflowed; the
  bool rd_degenerate = false;  // unconditional hop outage is reported instead
};

struct OutageBreakdown {
  double p_fd = 0.0;
  double p_hd = 0.0;
  double p_sys = 0.0;
  std::array<double, 3> pr_event{};
  std::array<HopConditional, 3> cond_hd{};
  Thresholds thresholds{};

  bool degenerate_conditioning() const {
    for (const auto& c : cond_hd) {
      if (c.sr_degenerate || c.rd_degenerate) return true;
    }
    return false;
  }
};

namespace detail {

inline constexpr double kConditioningFloor = 1e-300;

// alpha * int_0^u e^{-alpha x} e^{-beta (s - x)} dx for 0 <= u <= s: the
// cross term of the truncated convolution below. Two algebraically equal
// forms: an expm1 form that is cancellation-free while |alpha-beta|*u is
// small, and a factored form whose exponents are all nonpositive so nothing
// overflows when |alpha-beta|*u is large.
inline double truncated_cross_term(double alpha, double beta, double u, double s) {
  const double d = alpha - beta;
  if (std::abs(d) * u < 0.5) {
    return alpha * std::exp(-beta * s) * exp_integral(d, u);
  }
  return alpha * (std::exp(-beta * s) - std::exp(-beta * (s - u) - alpha * u)) / d;
}

struct TruncatedSumOutage {
  double p = 0.0;
  bool degenerate = false;
};

// Pr{X + Y < s | X < m} for independent X ~ Exp(alpha), Y ~ Exp(beta):
//   [ F_alpha(min(m,s)) - alpha int_0^{min(m,s)} e^{-alpha x} e^{-beta(s-x)} dx ]
//   / F_alpha(m).
// If the conditioning probability F_alpha(m) underflows, the unconditional
// Pr{X + Y < s} is reported and flagged; callers weigh the value by the
// matching (vanishing) event probability, so the system outage is unaffected
// while NaNs are kept out.
inline TruncatedSumOutage sum_outage_given_below(double alpha, double beta, double m,
                                                 double s) {
  const double denom = -std::expm1(-alpha * m);
  if (denom < kConditioningFloor) {
    return {sum_gain_cdf(alpha, beta, s), true};
  }
  const double u = std::min(m, s);
  const double numer = -std::expm1(-alpha * u) - truncated_cross_term(alpha, beta, u, s);
  return {std::clamp(numer / denom, 0.0, 1.0), false};
}

// Pr{X + Y < s | X > m}: X - m is again Exp(alpha) by memorylessness, so this
// equals Pr{X + Y < s - m} unconditionally, and 0 once m >= s. No division,
// so the result stays exact even when Pr{X > m} underflows.
inline double sum_outage_given_above(double alpha, double beta, double m, double s) {
  if (!(s > m)) return 0.0;
  return sum_gain_cdf(alpha, beta, s - m);
}

// Pr{FD sr hop fails} and Pr{FD rd hop fails}; the events are products of
// these two marginals and their complements.
inline std::array<double, 3> event_probabilities(const SystemConfig& c, const Thresholds& th) {
  const double f_sr = -std::expm1(-c.channel.lambda_11() * th.m1);
  const double f_rd = -std::expm1(-c.channel.lambda_22() * th.m3);
  return {f_sr * (1.0 - f_rd), (1.0 - f_sr) * f_rd, f_sr * f_rd};
}

inline HopConditional conditional_hd_outage(const SystemConfig& c, const Thresholds& th,
                                            EventTag tag) {
  const double l11 = c.channel.lambda_11();
  const double l12 = c.channel.lambda_12();
  const double l21 = c.channel.lambda_21();
  const double l22 = c.channel.lambda_22();

  // A and C condition on g11 < m1, B on g11 > m1; A conditions on g22 > m3,
  // B and C on g22 < m3.
  HopConditional out;
  if (tag != EventTag::B) {
    const auto r = sum_outage_given_below(l11, l12, th.m1, th.m2);
    out.p_sr = r.p;
    out.sr_degenerate = r.degenerate;
  } else {
    out.p_sr = sum_outage_given_above(l11, l12, th.m1, th.m2);
  }
  if (tag != EventTag::A) {
    const auto r = sum_outage_given_below(l22, l21, th.m3, th.m2p);
    out.p_rd = r.p;
    out.rd_degenerate = r.degenerate;
  } else {
    out.p_rd = sum_outage_given_above(l22, l21, th.m3, th.m2p);
  }
  out.p_joint = out.p_sr * out.p_rd;
  out.p_total = std::clamp(out.p_sr + out.p_rd - out.p_joint, 0.0, 1.0);
  return out;
}

}  // namespace detail

// Pr{C_fd < r0}: both FD hops must clear their thresholds.
inline double fd_outage(const SystemConfig& c) {
  const Thresholds th = compute_thresholds(c);
  return -std::expm1(-(c.channel.lambda_11() * th.m1 + c.channel.lambda_22() * th.m3));
}

// Pr{C_hd < r0}: per-hop failure probabilities are hypoexponential CDFs of
// the antenna-gain sums; combined by inclusion-exclusion.
inline double hd_outage(const SystemConfig& c) {
  const Thresholds th = compute_thresholds(c);
  const double f_sr = sum_gain_cdf(c.channel.lambda_11(), c.channel.lambda_12(), th.m2);
  const double f_rd = sum_gain_cdf(c.channel.lambda_21(), c.channel.lambda_22(), th.m2p);
  return std::clamp(f_sr + f_rd - f_sr * f_rd, 0.0, 1.0);
}

inline double event_probability(EventTag tag, const SystemConfig& c) {
  const Thresholds th = compute_thresholds(c);
  return detail::event_probabilities(c, th)[static_cast<int>(tag)];
}

inline HopConditional conditional_hd_outage(EventTag tag, const SystemConfig& c) {
  const Thresholds th = compute_thresholds(c);
  return detail::conditional_hd_outage(c, th, tag);
}

inline OutageBreakdown system_outage(const SystemConfig& c) {
  OutageBreakdown b;
  b.thresholds = compute_thresholds(c);
  b.p_fd = fd_outage(c);
  b.p_hd = hd_outage(c);
  b.pr_event = detail::event_probabilities(c, b.thresholds);
  double acc = 0.0;
  for (const EventTag tag : kEventTags) {
    const int i = static_cast<int>(tag);
    b.cond_hd[i] = detail::conditional_hd_outage(c, b.thresholds, tag);
    acc += b.pr_event[i] * b.cond_hd[i].p_total;
  }
  b.p_sys = std::clamp(acc, 0.0, 1.0);
  return b;
}

}  // namespace hdfd
