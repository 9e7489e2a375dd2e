#pragma once

// Independent verification engines for the closed forms: a seeded Monte Carlo
// simulation of the per-block protocol and an adaptive-quadrature evaluation
// of the conditional outage integrals. Neither path reuses the assembled
// closed-form expressions it is meant to check.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hdfd/analytic.hpp"
#include "hdfd/quadrature.hpp"

namespace hdfd {

// A conditional estimate whose conditioning count falls below this floor is
// reported as insufficient instead of as a noisy ratio.
inline constexpr std::uint64_t kMinConditioningCount = 100;

struct McEstimate {
  double p_hat = 0.0;
  double stderr_est = 0.0;  // sqrt(p(1-p)/denom)
  std::uint64_t numer = 0;
  std::uint64_t denom = 0;
  bool sufficient = true;
};

struct McCounters {
  std::uint64_t fd_out = 0;
  std::uint64_t hd_out = 0;
  std::uint64_t sys_out = 0;       // fd_out && hd_out
  std::uint64_t trad_hd_out = 0;   // single-antenna HD
  std::uint64_t trad_sys_out = 0;  // fd_out && trad_hd_out
  std::uint64_t fd_selected = 0;   // c_fd >= c_hd
  std::array<std::uint64_t, 3> event{};         // disjoint; sum == fd_out
  std::array<std::uint64_t, 3> event_hd_out{};  // HD outage within each event
  std::array<std::uint64_t, 3> event_sr_out{};  // HD sr hop outage within event
  std::array<std::uint64_t, 3> event_rd_out{};

  McCounters& operator+=(const McCounters& o) {
    fd_out += o.fd_out;
    hd_out += o.hd_out;
    sys_out += o.sys_out;
    trad_hd_out += o.trad_hd_out;
    trad_sys_out += o.trad_sys_out;
    fd_selected += o.fd_selected;
    for (int i = 0; i < 3; ++i) {
      event[i] += o.event[i];
      event_hd_out[i] += o.event_hd_out[i];
      event_sr_out[i] += o.event_sr_out[i];
      event_rd_out[i] += o.event_rd_out[i];
    }
    return *this;
  }
};

struct McReport {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  McEstimate p_fd;
  McEstimate p_hd;
  McEstimate p_sys;
  McEstimate p_traditional;  // system outage of the single-antenna baseline
  McEstimate p_fd_selected;
  std::array<McEstimate, 3> pr_event{};
  std::array<McEstimate, 3> cond_hd{};  // ratio estimators on the event count
  std::array<McEstimate, 3> cond_hd_sr{};
  std::array<McEstimate, 3> cond_hd_rd{};
  McCounters counters;

  static constexpr const char* rng_name() { return SplitMix64::name(); }
};

namespace detail {

inline McEstimate binomial_estimate(std::uint64_t numer, std::uint64_t denom,
                                    std::uint64_t min_denom = 1) {
  McEstimate e;
  e.numer = numer;
  e.denom = denom;
  if (denom < min_denom) {
    e.sufficient = false;
    e.p_hat = std::numeric_limits<double>::quiet_NaN();
    e.stderr_est = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  e.p_hat = static_cast<double>(numer) / static_cast<double>(denom);
  e.stderr_est = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(denom));
  return e;
}

// Sample i draws the four gains from stream positions 4i..4i+3, so the result
// of a run depends only on (seed, n), not on how [0, n) is chunked.
inline McCounters mc_chunk(const SystemConfig& c, const Thresholds& th, std::uint64_t seed,
                           std::uint64_t lo, std::uint64_t hi) {
  const double fd_relay_scale = c.p_s / (c.k_r * c.p_r + c.sigma2);
  const double fd_dest_scale = c.p_r / c.sigma2;
  const double hd_relay_scale = c.p_s / c.sigma2;
  const double hd_dest_scale = c.p_r / c.sigma2;

  McCounters k;
  for (std::uint64_t i = lo; i < hi; ++i) {
    SplitMix64 rng(seed, 4 * i);
    const GainSample g = sample_gains(c.channel, rng);

    // All outage indicators live in the gain domain; each comparison is a
    // strictly monotone transform of the matching capacity comparison.
    const bool fd_sr_fail = g.g11 < th.m1;
    const bool fd_rd_fail = g.g22 < th.m3;
    const bool fd_fail = fd_sr_fail || fd_rd_fail;
    const bool hd_sr_fail = g.g11 + g.g12 < th.m2;
    const bool hd_rd_fail = g.g21 + g.g22 < th.m2p;
    const bool hd_fail = hd_sr_fail || hd_rd_fail;
    const bool trad_hd_fail = g.g11 < th.m2 || g.g22 < th.m2p;

    k.fd_out += fd_fail;
    k.hd_out += hd_fail;
    k.sys_out += fd_fail && hd_fail;
    k.trad_hd_out += trad_hd_fail;
    k.trad_sys_out += fd_fail && trad_hd_fail;

    // c_fd >= c_hd  <=>  (1 + min_f)^2 >= 1 + min_h
    const double min_f = std::min(g.g11 * fd_relay_scale, g.g22 * fd_dest_scale);
    const double min_h =
        std::min((g.g11 + g.g12) * hd_relay_scale, (g.g21 + g.g22) * hd_dest_scale);
    k.fd_selected += min_f * (min_f + 2.0) >= min_h;

    if (fd_fail) {
      const int e = fd_sr_fail ? (fd_rd_fail ? 2 : 0) : 1;  // A, B or C
      k.event[e] += 1;
      k.event_hd_out[e] += hd_fail;
      k.event_sr_out[e] += hd_sr_fail;
      k.event_rd_out[e] += hd_rd_fail;
    }
  }
  return k;
}

}  // namespace detail

// Estimates every outage probability and event/conditional probability from
// n simulated fading blocks. Deterministic for fixed (seed, n) regardless of
// the worker count: counters are integers and sample streams are
// counter-based.
inline McReport mc_estimate(const SystemConfig& c, std::uint64_t n, std::uint64_t seed,
                            unsigned threads = 0) {
  c.validate();
  if (n < 1) throw std::domain_error("mc_estimate: n must be >= 1");
  const Thresholds th = compute_thresholds(c);

  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  if (workers > n) workers = static_cast<unsigned>(n);

  std::vector<McCounters> parts(workers);
  if (workers == 1) {
    parts[0] = detail::mc_chunk(c, th, seed, 0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = n * w / workers;
      const std::uint64_t hi = n * (w + 1) / workers;
      pool.emplace_back([&, w, lo, hi] { parts[w] = detail::mc_chunk(c, th, seed, lo, hi); });
    }
    for (auto& t : pool) t.join();
  }

  McCounters total;
  for (const auto& p : parts) total += p;

  McReport r;
  r.n = n;
  r.seed = seed;
  r.counters = total;
  r.p_fd = detail::binomial_estimate(total.fd_out, n);
  r.p_hd = detail::binomial_estimate(total.hd_out, n);
  r.p_sys = detail::binomial_estimate(total.sys_out, n);
  r.p_traditional = detail::binomial_estimate(total.trad_sys_out, n);
  r.p_fd_selected = detail::binomial_estimate(total.fd_selected, n);
  for (int i = 0; i < 3; ++i) {
    r.pr_event[i] = detail::binomial_estimate(total.event[i], n);
    r.cond_hd[i] =
        detail::binomial_estimate(total.event_hd_out[i], total.event[i], kMinConditioningCount);
    r.cond_hd_sr[i] =
        detail::binomial_estimate(total.event_sr_out[i], total.event[i], kMinConditioningCount);
    r.cond_hd_rd[i] =
        detail::binomial_estimate(total.event_rd_out[i], total.event[i], kMinConditioningCount);
  }
  return r;
}

// Conditional per-hop HD failure probability evaluated by quadrature: the
// partner-gain integral is an exponential CDF in closed form, leaving a 1D
// integral of the truncated conditioning density. Independent of the
// assembled closed forms in analytic.hpp.
inline QuadResult quad_conditional(EventTag tag, Hop hop, const SystemConfig& c,
                                   double abs_tol = 1e-10) {
  const Thresholds th = compute_thresholds(c);
  double alpha, beta, m, s;
  bool below;
  if (hop == Hop::SourceRelay) {
    alpha = c.channel.lambda_11();
    beta = c.channel.lambda_12();
    m = th.m1;
    s = th.m2;
    below = tag != EventTag::B;
  } else {
    alpha = c.channel.lambda_22();
    beta = c.channel.lambda_21();
    m = th.m3;
    s = th.m2p;
    below = tag != EventTag::A;
  }

  const auto partner_cdf = [beta](double w) { return w > 0.0 ? gain_cdf(beta, w) : 0.0; };
  // The integrand is bounded by alpha e^{-alpha x}, so the tail beyond
  // 40/alpha contributes at most e^{-40}, far below the tolerance; clipping
  // there keeps the adaptive rule from sampling past the decay and declaring
  // a huge interval all-zero.
  const auto clip = [alpha](double upper) { return std::min(upper, 40.0 / alpha); };

  if (below) {
    const double denom = -std::expm1(-alpha * m);
    if (denom < detail::kConditioningFloor) {
      // matches the closed-form convention: unconditional hop outage
      return integrate([&](double x) { return alpha * std::exp(-alpha * x) * partner_cdf(s - x); },
                       0.0, clip(s), abs_tol);
    }
    const double u = std::min(m, s);
    return integrate(
        [&](double x) { return alpha * std::exp(-alpha * x) / denom * partner_cdf(s - x); }, 0.0,
        clip(u), abs_tol);
  }

  if (!(s > m)) {
    QuadResult r;
    r.converged = true;  // conditioning gain already exceeds the sum threshold
    return r;
  }
  // Truncated-above density alpha e^{-alpha (x - m)} on [m, inf), shifted to
  // the origin so the underflowing normalization e^{-alpha m} cancels.
  return integrate(
      [&](double x) { return alpha * std::exp(-alpha * x) * partner_cdf(s - m - x); }, 0.0,
      clip(s - m), abs_tol);
}

}  // namespace hdfd
