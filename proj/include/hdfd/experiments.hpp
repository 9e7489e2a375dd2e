#pragma once

// Parameter sweeps over transmit powers, target rate and residual
// self-interference, for the proposed scheme, the single-antenna baseline and
// the standalone FD / HD modes, plus the baseline's closed-form outage.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdfd/analytic.hpp"
#include "hdfd/oracle.hpp"
#include "hdfd/units.hpp"

namespace hdfd {

namespace detail {

// Pr{X < s | X < m} for X ~ Exp(lambda), with the same underflow convention
// as the two-gain conditionals.
inline TruncatedSumOutage single_outage_given_below(double lambda, double m, double s) {
  if (m <= s) return {1.0, false};
  const double denom = -std::expm1(-lambda * m);
  if (denom < kConditioningFloor) {
    return {gain_cdf(lambda, s), true};
  }
  return {std::clamp(-std::expm1(-lambda * s) / denom, 0.0, 1.0), false};
}

// Pr{X < s | X > m} = 1 - e^{-lambda (s - m)} by memorylessness; 0 if m >= s.
inline double single_outage_given_above(double lambda, double m, double s) {
  if (!(s > m)) return 0.0;
  return -std::expm1(-lambda * (s - m));
}

}  // namespace detail

// System outage of the baseline scheme whose HD mode keeps one antenna per
// direction. Its HD hops reuse the FD gains g11/g22, so conditioned on each
// FD-failure event the HD hop outages collapse to single-variable
// truncated-exponential probabilities (e.g. under A, g11 < m1 <= m2 already
// implies the HD sr hop fails whenever m1 <= m2).
inline double traditional_outage(const SystemConfig& c) {
  const Thresholds th = compute_thresholds(c);
  const auto events = detail::event_probabilities(c, th);
  const double l11 = c.channel.lambda_11();
  const double l22 = c.channel.lambda_22();

  double acc = 0.0;
  for (const EventTag tag : kEventTags) {
    const double p_sr = tag != EventTag::B
                            ? detail::single_outage_given_below(l11, th.m1, th.m2).p
                            : detail::single_outage_given_above(l11, th.m1, th.m2);
    const double p_rd = tag != EventTag::A
                            ? detail::single_outage_given_below(l22, th.m3, th.m2p).p
                            : detail::single_outage_given_above(l22, th.m3, th.m2p);
    const double p_total = std::clamp(p_sr + p_rd - p_sr * p_rd, 0.0, 1.0);
    acc += events[static_cast<int>(tag)] * p_total;
  }
  return std::clamp(acc, 0.0, 1.0);
}

enum class Scheme { Proposed, Traditional, FdOnly, HdOnly };
enum class SweepVariable { PrDb, PsDb, R0, RsiVarDb };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Proposed: return "proposed";
    case Scheme::Traditional: return "traditional";
    case Scheme::FdOnly: return "fd_only";
    default: return "hd_only";
  }
}

inline const char* sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::PrDb: return "pr_db";
    case SweepVariable::PsDb: return "ps_db";
    case SweepVariable::R0: return "r0";
    default: return "rsi_var";  // swept in dB relative to unit noise
  }
}

struct SweepSpec {
  SweepVariable variable = SweepVariable::PrDb;
  double from = 0.0;  // display units: dB for powers and RSI variance
  double to = 40.0;
  double step = 1.0;
  SystemConfig base;
  // When set, sigma2_rsi is held at this value and k_r is re-derived as
  // sigma2_rsi / p_r at every grid point (ignored while sweeping the RSI
  // variance itself). When unset, base.k_r is held fixed instead.
  std::optional<double> rsi_variance;
  std::uint64_t mc_samples = 0;  // 0: analytic columns only
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes{Scheme::Proposed, Scheme::Traditional, Scheme::FdOnly,
                              Scheme::HdOnly};
  unsigned threads = 0;

  void validate() const {
    if (!(step > 0.0)) throw std::domain_error("sweep step must be positive");
    if (!(from <= to)) throw std::domain_error("sweep range must have from <= to");
    if (schemes.empty()) throw std::domain_error("sweep needs at least one scheme");
    base.validate();
  }
};

struct SweepRow {
  SweepVariable variable = SweepVariable::PrDb;
  double value = 0.0;
  Scheme scheme = Scheme::Proposed;
  double p_analytic = 0.0;
  std::optional<double> p_mc;
  std::optional<double> mc_stderr;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";
};

inline std::vector<double> sweep_grid(const SweepSpec& spec) {
  spec.validate();
  std::vector<double> values;
  for (int i = 0;; ++i) {
    const double v = spec.from + i * spec.step;
    if (v > spec.to + 1e-9 * spec.step) break;
    values.push_back(v);
  }
  return values;
}

inline SystemConfig sweep_config(const SweepSpec& spec, double value) {
  SystemConfig c = spec.base;
  switch (spec.variable) {
    case SweepVariable::PrDb: c.p_r = db_to_linear(value); break;
    case SweepVariable::PsDb: c.p_s = db_to_linear(value); break;
    case SweepVariable::R0: c.r0 = value; break;
    case SweepVariable::RsiVarDb: c.k_r = db_to_linear(value) / c.p_r; break;
  }
  if (spec.variable != SweepVariable::RsiVarDb && spec.rsi_variance) {
    c.k_r = *spec.rsi_variance / c.p_r;
  }
  return c;
}

// One output row per (grid value, scheme). Rows are deterministic for a fixed
// spec: row i's Monte Carlo stream seed is derived from (spec.seed, i).
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const std::vector<double> grid = sweep_grid(spec);
  std::vector<SweepRow> rows;
  rows.reserve(grid.size() * spec.schemes.size());

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SystemConfig c = sweep_config(spec, grid[i]);
    const OutageBreakdown b = system_outage(c);
    const double p_trad = traditional_outage(c);
    const std::string status = b.degenerate_conditioning() ? "degenerate_conditioning" : "ok";

    std::optional<McReport> mc;
    if (spec.mc_samples > 0) {
      mc = mc_estimate(c, spec.mc_samples, SplitMix64::derive_seed(spec.seed, i), spec.threads);
    }

    for (const Scheme scheme : spec.schemes) {
      SweepRow row;
      row.variable = spec.variable;
      row.value = grid[i];
      row.scheme = scheme;
      row.n_samples = spec.mc_samples;
      row.seed = spec.seed;
      row.status = status;
      const McEstimate* est = nullptr;
      switch (scheme) {
        case Scheme::Proposed:
          row.p_analytic = b.p_sys;
          if (mc) est = &mc->p_sys;
          break;
        case Scheme::Traditional:
          row.p_analytic = p_trad;
          if (mc) est = &mc->p_traditional;
          break;
        case Scheme::FdOnly:
          row.p_analytic = b.p_fd;
          if (mc) est = &mc->p_fd;
          break;
        case Scheme::HdOnly:
          row.p_analytic = b.p_hd;
          if (mc) est = &mc->p_hd;
          break;
      }
      if (est) {
        row.p_mc = est->p_hat;
        row.mc_stderr = est->stderr_est;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// Desk-scale default grids: power sweeps 0..40 dB in 1 dB steps, rate sweep
// 0.5..6 bits/s/Hz in 0.25 steps, RSI variance sweep -20..20 dB in 1 dB
// steps. Base point: p_s = p_r = 30 dB over unit noise, r0 = 3, unit channel
// means, RSI variance held at 1 except when swept.
inline SystemConfig default_config() {
  SystemConfig c;
  c.p_s = db_to_linear(30.0);
  c.p_r = db_to_linear(30.0);
  c.sigma2 = 1.0;
  c.r0 = 3.0;
  c.k_r = 1.0 / c.p_r;  // sigma2_rsi = 1
  return c;
}

inline SweepSpec default_relay_power_sweep() {
  SweepSpec s;
  s.variable = SweepVariable::PrDb;
  s.from = 0.0;
  s.to = 40.0;
  s.step = 1.0;
  s.base = default_config();
  s.rsi_variance = 1.0;
  return s;
}

inline SweepSpec default_source_power_sweep() {
  SweepSpec s = default_relay_power_sweep();
  s.variable = SweepVariable::PsDb;
  return s;
}

inline SweepSpec default_rate_sweep() {
  SweepSpec s = default_relay_power_sweep();
  s.variable = SweepVariable::R0;
  s.from = 0.5;
  s.to = 6.0;
  s.step = 0.25;
  return s;
}

inline SweepSpec default_rsi_sweep() {
  SweepSpec s = default_relay_power_sweep();
  s.variable = SweepVariable::RsiVarDb;
  s.from = -20.0;
  s.to = 20.0;
  s.step = 1.0;
  s.rsi_variance.reset();
  return s;
}

}  // namespace hdfd
