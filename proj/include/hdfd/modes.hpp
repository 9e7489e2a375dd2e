#pragma once

// Per-realization physics: decision thresholds, FD and HD SINRs,
// instantaneous capacities and the hybrid mode-selection rule.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hdfd/channel.hpp"

namespace hdfd {

struct SystemConfig {
  double p_s = 1.0;     // source transmit power, linear
  double p_r = 1.0;     // relay transmit power, linear
  double sigma2 = 1.0;  // noise variance, linear
  double k_r = 0.0;     // residual self-interference coefficient
  double r0 = 1.0;      // minimum data rate, bits/s/Hz
  ChannelParams channel;

  double rsi_variance() const { return k_r * p_r; }

  void validate() const {
    check_positive(p_s, "p_s");
    check_positive(p_r, "p_r");
    check_positive(sigma2, "sigma2");
    check_positive(r0, "r0");
    if (!(k_r >= 0.0) || !std::isfinite(k_r)) {
      throw std::domain_error("k_r must be nonnegative and finite");
    }
    channel.validate();
  }

 private:
  static void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::domain_error(std::string(name) + " must be positive and finite");
    }
  }
};

// t1/t2 are the SINR thresholds of the FD and HD mode (t2 = t1^2 + 2 t1); the
// m* constants map them into the gain domain:
//   FD fails on {g11 < m1} u {g22 < m3},
//   HD fails on {g11 + g12 < m2} u {g21 + g22 < m2p}.
struct Thresholds {
  double t1 = 0.0;
  double t2 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double m2p = 0.0;
  double m3 = 0.0;
};

inline Thresholds compute_thresholds(const SystemConfig& c) {
  c.validate();
  Thresholds th;
  th.t1 = std::expm1(c.r0 * std::numbers::ln2);        // 2^r0 - 1
  th.t2 = std::expm1(2.0 * c.r0 * std::numbers::ln2);  // 4^r0 - 1
  th.m1 = th.t1 * (c.k_r * c.p_r + c.sigma2) / c.p_s;
  th.m2 = th.t2 * c.sigma2 / c.p_s;
  th.m2p = th.t2 * c.sigma2 / c.p_r;
  th.m3 = th.t1 * c.sigma2 / c.p_r;
  return th;
}

struct FdSinr {
  double relay = 0.0;  // at the relay, degraded by the residual self-interference
  double dest = 0.0;
};

struct HdSinr {
  double relay = 0.0;
  double dest = 0.0;
};

inline FdSinr fd_sinr(const GainSample& g, const SystemConfig& c) {
  return {g.g11 * c.p_s / (c.k_r * c.p_r + c.sigma2), g.g22 * c.p_r / c.sigma2};
}

// MRC at the relay / MRT towards the destination: per-hop SINR is the sum of
// the per-antenna gains. No self-interference term in either hop.
inline HdSinr hd_sinr(const GainSample& g, const SystemConfig& c) {
  return {(g.g11 + g.g12) * c.p_s / c.sigma2, (g.g21 + g.g22) * c.p_r / c.sigma2};
}

// Baseline HD variant that keeps one antenna per direction (no combining):
// only g11 and g22 enter.
inline HdSinr hd_sinr_single_antenna(const GainSample& g, const SystemConfig& c) {
  return {g.g11 * c.p_s / c.sigma2, g.g22 * c.p_r / c.sigma2};
}

enum class Mode { FD, HD };

struct ModeDecision {
  double c_fd = 0.0;  // bits/s/Hz
  double c_hd = 0.0;
  Mode selected = Mode::FD;
  bool outage = false;
};

inline double log2_1p(double x) { return std::log2(1.0 + x); }

inline ModeDecision make_decision(double c_fd, double c_hd, double r0) {
  ModeDecision d;
  d.c_fd = c_fd;
  d.c_hd = c_hd;
  d.selected = c_fd >= c_hd ? Mode::FD : Mode::HD;  // ties go to FD
  d.outage = std::max(c_fd, c_hd) < r0;             // boundary is non-outage
  return d;
}

// C_fd = log2(1 + min SINR); C_hd pays the half-slot prefactor 1/2.
inline ModeDecision capacities(const GainSample& g, const SystemConfig& c) {
  const FdSinr f = fd_sinr(g, c);
  const HdSinr h = hd_sinr(g, c);
  return make_decision(log2_1p(std::min(f.relay, f.dest)),
                       0.5 * log2_1p(std::min(h.relay, h.dest)), c.r0);
}

inline ModeDecision capacities_single_antenna_hd(const GainSample& g, const SystemConfig& c) {
  const FdSinr f = fd_sinr(g, c);
  const HdSinr h = hd_sinr_single_antenna(g, c);
  return make_decision(log2_1p(std::min(f.relay, f.dest)),
                       0.5 * log2_1p(std::min(h.relay, h.dest)), c.r0);
}

}  // namespace hdfd
