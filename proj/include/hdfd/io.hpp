#pragma once

// CSV / JSON rendering. Floating point goes through a 17-significant-digit
// formatter so table values round-trip exactly; identical inputs produce
// byte-identical output.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdfd/experiments.hpp"

namespace hdfd {

using json = nlohmann::ordered_json;

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void to_json(json& j, const Thresholds& t) {
  j = json{{"t1", t.t1}, {"t2", t.t2}, {"m1", t.m1},
           {"m2", t.m2}, {"m2p", t.m2p}, {"m3", t.m3}};
}

inline void to_json(json& j, const ChannelParams& c) {
  j = json{{"omega_11", c.omega_11},
           {"omega_12", c.omega_12},
           {"omega_21", c.omega_21},
           {"omega_22", c.omega_22}};
}

inline void to_json(json& j, const SystemConfig& c) {
  j = json{{"p_s", c.p_s},   {"p_r", c.p_r}, {"sigma2", c.sigma2},
           {"k_r", c.k_r},   {"rsi_variance", c.rsi_variance()},
           {"r0", c.r0},     {"channel", c.channel}};
}

inline void to_json(json& j, const HopConditional& c) {
  j = json{{"p_sr", c.p_sr},
           {"p_rd", c.p_rd},
           {"p_joint", c.p_joint},
           {"p_total", c.p_total},
           {"sr_degenerate", c.sr_degenerate},
           {"rd_degenerate", c.rd_degenerate}};
}

inline void to_json(json& j, const OutageBreakdown& b) {
  j = json{{"p_fd", b.p_fd}, {"p_hd", b.p_hd}, {"p_sys", b.p_sys}};
  json events;
  json cond;
  for (const EventTag tag : kEventTags) {
    const int i = static_cast<int>(tag);
    events[event_name(tag)] = b.pr_event[i];
    cond[event_name(tag)] = b.cond_hd[i];
  }
  j["pr_event"] = events;
  j["cond_hd"] = cond;
  j["thresholds"] = b.thresholds;
  j["degenerate_conditioning"] = b.degenerate_conditioning();
}

inline void to_json(json& j, const McEstimate& e) {
  j = json{{"numer", e.numer}, {"denom", e.denom}};
  if (e.sufficient) {
    j["p_hat"] = e.p_hat;
    j["stderr"] = e.stderr_est;
    j["status"] = "ok";
  } else {
    j["p_hat"] = nullptr;
    j["stderr"] = nullptr;
    j["status"] = "insufficient conditioning samples";
  }
}

inline void to_json(json& j, const McReport& r) {
  j = json{{"n", r.n},
           {"seed", r.seed},
           {"rng", McReport::rng_name()},
           {"p_fd", r.p_fd},
           {"p_hd", r.p_hd},
           {"p_sys", r.p_sys},
           {"p_traditional", r.p_traditional},
           {"p_fd_selected", r.p_fd_selected}};
  json events;
  json cond;
  json cond_sr;
  json cond_rd;
  for (const EventTag tag : kEventTags) {
    const int i = static_cast<int>(tag);
    events[event_name(tag)] = r.pr_event[i];
    cond[event_name(tag)] = r.cond_hd[i];
    cond_sr[event_name(tag)] = r.cond_hd_sr[i];
    cond_rd[event_name(tag)] = r.cond_hd_rd[i];
  }
  j["pr_event"] = events;
  j["cond_hd"] = cond;
  j["cond_hd_sr"] = cond_sr;
  j["cond_hd_rd"] = cond_rd;
}

inline void to_json(json& j, const SweepRow& r) {
  j = json{{"sweep_variable", sweep_variable_name(r.variable)},
           {"value", r.value},
           {"scheme", scheme_name(r.scheme)},
           {"p_analytic", r.p_analytic},
           {"p_mc", r.p_mc ? json(*r.p_mc) : json(nullptr)},
           {"stderr", r.mc_stderr ? json(*r.mc_stderr) : json(nullptr)},
           {"n_samples", r.n_samples},
           {"seed", r.seed},
           {"status", r.status}};
}

inline constexpr const char* kSweepCsvHeader =
    "sweep_variable,value,scheme,p_analytic,p_mc,stderr,n_samples,seed,status";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    os << sweep_variable_name(r.variable) << ',' << fmt17(r.value) << ','
       << scheme_name(r.scheme) << ',' << fmt17(r.p_analytic) << ','
       << (r.p_mc ? fmt17(*r.p_mc) : std::string{}) << ','
       << (r.mc_stderr ? fmt17(*r.mc_stderr) : std::string{}) << ',' << r.n_samples << ','
       << r.seed << ',' << r.status << '\n';
  }
}

inline void write_sweep_json(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << json(rows).dump(2) << '\n';
}

// Flat key,value rendering of a point analysis.
inline void write_breakdown_csv(std::ostream& os, const OutageBreakdown& b) {
  os << "quantity,value\n";
  os << "p_fd," << fmt17(b.p_fd) << '\n';
  os << "p_hd," << fmt17(b.p_hd) << '\n';
  os << "p_sys," << fmt17(b.p_sys) << '\n';
  for (const EventTag tag : kEventTags) {
    const int i = static_cast<int>(tag);
    os << "pr_event_" << event_name(tag) << ',' << fmt17(b.pr_event[i]) << '\n';
    os << "cond_hd_sr_" << event_name(tag) << ',' << fmt17(b.cond_hd[i].p_sr) << '\n';
    os << "cond_hd_rd_" << event_name(tag) << ',' << fmt17(b.cond_hd[i].p_rd) << '\n';
    os << "cond_hd_total_" << event_name(tag) << ',' << fmt17(b.cond_hd[i].p_total) << '\n';
  }
  os << "t1," << fmt17(b.thresholds.t1) << '\n';
  os << "t2," << fmt17(b.thresholds.t2) << '\n';
  os << "m1," << fmt17(b.thresholds.m1) << '\n';
  os << "m2," << fmt17(b.thresholds.m2) << '\n';
  os << "m2p," << fmt17(b.thresholds.m2p) << '\n';
  os << "m3," << fmt17(b.thresholds.m3) << '\n';
  os << "degenerate_conditioning," << (b.degenerate_conditioning() ? 1 : 0) << '\n';
}

inline void write_mc_csv(std::ostream& os, const McReport& r) {
  os << "quantity,p_hat,stderr,numer,denom,status\n";
  const auto row = [&os](const char* name, const McEstimate& e) {
    os << name << ',';
    if (e.sufficient) {
      os << fmt17(e.p_hat) << ',' << fmt17(e.stderr_est) << ',' << e.numer << ',' << e.denom
         << ",ok\n";
    } else {
      os << ",," << e.numer << ',' << e.denom << ",insufficient conditioning samples\n";
    }
  };
  row("p_fd", r.p_fd);
  row("p_hd", r.p_hd);
  row("p_sys", r.p_sys);
  row("p_traditional", r.p_traditional);
  row("p_fd_selected", r.p_fd_selected);
  for (const EventTag tag : kEventTags) {
    const int i = static_cast<int>(tag);
    row((std::string("pr_event_") + event_name(tag)).c_str(), r.pr_event[i]);
    row((std::string("cond_hd_") + event_name(tag)).c_str(), r.cond_hd[i]);
  }
  os << "# n=" << r.n << " seed=" << r.seed << " rng=" << McReport::rng_name() << '\n';
}

}  // namespace hdfd
