#pragma once

// Command line surface: single-point analysis, parameter sweeps, Monte Carlo
// estimation and the invariant self-check suite. Exit codes: 0 success,
// 1 validation-gate failure, 2 usage or configuration error.

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdfd/io.hpp"
#include "hdfd/validation.hpp"

namespace hdfd {
namespace cli_detail {

struct ConfigFlags {
  std::optional<double> ps_db, ps, pr_db, pr, kr, rsi_var;
  double sigma2 = 1.0;
  double r0 = 3.0;
  std::vector<double> omega{1.0, 1.0, 1.0, 1.0};

  SystemConfig build() const {
    SystemConfig c;
    c.p_s = ps ? *ps : db_to_linear(ps_db.value_or(30.0));
    c.p_r = pr ? *pr : db_to_linear(pr_db.value_or(30.0));
    c.sigma2 = sigma2;
    c.r0 = r0;
    c.channel = {omega[0], omega[1], omega[2], omega[3]};
    // RSI defaults to unit variance, matching the default simulation setup.
    c.k_r = kr ? *kr : rsi_var.value_or(1.0) / c.p_r;
    c.validate();
    return c;
  }

  // Set when the RSI was specified (or defaulted) as a variance: sweeps then
  // hold sigma2_rsi fixed and re-derive k_r per grid point.
  std::optional<double> fixed_rsi_variance() const {
    if (kr) return std::nullopt;
    return rsi_var.value_or(1.0);
  }
};

inline void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  auto* ps_db = cmd->add_option("--ps-db", f.ps_db,
                                "source power, dB relative to unit noise (default 30)");
  auto* ps = cmd->add_option("--ps", f.ps, "source power, linear")->check(CLI::PositiveNumber);
  ps->excludes(ps_db);
  ps_db->excludes(ps);
  auto* pr_db = cmd->add_option("--pr-db", f.pr_db,
                                "relay power, dB relative to unit noise (default 30)");
  auto* pr = cmd->add_option("--pr", f.pr, "relay power, linear")->check(CLI::PositiveNumber);
  pr->excludes(pr_db);
  pr_db->excludes(pr);
  auto* kr = cmd->add_option("--kr", f.kr, "self-interference coefficient k_r")
                 ->check(CLI::NonNegativeNumber);
  auto* rsi = cmd->add_option("--rsi-var", f.rsi_var,
                              "residual self-interference variance k_r * p_r (default 1)")
                  ->check(CLI::NonNegativeNumber);
  kr->excludes(rsi);
  rsi->excludes(kr);
  cmd->add_option("--sigma2", f.sigma2, "noise variance (default 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--r0", f.r0, "minimum data rate, bits/s/Hz (default 3)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--omega", f.omega,
                  "mean squared channel gains: s->ant1,s->ant2,ant1->d,ant2->d")
      ->delimiter(',')
      ->expected(4)
      ->check(CLI::PositiveNumber);
}

struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = nullptr;

  static OutputTarget open(const std::string& path, std::ostream& fallback) {
    OutputTarget t;
    if (path.empty()) {
      t.stream = &fallback;
      return t;
    }
    t.file.open(path, std::ios::binary);
    if (!t.file) throw std::domain_error("--output: cannot open '" + path + "'");
    t.stream = &t.file;
    return t;
  }

  std::ostream& os() { return *stream; }
};

inline Scheme parse_scheme(const std::string& name) {
  if (name == "proposed") return Scheme::Proposed;
  if (name == "traditional") return Scheme::Traditional;
  if (name == "fd_only") return Scheme::FdOnly;
  if (name == "hd_only") return Scheme::HdOnly;
  throw std::domain_error("--schemes: unknown scheme '" + name +
                          "' (expected proposed, traditional, fd_only, hd_only)");
}

inline SweepVariable parse_sweep_variable(const std::string& name) {
  if (name == "pr-db") return SweepVariable::PrDb;
  if (name == "ps-db") return SweepVariable::PsDb;
  if (name == "r0") return SweepVariable::R0;
  if (name == "rsi-var") return SweepVariable::RsiVarDb;
  throw std::domain_error("--var: unknown sweep variable '" + name + "'");
}

// Built-in grid per variable; explicit --from/--to/--step override fields.
inline void default_range(SweepVariable v, double& from, double& to, double& step) {
  switch (v) {
    case SweepVariable::R0:
      from = 0.5;
      to = 6.0;
      step = 0.25;
      break;
    case SweepVariable::RsiVarDb:
      from = -20.0;
      to = 20.0;
      step = 1.0;
      break;
    default:
      from = 0.0;
      to = 40.0;
      step = 1.0;
      break;
  }
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hybrid half/full-duplex relay outage toolkit"};
  app.require_subcommand(1);

  cli_detail::ConfigFlags point_cfg, sweep_cfg, mc_cfg;
  std::string point_format = "json", sweep_format = "csv", mc_format = "json",
              validate_format = "text";
  std::string point_output, sweep_output, mc_output, validate_output;

  CLI::App* point = app.add_subcommand("point", "closed-form outage analysis of one configuration");
  cli_detail::add_config_flags(point, point_cfg);
  point->add_option("--format", point_format)->check(CLI::IsMember({"json", "csv"}));
  point->add_option("--output", point_output, "write to file instead of stdout");

  CLI::App* sweep = app.add_subcommand("sweep", "outage probability across a parameter grid");
  cli_detail::add_config_flags(sweep, sweep_cfg);
  std::string sweep_var = "pr-db";
  std::optional<double> sweep_from, sweep_to, sweep_step;
  std::vector<std::string> scheme_names{"proposed", "traditional", "fd_only", "hd_only"};
  std::uint64_t sweep_mc = 0, sweep_seed = 1;
  unsigned sweep_threads = 0;
  sweep->add_option("--var", sweep_var, "swept variable: pr-db, ps-db, r0, rsi-var")
      ->check(CLI::IsMember({"pr-db", "ps-db", "r0", "rsi-var"}));
  sweep->add_option("--from", sweep_from, "grid start (display units)");
  sweep->add_option("--to", sweep_to, "grid stop (inclusive)");
  sweep->add_option("--step", sweep_step, "grid step")->check(CLI::PositiveNumber);
  sweep->add_option("--schemes", scheme_names, "schemes to tabulate")->delimiter(',');
  sweep->add_option("--mc", sweep_mc, "Monte Carlo samples per grid point (0 = analytic only)");
  sweep->add_option("--seed", sweep_seed, "root seed for the Monte Carlo columns");
  sweep->add_option("--threads", sweep_threads, "worker threads (0 = hardware)");
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--output", sweep_output, "write to file instead of stdout");

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo estimation of one configuration");
  cli_detail::add_config_flags(mc, mc_cfg);
  std::uint64_t mc_n = 1000000, mc_seed = 1;
  unsigned mc_threads = 0;
  mc->add_option("--n", mc_n, "number of fading blocks")->check(CLI::PositiveNumber);
  mc->add_option("--seed", mc_seed, "root seed");
  mc->add_option("--threads", mc_threads, "worker threads (0 = hardware)");
  mc->add_option("--format", mc_format)->check(CLI::IsMember({"json", "csv"}));
  mc->add_option("--output", mc_output, "write to file instead of stdout");

  CLI::App* validate = app.add_subcommand("validate", "run the invariant gate suite");
  ValidationOptions vopts;
  validate->add_option("--grid-size", vopts.partition_configs,
                       "configs for the partition-identity gate (default 1000)")
      ->check(CLI::PositiveNumber);
  validate->add_option("--quad-configs", vopts.quad_configs,
                       "configs for the quadrature gate (default 200)")
      ->check(CLI::PositiveNumber);
  validate->add_option("--mc-configs", vopts.mc_configs,
                       "configs for the Monte Carlo gates (default 20)")
      ->check(CLI::PositiveNumber);
  validate->add_option("--mc-samples", vopts.mc_samples,
                       "Monte Carlo samples per config (0 skips the MC gates)");
  validate->add_option("--seed", vopts.seed, "root seed for the gate grids");
  validate->add_option("--threads", vopts.threads, "worker threads (0 = hardware)");
  validate
      ->add_option("--inject-fault", vopts.fault_injection,
                   "testing aid: bias the closed-form conditionals to prove the gates can fail")
      ->group("");  // hidden from help
  validate->add_option("--format", validate_format)->check(CLI::IsMember({"text", "json"}));
  validate->add_option("--output", validate_output, "write to file instead of stdout");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));

    if (point->parsed()) {
      const SystemConfig c = point_cfg.build();
      auto target = cli_detail::OutputTarget::open(point_output, out);
      const OutageBreakdown b = system_outage(c);
      if (point_format == "json") {
        json j;
        j["config"] = c;
        j["outage"] = b;
        target.os() << j.dump(2) << '\n';
      } else {
        write_breakdown_csv(target.os(), b);
      }
      return 0;
    }

    if (sweep->parsed()) {
      SweepSpec spec;
      spec.variable = cli_detail::parse_sweep_variable(sweep_var);
      cli_detail::default_range(spec.variable, spec.from, spec.to, spec.step);
      if (sweep_from) spec.from = *sweep_from;
      if (sweep_to) spec.to = *sweep_to;
      if (sweep_step) spec.step = *sweep_step;
      spec.base = sweep_cfg.build();
      spec.rsi_variance = sweep_cfg.fixed_rsi_variance();
      spec.mc_samples = sweep_mc;
      spec.seed = sweep_seed;
      spec.threads = sweep_threads;
      spec.schemes.clear();
      for (const auto& name : scheme_names) spec.schemes.push_back(cli_detail::parse_scheme(name));
      spec.validate();

      const auto rows = run_sweep(spec);
      auto target = cli_detail::OutputTarget::open(sweep_output, out);
      if (sweep_format == "csv") {
        write_sweep_csv(target.os(), rows);
      } else {
        write_sweep_json(target.os(), rows);
      }
      return 0;
    }

    if (mc->parsed()) {
      const SystemConfig c = mc_cfg.build();
      const McReport report = mc_estimate(c, mc_n, mc_seed, mc_threads);
      auto target = cli_detail::OutputTarget::open(mc_output, out);
      if (mc_format == "json") {
        json j;
        j["config"] = c;
        j["mc"] = report;
        target.os() << j.dump(2) << '\n';
      } else {
        write_mc_csv(target.os(), report);
      }
      return 0;
    }

    // validate
    const auto results = run_validation(vopts);
    auto target = cli_detail::OutputTarget::open(validate_output, out);
    if (validate_format == "json") {
      json j;
      j["gates"] = results;
      j["all_pass"] = all_passed(results);
      target.os() << j.dump(2) << '\n';
    } else {
      for (const auto& g : results) {
        target.os() << (g.skipped ? "SKIP" : g.pass ? "PASS" : "FAIL") << ' ' << g.name << ": "
                    << g.detail << '\n';
      }
      target.os() << (all_passed(results) ? "all gates passed" : "GATE FAILURE") << '\n';
    }
    return all_passed(results) ? 0 : 1;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace hdfd
