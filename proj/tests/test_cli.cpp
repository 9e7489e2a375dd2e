#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hdfd/cli.hpp"

using namespace hdfd;
using Catch::Approx;

namespace {

struct CliRun {
  int exit_code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

const std::vector<std::string> kBaselineFlags{"--ps-db", "0",  "--pr-db", "0",     "--sigma2",
                                              "1",       "--kr", "0",     "--r0",  "1",
                                              "--omega", "1,1,1,1"};

std::vector<std::string> with_baseline(std::vector<std::string> front) {
  front.insert(front.end(), kBaselineFlags.begin(), kBaselineFlags.end());
  return front;
}

}  // namespace

TEST_CASE("point command", "[cli]") {
  SECTION("baseline closed forms") {
    const CliRun r = run(with_baseline({"point"}));
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["outage"]["p_fd"].get<double>() == Approx(0.86466471676338731).margin(1e-12));
    CHECK(j["outage"]["p_hd"].get<double>() == Approx(0.96033996517333827).margin(1e-12));
    CHECK(j["outage"]["p_sys"].get<double>() == Approx(0.84731345152672280).margin(1e-12));
    CHECK(j["outage"]["thresholds"]["m1"].get<double>() == Approx(1.0).margin(1e-14));
    CHECK(j["config"]["p_s"].get<double>() == 1.0);
  }

  SECTION("csv rendering") {
    const CliRun r = run(with_baseline({"point", "--format", "csv"}));
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("quantity,value\n", 0) == 0);
    CHECK(r.out.find("p_sys,0.84731345152672") != std::string::npos);
  }

  SECTION("tiny rate sends every probability to zero") {
    const CliRun r = run({"point", "--r0", "0.0000001"});
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["outage"]["p_fd"].get<double>() < 1e-6);
    CHECK(j["outage"]["p_hd"].get<double>() < 1e-6);
    CHECK(j["outage"]["p_sys"].get<double>() < 1e-6);
  }
}

TEST_CASE("usage errors exit with 2 and name the flag", "[cli]") {
  SECTION("no subcommand") {
    const CliRun r = run({});
    CHECK(r.exit_code == 2);
    CHECK(r.out.empty());
  }

  SECTION("unknown flag") {
    const CliRun r = run({"point", "--no-such-flag", "1"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--no-such-flag") != std::string::npos);
    CHECK(r.out.empty());
  }

  SECTION("negative power") {
    const CliRun r = run({"point", "--ps", "-5"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--ps") != std::string::npos);
    CHECK(r.out.empty());
  }

  SECTION("conflicting power parameterizations") {
    const CliRun r = run({"point", "--ps", "2", "--ps-db", "3"});
    CHECK(r.exit_code == 2);
  }

  SECTION("conflicting RSI parameterizations") {
    const CliRun r = run({"point", "--kr", "0.1", "--rsi-var", "1"});
    CHECK(r.exit_code == 2);
  }

  SECTION("wrong omega arity") {
    const CliRun r = run({"point", "--omega", "1,2"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--omega") != std::string::npos);
  }

  SECTION("unknown scheme") {
    const CliRun r = run({"sweep", "--schemes", "proposed,bogus"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("bogus") != std::string::npos);
  }

  SECTION("help exits 0") {
    const CliRun r = run({"--help"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("point") != std::string::npos);
  }
}

TEST_CASE("sweep command", "[cli]") {
  SECTION("relay power grid with two schemes") {
    const CliRun r = run({"sweep", "--var", "pr-db", "--from", "0", "--to", "40", "--step", "1",
                          "--ps-db", "30", "--rsi-var", "1", "--r0", "3", "--schemes",
                          "proposed,traditional"});
    REQUIRE(r.exit_code == 0);
    std::istringstream iss(r.out);
    std::string line;
    REQUIRE(std::getline(iss, line));
    CHECK(line == kSweepCsvHeader);
    int rows = 0;
    double proposed = -1.0;
    while (std::getline(iss, line)) {
      ++rows;
      std::istringstream fields(line);
      std::string var, value, scheme, p;
      std::getline(fields, var, ',');
      std::getline(fields, value, ',');
      std::getline(fields, scheme, ',');
      std::getline(fields, p, ',');
      CHECK(var == "pr_db");
      if (scheme == "proposed") {
        proposed = std::stod(p);
      } else {
        REQUIRE(scheme == "traditional");
        CHECK(proposed <= std::stod(p) + 1e-12);
      }
    }
    CHECK(rows == 82);
  }

  SECTION("hd_only column is flat across the RSI sweep") {
    const CliRun r = run({"sweep", "--var", "rsi-var", "--schemes", "hd_only"});
    REQUIRE(r.exit_code == 0);
    std::istringstream iss(r.out);
    std::string line, first_p;
    std::getline(iss, line);  // header
    int rows = 0;
    while (std::getline(iss, line)) {
      ++rows;
      std::istringstream fields(line);
      std::string var, value, scheme, p;
      std::getline(fields, var, ',');
      std::getline(fields, value, ',');
      std::getline(fields, scheme, ',');
      std::getline(fields, p, ',');
      if (first_p.empty()) {
        first_p = p;
      } else {
        CHECK(p == first_p);  // byte-identical 17-digit rendering
      }
    }
    CHECK(rows == 41);
  }

  SECTION("json format and mc columns") {
    const CliRun r = run({"sweep", "--var", "r0", "--from", "1", "--to", "2", "--step", "0.5",
                          "--schemes", "proposed", "--mc", "20000", "--seed", "9", "--format",
                          "json"});
    REQUIRE(r.exit_code == 0);
    const json rows = json::parse(r.out);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
      CHECK(row["n_samples"] == 20000);
      CHECK(row["seed"] == 9);
      REQUIRE(row["p_mc"].is_number());
      const double gap = std::abs(row["p_mc"].get<double>() - row["p_analytic"].get<double>());
      // all-failure cells estimate stderr 0; their resolution is ~3/n
      CHECK(gap <= std::max(4.0 * row["stderr"].get<double>(), 3.0 / 20000.0) + 1e-15);
    }
  }
}

TEST_CASE("mc command determinism", "[cli]") {
  const std::vector<std::string> base{"mc", "--n", "50000", "--seed", "7"};

  auto with_threads = [&](const char* t) {
    std::vector<std::string> args = base;
    args.push_back("--threads");
    args.push_back(t);
    return run(args);
  };

  const CliRun one = with_threads("1");
  const CliRun four = with_threads("4");
  const CliRun one_again = with_threads("1");
  REQUIRE(one.exit_code == 0);
  CHECK(one.out == four.out);  // byte-identical across worker counts
  CHECK(one.out == one_again.out);

  const json j = json::parse(one.out);
  CHECK(j["mc"]["n"] == 50000);
  CHECK(j["mc"]["seed"] == 7);
  CHECK(j["mc"]["rng"] == "splitmix64");

  SECTION("csv rendering carries the metadata") {
    std::vector<std::string> args = base;
    args.push_back("--format");
    args.push_back("csv");
    const CliRun r = run(args);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("quantity,p_hat,stderr,numer,denom,status") == 0);
    CHECK(r.out.find("seed=7") != std::string::npos);
  }
}

TEST_CASE("output files are byte-identical for identical invocations", "[cli]") {
  const std::string path = "cli_test_sweep_out.csv";
  const std::vector<std::string> args{"sweep",   "--var", "pr-db", "--from",  "0",
                                      "--to",    "10",    "--step", "5",      "--mc",
                                      "10000",   "--seed", "3",     "--output", path};
  const auto slurp = [&] {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
  };
  REQUIRE(run(args).exit_code == 0);
  const std::string first = slurp();
  REQUIRE(run(args).exit_code == 0);
  CHECK(first == slurp());
  CHECK(first.find(kSweepCsvHeader) == 0);
  std::remove(path.c_str());
}

TEST_CASE("dB conversions round-trip", "[cli]") {
  for (double db = -10.0; db <= 40.0; db += 0.5) {
    CHECK(std::abs(linear_to_db(db_to_linear(db)) - db) <= 1e-12);
  }
}

TEST_CASE("validate command", "[cli]") {
  const std::vector<std::string> small{"validate",     "--grid-size", "150",
                                       "--quad-configs", "12",        "--mc-configs",
                                       "3",            "--mc-samples", "40000",
                                       "--seed",       "5"};

  SECTION("clean build passes") {
    const CliRun r = run(small);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("all gates passed") != std::string::npos);
  }

  SECTION("an injected analytic bias is caught and named") {
    std::vector<std::string> args = small;
    args.push_back("--inject-fault");
    args.push_back("1e-4");
    const CliRun r = run(args);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("FAIL quadrature-agreement") != std::string::npos);
  }

  SECTION("quadrature-only validation still runs") {
    const CliRun r = run({"validate", "--grid-size", "100", "--quad-configs", "10",
                          "--mc-samples", "0", "--format", "json"});
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["all_pass"] == true);
    bool saw_skip = false;
    for (const auto& g : j["gates"]) {
      if (g["name"] == "mc-agreement") {
        CHECK(g["skipped"] == true);
        saw_skip = true;
      }
    }
    CHECK(saw_skip);
  }
}
