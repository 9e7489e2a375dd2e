#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hdfd/modes.hpp"

using namespace hdfd;
using Catch::Approx;

namespace {

SystemConfig unit_config(double r0 = 1.0, double k_r = 0.0) {
  SystemConfig c;
  c.p_s = 1.0;
  c.p_r = 1.0;
  c.sigma2 = 1.0;
  c.k_r = k_r;
  c.r0 = r0;
  return c;
}

GainSample gains(double g11, double g12, double g21, double g22) {
  return {g11, g12, g21, g22};
}

}  // namespace

TEST_CASE("threshold constants", "[modes]") {
  SECTION("unit case") {
    const Thresholds th = compute_thresholds(unit_config(1.0));
    CHECK(th.t1 == Approx(1.0).margin(1e-15));
    CHECK(th.t2 == Approx(3.0).margin(1e-15));
    CHECK(th.m1 == Approx(1.0).margin(1e-15));
    CHECK(th.m2 == Approx(3.0).margin(1e-15));
    CHECK(th.m2p == Approx(3.0).margin(1e-15));
    CHECK(th.m3 == Approx(1.0).margin(1e-15));
  }

  SECTION("vanishing rate sends every threshold to zero") {
    SystemConfig c = unit_config(1e-12);
    const Thresholds th = compute_thresholds(c);
    CHECK(th.t1 < 1e-11);
    CHECK(th.t2 < 1e-11);
    CHECK(th.m1 < 1e-11);
    CHECK(th.m2 < 1e-11);
    CHECK(th.m2p < 1e-11);
    CHECK(th.m3 < 1e-11);
  }

  SECTION("high-power example") {
    SystemConfig c;
    c.r0 = 3.0;
    c.p_s = 1000.0;
    c.p_r = 1000.0;
    c.sigma2 = 1.0;
    c.k_r = 0.001;
    const Thresholds th = compute_thresholds(c);
    CHECK(th.t1 == Approx(7.0).epsilon(1e-14));
    CHECK(th.t2 == Approx(63.0).epsilon(1e-14));
    CHECK(th.m1 == Approx(0.014).epsilon(1e-14));  // 7 * (1 + 1) / 1000
    CHECK(th.m2 == Approx(0.063).epsilon(1e-14));
    CHECK(th.m2p == Approx(0.063).epsilon(1e-14));
    CHECK(th.m3 == Approx(0.007).epsilon(1e-14));
  }

  SECTION("t2 = t1^2 + 2 t1") {
    SplitMix64 rng(5);
    for (int i = 0; i < 300; ++i) {
      SystemConfig c = unit_config(0.1 + 6.0 * rng.next_unit());
      const Thresholds th = compute_thresholds(c);
      CHECK(th.t2 == Approx(th.t1 * th.t1 + 2.0 * th.t1).epsilon(1e-12));
    }
  }

  SECTION("rejects invalid configs") {
    SystemConfig c = unit_config();
    c.p_s = -1.0;
    CHECK_THROWS_WITH(compute_thresholds(c), Catch::Matchers::ContainsSubstring("p_s"));
    c = unit_config();
    c.sigma2 = 0.0;
    CHECK_THROWS_AS(compute_thresholds(c), std::domain_error);
    c = unit_config();
    c.k_r = -0.1;
    CHECK_THROWS_AS(compute_thresholds(c), std::domain_error);
    c = unit_config();
    c.r0 = 0.0;
    CHECK_THROWS_AS(compute_thresholds(c), std::domain_error);
  }
}

TEST_CASE("FD SINRs", "[modes]") {
  CHECK(fd_sinr(gains(1, 0, 0, 1), unit_config()).relay == 1.0);
  CHECK(fd_sinr(gains(1, 0, 0, 1), unit_config()).dest == 1.0);
  // self-interference doubles the denominator
  CHECK(fd_sinr(gains(1, 0, 0, 0), unit_config(1.0, 1.0)).relay == 0.5);

  SystemConfig c;
  c.p_s = 10.0;
  c.p_r = 4.0;
  c.sigma2 = 1.0;
  c.k_r = 0.25;
  const FdSinr f = fd_sinr(gains(2.0, 0, 0, 0.5), c);
  CHECK(f.relay == Approx(10.0).epsilon(1e-15));  // 2*10 / (0.25*4 + 1)
  CHECK(f.dest == Approx(2.0).epsilon(1e-15));
}

TEST_CASE("HD SINRs", "[modes]") {
  CHECK(hd_sinr(gains(0, 0, 0, 0), unit_config()).relay == 0.0);
  CHECK(hd_sinr(gains(0, 0, 0, 0), unit_config()).dest == 0.0);
  CHECK(hd_sinr(gains(1, 1, 0, 0), unit_config()).relay == 2.0);  // combining adds gains

  SystemConfig c;
  c.p_s = 2.0;
  c.p_r = 3.0;
  const HdSinr h = hd_sinr(gains(0.3, 0.7, 1.5, 0.5), c);
  CHECK(h.relay == Approx(2.0).epsilon(1e-15));
  CHECK(h.dest == Approx(6.0).epsilon(1e-15));

  SECTION("independent of the self-interference coefficient") {
    const GainSample g = gains(0.4, 1.3, 0.9, 2.2);
    const HdSinr base = hd_sinr(g, unit_config(1.0, 0.0));
    for (const double kr : {0.5, 1.0, 10.0}) {
      const HdSinr with_rsi = hd_sinr(g, unit_config(1.0, kr));
      CHECK(with_rsi.relay == base.relay);
      CHECK(with_rsi.dest == base.dest);
    }
  }

  SECTION("single-antenna variant ignores the combining gains") {
    const HdSinr h1 = hd_sinr_single_antenna(gains(0.3, 99.0, 99.0, 0.5), unit_config());
    CHECK(h1.relay == 0.3);
    CHECK(h1.dest == 0.5);
  }
}

TEST_CASE("capacities and mode selection", "[modes]") {
  SECTION("boundary capacity counts as non-outage") {
    // gamma_f = (1,1), gamma_h = (3,3): c_fd = 1, c_hd = 1 at r0 = 1
    const ModeDecision d = capacities(gains(1.0, 2.0, 2.0, 1.0), unit_config(1.0));
    CHECK(d.c_fd == Approx(1.0).margin(1e-15));
    CHECK(d.c_hd == Approx(1.0).margin(1e-15));
    CHECK_FALSE(d.outage);
    CHECK(d.selected == Mode::FD);  // tie goes to FD
  }

  SECTION("all-zero gains are an outage for any positive rate") {
    const ModeDecision d = capacities(gains(0, 0, 0, 0), unit_config(1.0));
    CHECK(d.c_fd == 0.0);
    CHECK(d.c_hd == 0.0);
    CHECK(d.outage);
  }

  SECTION("FD-favoring realization") {
    const ModeDecision d = capacities(gains(7.0, 0.0, 0.0, 7.0), unit_config(3.0));
    CHECK(d.c_fd == Approx(3.0).margin(1e-15));
    CHECK(d.c_hd == Approx(1.5).margin(1e-15));
    CHECK(d.selected == Mode::FD);
    CHECK_FALSE(d.outage);
  }

  SECTION("monotone in every gain") {
    SplitMix64 rng(77);
    for (int i = 0; i < 300; ++i) {
      SystemConfig c = unit_config(0.5 + 3.0 * rng.next_unit(), rng.next_unit());
      GainSample g = gains(2 * rng.next_unit(), 2 * rng.next_unit(), 2 * rng.next_unit(),
                           2 * rng.next_unit());
      const ModeDecision base = capacities(g, c);
      GainSample bumped = g;
      switch (i % 4) {
        case 0: bumped.g11 += rng.next_unit(); break;
        case 1: bumped.g12 += rng.next_unit(); break;
        case 2: bumped.g21 += rng.next_unit(); break;
        default: bumped.g22 += rng.next_unit(); break;
      }
      const ModeDecision more = capacities(bumped, c);
      CHECK(more.c_fd >= base.c_fd);
      CHECK(more.c_hd >= base.c_hd);
    }
  }

  SECTION("hybrid outage is the conjunction of the per-mode outages") {
    SplitMix64 rng(78);
    for (int i = 0; i < 500; ++i) {
      SystemConfig c = unit_config(0.25 + 4.0 * rng.next_unit(), 2.0 * rng.next_unit());
      const GainSample g = gains(3 * rng.next_unit(), 3 * rng.next_unit(), 3 * rng.next_unit(),
                                 3 * rng.next_unit());
      const ModeDecision d = capacities(g, c);
      CHECK(d.outage == ((d.c_fd < c.r0) && (d.c_hd < c.r0)));
    }
  }

  SECTION("FD and HD relay SINRs agree through the defining algebra") {
    // gamma_h_r * sigma2 * g11 == gamma_f_r * (k_r p_r + sigma2) * (g11 + g12)
    SplitMix64 rng(79);
    for (int i = 0; i < 300; ++i) {
      SystemConfig c;
      c.p_s = 0.1 + 20.0 * rng.next_unit();
      c.p_r = 0.1 + 20.0 * rng.next_unit();
      c.sigma2 = 0.1 + 2.0 * rng.next_unit();
      c.k_r = 3.0 * rng.next_unit();
      c.r0 = 1.0;
      const GainSample g =
          gains(0.01 + rng.next_unit(), rng.next_unit(), rng.next_unit(), rng.next_unit());
      const double lhs = hd_sinr(g, c).relay * c.sigma2 * g.g11;
      const double rhs = fd_sinr(g, c).relay * (c.k_r * c.p_r + c.sigma2) * (g.g11 + g.g12);
      CHECK(lhs == Approx(rhs).epsilon(1e-12));
    }
  }
}
