#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ddf/dmt.hpp"
#include "unit/oracles.hpp"

using namespace ddf;

TEST_CASE("infinite-slot tradeoff and transmit bound") {
  CHECK(dmt_infinite(0.25) == doctest::Approx(1.5));
  CHECK(dmt_infinite(1.0) == 0.0);
  CHECK(dmt_infinite(0.5) == 1.0);
  CHECK(dmt_infinite(0.75) == doctest::Approx(1.0 / 3.0));
  CHECK(tx_div_bound(0.0) == 2.0);
  CHECK(tx_div_bound(1.0) == 0.0);
  for (int i = 0; i <= 100; ++i) CHECK(tx_div_bound(i / 100.0) >= dmt_infinite(i / 100.0));
  CHECK_THROWS_AS(dmt_infinite(1.1), std::invalid_argument);
  CHECK_THROWS_AS(tx_div_bound(-0.1), std::invalid_argument);
}

TEST_CASE("decision-time and outage exponents") {
  CHECK(d_bar(3, 0.25, 4) == doctest::Approx(0.5));
  CHECK(d_bar(3, 0.6, 4) == 0.0);
  CHECK(std::isinf(d_bar(2, 0.9, 4)));
  CHECK(d_bar(4, 0.0, 4) == 1.0);
  CHECK(d_bar(4, 0.8, 4) == 0.0);
  CHECK(d_bar(1, 0.0, 1) == 1.0);

  CHECK(d_m_exponent(1, 0.3, 4) == doctest::Approx(1.4));
  CHECK(d_m_exponent(3, 0.6, 4) == doctest::Approx(4.0 * 0.4 / 3.0));
  CHECK(d_m_exponent(2, 0.25, 4) == doctest::Approx(1.5));
  CHECK_THROWS_AS(d_m_exponent(5, 0.2, 4), std::invalid_argument);
  CHECK_THROWS_AS(d_bar(0, 0.2, 4), std::invalid_argument);

  for (int big_m : {1, 2, 3, 4, 7}) {
    for (int m = 1; m <= big_m; ++m) {
      for (int i = 0; i <= 20; ++i) {
        const double r = i / 20.0;
        INFO("M = " << big_m << ", m = " << m << ", r = " << r);
        const double expect_bar = oracle::d_bar_direct(m, r, big_m);
        if (std::isinf(expect_bar)) CHECK(std::isinf(d_bar(m, r, big_m)));
        else CHECK(d_bar(m, r, big_m) == doctest::Approx(expect_bar).epsilon(1e-12));
        CHECK(d_m_exponent(m, r, big_m) ==
              doctest::Approx(oracle::outage_exponent_infimum(m, r, big_m)).epsilon(1e-7).scale(1.0));
      }
    }
  }
}

TEST_CASE("finite-slot tradeoff") {
  CHECK(dmt_finite(0.0, 1) == doctest::Approx(2.0));
  for (int big_m : {2, 3, 5}) {
    double prev = 3.0;
    CHECK(dmt_finite(0.0, big_m) == doctest::Approx(2.0));
    for (int i = 0; i <= 20; ++i) {
      const double r = i / 20.0;
      const double d = dmt_finite(r, big_m);
      INFO("M = " << big_m << ", r = " << r);
      CHECK(std::abs(d - oracle::dmt_finite_oracle(r, big_m)) < 1e-6);
      CHECK(d <= tx_div_bound(r) + 1e-12);
      CHECK(d <= prev + 1e-12);
      prev = d;
    }
  }
  CHECK_THROWS_AS(dmt_finite(0.5, 0), std::invalid_argument);
}

TEST_CASE("Pareto decision fractions") {
  CHECK(pareto_fractions(1) == std::vector<double>{0.5});
  const auto f3 = pareto_fractions(3);
  REQUIRE(f3.size() == 3);
  CHECK(f3[0] == 0.5);
  CHECK(f3[1] == doctest::Approx(0.618034).epsilon(1e-6));
  CHECK(f3[2] == doctest::Approx(0.723607).epsilon(1e-6));
  CHECK(pareto_fractions(6).back() == doctest::Approx(0.773459).epsilon(1e-6));

  for (int n = 1; n <= 6; ++n) {
    const auto f = pareto_fractions(n);
    REQUIRE(static_cast<int>(f.size()) == n);
    for (int j = 0; j < n; ++j) {
      CHECK(f[j] > 0.0);
      CHECK(f[j] < 1.0);
      if (j > 0) {
        CHECK(f[j] > f[j - 1]);
        CHECK(std::abs(f[j] - pareto_step(f[j - 1], f.back())) < 1e-10);
      }
    }
    CHECK(pareto_dmt(0.5, n) < 1.0);
    CHECK(pareto_dmt(1.0, n) == 0.0);
  }
  CHECK(pareto_dmt(0.0, 1) == 2.0);
  CHECK(pareto_dmt(0.75, 1) == doctest::Approx(0.25));
  CHECK_THROWS_AS(pareto_fractions(0), std::invalid_argument);
}

TEST_CASE("tradeoff CSV") {
  std::ostringstream os;
  write_dmt_csv(os, {{0.0, 2.0, 4, "finite"}, {0.9, kInfiniteDiversity, 4, "d_bar"}});
  CHECK(os.str() == "r,d,order,variant\n0,2,4,finite\n0.9,inf,4,d_bar\n");
}
