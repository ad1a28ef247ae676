#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "erw/identities.hpp"
#include "erw/moments.hpp"
#include "erw/specfun.hpp"

using erw::IdentityReport;

TEST_CASE("gamma sides collapse to unity at a = 1") {
  IdentityReport t1 = erw::eval_t1(1.0);
  CHECK(t1.lhs == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(t1.rhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t1.pass);
  CHECK(t1.residual <= 1e-10);

  CHECK(erw::eval_t2(1.0).lhs == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(erw::eval_t3(1.0).lhs == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(erw::eval_t2(1.0).pass);
  CHECK(erw::eval_t3(1.0).pass);
}

TEST_CASE("every report carries its series accounting") {
  IdentityReport r = erw::eval_t3(0.8);
  CHECK(r.series_tail_bounds.size() == 3);
  CHECK(r.terms_used.size() == 3);
  for (double b : r.series_tail_bounds) CHECK(b > 0);
  for (long t : r.terms_used) CHECK(t >= 64);
  CHECK(r.tail_allowance > 0);
  CHECK(r.kind == "t3");
  CHECK(r.a == 0.8);
}

TEST_CASE("alternative second-moment form holds past a = 1") {
  // the 2a+1 upper parameter exceeds a denominator parameter here, so
  // this exercises the rearranged form off the original derivation range
  IdentityReport r = erw::eval_t4(2.0);
  CHECK(r.pass);
  // 1/((2a-1) Gamma(2a)) = 1/(3 * 3!)
  CHECK(r.lhs == doctest::Approx(1.0 / 18.0).epsilon(1e-12));
}

TEST_CASE("general identity: known right-hand sides") {
  // at a = 1 the gamma ratio is Gamma(3)^d / Gamma(d+1)
  IdentityReport g2 = erw::eval_general(1.0, 2);
  CHECK(g2.rhs == doctest::Approx(4.0 - 4.0 / 2.0).epsilon(1e-12));
  CHECK(g2.pass);
  IdentityReport g6 = erw::eval_general(1.0, 6);
  CHECK(g6.rhs == doctest::Approx(64.0 - 64.0 / 720.0).epsilon(1e-12));
  CHECK(g6.pass);
  CHECK(g6.series_tail_bounds.size() == 5);
  // default tolerance loosens at d = 5 where the slowest margin is 1
  CHECK(erw::eval_general(0.9, 4).tol == 1e-7);
  CHECK(erw::eval_general(0.9, 5).tol == 1e-6);
}

TEST_CASE("general identity implied by the low-order forms") {
  // rearranging the d = 2 weighted-series form: the summed side equals
  // (a+1)^2 (1 - lhs/K) with K = 2a/((2a-1) Gamma(a+1)^2)
  const double a = 0.8;
  IdentityReport t1 = erw::eval_t1(a);
  double K = 2 * a / ((2 * a - 1) * std::exp(2 * erw::log_gamma(a + 1)));
  double implied = (a + 1) * (a + 1) * (1 - t1.lhs / K);
  IdentityReport g = erw::eval_general(a, 2);
  CHECK(std::fabs(implied - g.lhs) <= 1e-9 * std::fabs(implied));
  CHECK(std::fabs(implied - g.rhs) <= 1e-9 * std::fabs(implied));
}

TEST_CASE("stops form collapses onto the alternative form at b = 1") {
  IdentityReport st = erw::eval_stops(0.9, 1.0);
  IdentityReport t4 = erw::eval_t4(0.9);
  CHECK(st.lhs == doctest::Approx(t4.lhs).epsilon(1e-14));
  CHECK(st.rhs == doctest::Approx(t4.rhs).epsilon(1e-12));
  CHECK(st.pass);
}

TEST_CASE("stops form degenerates cleanly as b tends to 0") {
  IdentityReport r = erw::eval_stops(0.75, 1e-6, 1e-5);
  CHECK(r.pass);
  // both sides approach 1/Gamma(2a+1)
  double limit = std::exp(-erw::log_gamma(2.5));
  CHECK(r.lhs == doctest::Approx(limit).epsilon(1e-5));
  CHECK(r.rhs == doctest::Approx(limit).epsilon(1e-5));
}

TEST_CASE("domain guards") {
  CHECK_THROWS_AS(erw::eval_t1(0.5), std::domain_error);
  CHECK_THROWS_AS(erw::eval_t2(0.3), std::domain_error);
  CHECK_THROWS_AS(erw::eval_general(0.9, 1), std::domain_error);
  CHECK_THROWS_AS(erw::eval_stops(1.0, 2.1), std::domain_error);  // 2a <= b
  CHECK_THROWS_AS(erw::eval_stops(0.9, -1.0), std::domain_error);
  CHECK_THROWS_AS(erw::identity_series("nope", 1.0, 1.0, 0),
                  std::invalid_argument);
}

TEST_CASE("series catalogue matches the evaluators") {
  CHECK(erw::identity_series("t1", 0.8, 0, 0).size() == 1);
  CHECK(erw::identity_series("t2", 0.8, 0, 0).size() == 2);
  CHECK(erw::identity_series("t3", 0.8, 0, 0).size() == 3);
  CHECK(erw::identity_series("t4", 0.8, 0, 0).size() == 3);
  CHECK(erw::identity_series("stops", 0.8, 0.5, 0).size() == 3);
  for (int d = 2; d <= 6; ++d) {
    auto fam = erw::identity_series("general", 0.8, 0, d);
    CHECK(fam.size() == static_cast<std::size_t>(d - 1));
    // slowest member has margin exactly 1
    CHECK(erw::convergence_margin(fam.back()) == doctest::Approx(1.0));
  }
}

TEST_CASE("telescoping term: both factorizations agree") {
  // hand value at d = 2, a = 1, n = 2: prefactor 1/2, brackets both -1
  auto [lhs, rhs] = erw::telescoping_term(1.0, 2, 2);
  CHECK(lhs == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(rhs == doctest::Approx(-0.5).epsilon(1e-14));
  for (long n = 2; n <= 50; ++n) {
    auto [l, r] = erw::telescoping_term(0.75, 3, n);
    CHECK(std::fabs(l - r) <= 1e-12 * std::max(std::fabs(l), 1e-300));
  }
  CHECK_THROWS_AS(erw::telescoping_term(0.75, 3, 1), std::domain_error);
  CHECK_THROWS_AS(erw::telescoping_term(0.75, 1, 5), std::domain_error);
  CHECK_THROWS_AS(erw::telescoping_term(0.4, 3, 5), std::domain_error);
}

TEST_CASE("telescoped sum converges to the gamma boundary value") {
  const double a = 0.9;
  const int d = 3;
  const double target = std::exp(3 * erw::log_gamma(a + 1)) -
                        std::exp(erw::log_gamma(a * 3 + 1));
  double prev_err = -1.0;
  for (long n : {4096L, 8192L, 16384L, 32768L}) {
    double err = std::fabs(erw::telescoping_partial_sum(a, d, n) - target);
    if (prev_err >= 0) CHECK(err <= 0.7 * prev_err); // ~1/n decay
    prev_err = err;
  }
  CHECK(prev_err <= 1e-3 * std::fabs(target));
}

TEST_CASE("limit moments recovered from the summed identities") {
  for (double a : {0.6, 0.8, 1.0}) {
    erw::ErwParams params =
        erw::ErwParams::standard(erw::Numeric((a + 1) / 2), erw::Numeric(1.0));
    for (int d = 2; d <= 4; ++d) {
      double via_series = erw::series_limit_moment(a, 1.0, d);
      double closed = erw::limit_moment(params, d);
      CHECK(std::fabs(via_series - closed) <= 1e-7 * std::fabs(closed));
    }
  }
  // the first-step mean enters odd moments linearly
  CHECK(erw::series_limit_moment(0.8, 0.5, 3) ==
        doctest::Approx(0.5 * erw::series_limit_moment(0.8, 1.0, 3)));
  CHECK_THROWS_AS(erw::series_limit_moment(0.8, 1.0, 5), std::domain_error);
}

TEST_CASE("report bookkeeping: residual, allowance, pass") {
  IdentityReport ok = erw::finalize_report("t1", 0.8, 0, 0, 1.0, 1.0 + 5e-8,
                                           {1e-11}, {128}, 1e-11, 1e-7);
  CHECK(ok.residual == doctest::Approx(5e-8 / (1.0 + 5e-8)));
  CHECK(ok.pass);

  IdentityReport bad = erw::finalize_report("t1", 0.8, 0, 0, 1.0, 1.0 + 2e-7,
                                            {1e-11}, {128}, 1e-11, 1e-7);
  CHECK_FALSE(bad.pass);

  // a large propagated tail bound widens the acceptance window
  IdentityReport wide = erw::finalize_report("t1", 0.8, 0, 0, 1.0, 1.0 + 2e-7,
                                             {1.5e-7}, {128}, 1.5e-7, 1e-7);
  CHECK(wide.pass);
  CHECK(wide.tail_allowance == doctest::Approx(1.5e-7 / (1.0 + 2e-7)));

  // zero against zero: the floor keeps the residual finite
  IdentityReport zero =
      erw::finalize_report("t1", 0.8, 0, 0, 0.0, 0.0, {}, {}, 0.0, 1e-7);
  CHECK(zero.residual == 0.0);
  CHECK(zero.pass);
}
