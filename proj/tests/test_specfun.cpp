#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "erw/specfun.hpp"

using erw::HypSeries;
using erw::SeriesValue;

TEST_CASE("log_gamma matches known values") {
  CHECK(erw::log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(erw::log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(erw::log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-15));
  CHECK(erw::log_gamma(0.5) ==
        doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-15));
}

TEST_CASE("log_gamma satisfies the recurrence on [0.5, 100]") {
  for (double x = 0.5; x <= 99.75; x += 0.25) {
    double lhs = erw::log_gamma(x + 1.0);
    double rhs = erw::log_gamma(x) + std::log(x);
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(lhs)));
  }
}

TEST_CASE("log_gamma rejects nonpositive arguments") {
  CHECK_THROWS_AS(erw::log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(erw::log_gamma(-3.5), std::domain_error);
}

TEST_CASE("pochhammer rising factorial") {
  CHECK(erw::pochhammer(3.0, 4) == doctest::Approx(360.0));
  CHECK(erw::pochhammer(0.5, 3) == doctest::Approx(1.875));
  CHECK(erw::pochhammer(7.2, 0) == 1.0);
  CHECK(erw::pochhammer(2.5, 1) == 2.5);
  CHECK_THROWS_AS(erw::pochhammer(1.0, -1), std::domain_error);
}

TEST_CASE("series construction enforces shape and convergence") {
  CHECK_NOTHROW(HypSeries({1.0, 1.0}, {3.0}));
  // one more numerator than denominator parameter
  CHECK_THROWS_AS(HypSeries({1.0, 1.0}, {2.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(HypSeries({1.0}, {2.0, 2.0}), std::domain_error);
  // sign constraints
  CHECK_THROWS_AS(HypSeries({1.0, -0.5}, {3.0}), std::domain_error);
  CHECK_THROWS_AS(HypSeries({1.0, 1.0}, {0.0}), std::domain_error);
  CHECK_THROWS_AS(HypSeries({1.0, 1.0}, {-2.0}), std::domain_error);
  // margin 0 and margin < 0 both diverge at z = 1
  CHECK_THROWS_AS(HypSeries({1.0, 1.0}, {2.0}), std::domain_error);
  CHECK_THROWS_AS(HypSeries({1.0}, {}), std::domain_error);
  // zero numerator parameter is legal: the series truncates to 1
  CHECK_NOTHROW(HypSeries({0.0, 1.0}, {2.0}));
}

TEST_CASE("convergence margin is the parameter-sum gap") {
  CHECK(erw::convergence_margin(HypSeries({1, 1}, {3})) == doctest::Approx(1.0));
  CHECK(erw::convergence_margin(HypSeries({1, 1, 1}, {1.6, 1.6})) ==
        doctest::Approx(0.2));
  // the d-parameter family used by the summed moment identities:
  // (d-k) ones, k twos, one ad+1, against d copies of a+2
  const double a = 0.75;
  for (int d = 2; d <= 6; ++d) {
    for (int k = 0; k <= d - 2; ++k) {
      std::vector<double> num;
      for (int i = 0; i < d - k; ++i) num.push_back(1.0);
      for (int i = 0; i < k; ++i) num.push_back(2.0);
      num.push_back(a * d + 1);
      std::vector<double> den(static_cast<std::size_t>(d), a + 2);
      CHECK(erw::convergence_margin(HypSeries(num, den)) ==
            doctest::Approx(static_cast<double>(d - k - 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sum certifies simple closed values") {
  SeriesValue v = erw::pfq_sum_z1(HypSeries({1, 1}, {3}));
  CHECK(v.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::fabs(v.value - 2.0) <= v.tail_bound);
  CHECK(v.tail_bound <= 1e-10);
  CHECK(v.terms_used >= 64);

  // upper parameter cancels a lower one
  SeriesValue w = erw::pfq_sum_z1(HypSeries({1, 1, 3}, {3, 3}));
  CHECK(w.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("zero numerator parameter short-circuits") {
  SeriesValue v = erw::pfq_sum_z1(HypSeries({0.0, 2.0}, {3.0}));
  CHECK(v.value == 1.0);
  CHECK(v.tail_bound == 0.0);
  CHECK(v.terms_used == 1);
}

TEST_CASE("appending the same parameter to both lists changes nothing") {
  SeriesValue base = erw::pfq_sum_z1(HypSeries({1, 1, 2.2}, {2.9, 2.9}));
  SeriesValue ext = erw::pfq_sum_z1(HypSeries({1, 1, 2.2, 3.7}, {2.9, 2.9, 3.7}));
  CHECK(std::fabs(base.value - ext.value) <=
        base.tail_bound + ext.tail_bound + 1e-12);
}

TEST_CASE("all-positive parameters give a sum above the leading term") {
  SeriesValue v = erw::pfq_sum_z1(HypSeries({1, 1, 1}, {1.7, 1.7}));
  CHECK(v.value > 1.0);
  CHECK(std::isfinite(v.value));
}

TEST_CASE("gauss oracle closed form") {
  CHECK(erw::gauss_2f1_oracle(1.0, 1.0, 3.0) == doctest::Approx(2.0));
  CHECK(erw::gauss_2f1_oracle(0.5, 0.5, 2.0) ==
        doctest::Approx(4.0 / M_PI).epsilon(1e-14));
  CHECK_THROWS_AS(erw::gauss_2f1_oracle(1.0, 1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(erw::gauss_2f1_oracle(1.0, 1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(erw::gauss_2f1_oracle(4.0, 1.0, 3.0), std::domain_error);
}

TEST_CASE("sum agrees with the gauss oracle on a parameter grid") {
  const double as[] = {0.25, 0.6, 1.0, 1.5};
  const double bs[] = {0.5, 1.2, 2.0, 2.75, 3.3};
  int count = 0;
  for (double a : as) {
    for (double b : bs) {
      double c = a + b + 1.0 + 0.37 * (count % 3);
      double want = erw::gauss_2f1_oracle(a, b, c);
      SeriesValue got = erw::pfq_sum_z1(HypSeries({a, b}, {c}));
      CHECK(std::fabs(got.value - want) <= 1e-9 * std::fabs(want));
      ++count;
    }
  }
  CHECK(count == 20);
}

TEST_CASE("tail bound survives summing ten times further") {
  // instances drawn from the identity families, slowest margins first
  const std::vector<HypSeries> cases = {
      HypSeries({1, 1, 1}, {1.6, 1.6}),            // margin 0.2
      HypSeries({1, 1, 2.5}, {2.75, 2.75}),        // margin 1
      HypSeries({1, 1, 2, 2, 4.2}, {2.8, 2.8, 2.8, 2.8}), // margin 1
      HypSeries({1, 1, 1, 1, 1, 1, 5.8}, // d=6 family, margin 5
                {2.8, 2.8, 2.8, 2.8, 2.8, 2.8}),
  };
  for (const auto& s : cases) {
    SeriesValue v = erw::pfq_sum_z1(s);
    SeriesValue deep = erw::pfq_sum_z1_fixed(s, 10 * v.terms_used, false);
    CHECK(std::fabs(v.value - deep.value) < v.tail_bound);
  }
}

TEST_CASE("fixed-length sum: serial and chunked paths agree") {
  HypSeries s({1, 1, 1}, {1.6, 1.6});
  SeriesValue serial = erw::pfq_sum_z1_fixed(s, 200000, false);
  SeriesValue parallel = erw::pfq_sum_z1_fixed(s, 200000, true);
  CHECK(std::fabs(serial.value - parallel.value) <=
        1e-9 * std::fabs(serial.value));
  CHECK(serial.terms_used == 200000);
  CHECK_THROWS_AS(erw::pfq_sum_z1_fixed(s, 0, false), std::domain_error);
}

TEST_CASE("running out of terms reports the best value so far") {
  HypSeries slow({1, 1, 1}, {1.6, 1.6});
  try {
    erw::pfq_sum_z1(slow, 1e-10, 1000);
    FAIL("expected truncation");
  } catch (const erw::SeriesTruncationError& e) {
    CHECK(e.best.terms_used == 1000);
    CHECK(e.best.value > 1.0);
    CHECK(std::isfinite(e.best.tail_bound));
    // the carried value is already close; the bound covers the gap
    SeriesValue full = erw::pfq_sum_z1(slow);
    CHECK(std::fabs(e.best.value - full.value) <= e.best.tail_bound);
  }
  CHECK_THROWS_AS(erw::pfq_sum_z1(slow, -1.0), std::domain_error);
}
