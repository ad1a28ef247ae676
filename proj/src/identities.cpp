#include "erw/identities.hpp"

#include <cmath>
#include <stdexcept>

#include "erw/numeric.hpp"
#include "erw/specfun.hpp"

namespace erw {

namespace {

void require_above_half(double a, const char* what) {
  if (!(a > 0.5))
    throw std::domain_error(std::string(what) + " requires a > 1/2");
}

std::vector<double> rep(double v, int count) {
  return std::vector<double>(static_cast<std::size_t>(count), v);
}

struct SeriesTally {
  std::vector<double> bounds;
  std::vector<long> terms;
  double propagated = 0.0; // sum of |coefficient| * tail_bound

  // Evaluates one series and accounts for its uncertainty as it will
  // enter the report, weighted by the coefficient it is multiplied with.
  double eval(const HypSeries& s, double coeff_mag) {
    SeriesValue v = pfq_sum_z1(s);
    bounds.push_back(v.tail_bound);
    terms.push_back(v.terms_used);
    propagated += coeff_mag * v.tail_bound;
    return v.value;
  }
};

} // namespace

std::vector<HypSeries> identity_series(const std::string& kind, double a,
                                       double b, int d) {
  if (kind == "t1")
    return {HypSeries({1, 1, 2 * a + 1}, {a + 2, a + 2})};
  if (kind == "t2")
    return {HypSeries({1, 1, 2, 3 * a + 1}, rep(a + 2, 3)),
            HypSeries({1, 1, 1, 3 * a + 1}, rep(a + 2, 3))};
  if (kind == "t3")
    return {HypSeries({1, 1, 2, 2, 4 * a + 1}, rep(a + 2, 4)),
            HypSeries({1, 1, 1, 2, 4 * a + 1}, rep(a + 2, 4)),
            HypSeries({1, 1, 1, 1, 4 * a + 1}, rep(a + 2, 4))};
  if (kind == "t4")
    return {HypSeries({1, 1, 1}, {a + 1, a + 1}),
            HypSeries({1, 1, 2}, {a + 2, a + 2}),
            HypSeries({1, 1, 2 * a + 1}, {a + 2, a + 2})};
  if (kind == "stops")
    return {HypSeries({1, 1, b}, {a + 1, a + 1}),
            HypSeries({1, 1, b + 1}, {a + 2, a + 2}),
            HypSeries({1, 1, 2 * a + 1}, {a + 2, a + 2})};
  if (kind == "general") {
    std::vector<HypSeries> out;
    for (int k = 0; k <= d - 2; ++k) {
      std::vector<double> nums;
      for (int i = 0; i < d - k; ++i) nums.push_back(1.0);
      for (int i = 0; i < k; ++i) nums.push_back(2.0);
      nums.push_back(a * d + 1);
      out.emplace_back(nums, rep(a + 2, d));
    }
    return out;
  }
  throw std::invalid_argument("unknown identity kind: " + kind);
}

IdentityReport finalize_report(std::string kind, double a, double b, int d,
                               double lhs, double rhs,
                               std::vector<double> tail_bounds,
                               std::vector<long> terms,
                               double propagated_abs, double tol) {
  IdentityReport r;
  r.kind = std::move(kind);
  r.a = a;
  r.b = b;
  r.d = d;
  r.lhs = lhs;
  r.rhs = rhs;
  double denom = std::max({std::fabs(lhs), std::fabs(rhs), 1e-14});
  r.residual = std::fabs(lhs - rhs) / denom;
  r.series_tail_bounds = std::move(tail_bounds);
  r.terms_used = std::move(terms);
  r.tol = tol;
  r.tail_allowance = propagated_abs / denom;
  r.pass = r.residual <= r.tol + r.tail_allowance;
  return r;
}

IdentityReport eval_t1(double a, double tol) {
  require_above_half(a, "eval_t1");
  const double lhs = std::exp(-log_gamma(2 * a)) / (2 * a - 1);

  SeriesTally tally;
  const double K = 2 * a / ((2 * a - 1) * std::exp(2 * log_gamma(a + 1)));
  const double w = (a / (a + 1)) * (a / (a + 1));
  const auto series = identity_series("t1", a, 0, 0);
  double F = tally.eval(series[0], K * w);
  const double rhs = K * (1 - w * F);

  return finalize_report("t1", a, 0, 0, lhs, rhs, std::move(tally.bounds),
                         std::move(tally.terms), tally.propagated, tol);
}

IdentityReport eval_t2(double a, double tol) {
  require_above_half(a, "eval_t2");
  const double lhs =
      (a + 1) * std::exp(-log_gamma(3 * a)) / (a * (2 * a - 1));

  SeriesTally tally;
  const double K = 3 * (a + 1) / ((2 * a - 1) * std::exp(3 * log_gamma(a + 1)));
  const double ap3 = (a + 1) * (a + 1) * (a + 1);
  const double w1 = 3 * a * a / ap3;
  const double w2 = a * a * a / ap3;
  const auto series = identity_series("t2", a, 0, 0);
  double F1 = tally.eval(series[0], K * w1);
  double F2 = tally.eval(series[1], K * w2);
  const double rhs = K * (1 - w1 * F1 - w2 * F2);

  return finalize_report("t2", a, 0, 0, lhs, rhs, std::move(tally.bounds),
                         std::move(tally.terms), tally.propagated, tol);
}

IdentityReport eval_t3(double a, double tol) {
  require_above_half(a, "eval_t3");
  const double poly = 2 * a * a + 2 * a - 1;
  const double lhs = 6 * poly * std::exp(-log_gamma(4 * a)) /
                     ((4 * a - 1) * (2 * a - 1) * (2 * a - 1));

  SeriesTally tally;
  const double K = 24 * a * poly /
                   ((4 * a - 1) * (2 * a - 1) * (2 * a - 1) *
                    std::exp(4 * log_gamma(a + 1)));
  const double ap4 = std::pow(a + 1, 4);
  const double w1 = 6 * a * a / ap4;
  const double w2 = 4 * a * a * a / ap4;
  const double w3 = a * a * a * a / ap4;
  const auto series = identity_series("t3", a, 0, 0);
  double F1 = tally.eval(series[0], K * w1);
  double F2 = tally.eval(series[1], K * w2);
  double F3 = tally.eval(series[2], K * w3);
  const double rhs = K * (1 - w1 * F1 - w2 * F2 - w3 * F3);

  return finalize_report("t3", a, 0, 0, lhs, rhs, std::move(tally.bounds),
                         std::move(tally.terms), tally.propagated, tol);
}

IdentityReport eval_t4(double a, double tol) {
  require_above_half(a, "eval_t4");
  const double lhs = std::exp(-log_gamma(2 * a)) / (2 * a - 1);

  SeriesTally tally;
  const double u = std::exp(-2 * log_gamma(a + 1));
  const double k2 = a * a / ((2 * a - 1) * std::exp(2 * log_gamma(a + 2)));
  const auto series = identity_series("t4", a, 0, 0);
  double FA = tally.eval(series[0], u);
  double FB = tally.eval(series[1], std::fabs(k2));
  double FC = tally.eval(series[2], std::fabs(k2) * 2 * a);
  const double rhs = FA * u + k2 * (FB - 2 * a * FC);

  return finalize_report("t4", a, 0, 0, lhs, rhs, std::move(tally.bounds),
                         std::move(tally.terms), tally.propagated, tol);
}

IdentityReport eval_general(double a, int d, double tol) {
  require_above_half(a, "eval_general");
  if (d < 2) throw std::domain_error("eval_general: d must be >= 2");

  SeriesTally tally;
  NeumaierSum lhs_acc;
  const auto series = identity_series("general", a, 0, d);
  for (int k = 0; k <= d - 2; ++k) {
    double coeff = static_cast<double>(rational_binom(d, k)) *
                   std::pow(a, d - k);
    double F = tally.eval(series[static_cast<std::size_t>(k)], coeff);
    lhs_acc.add(coeff * F);
  }
  const double lhs = lhs_acc.value();
  const double rhs = std::pow(a + 1, d) -
                     std::exp(d * log_gamma(a + 2) - log_gamma(a * d + 1));

  return finalize_report("general", a, 0, d, lhs, rhs,
                         std::move(tally.bounds), std::move(tally.terms),
                         tally.propagated, tol);
}

IdentityReport eval_general(double a, int d) {
  return eval_general(a, d, d >= 5 ? 1e-6 : 1e-7);
}

IdentityReport eval_stops(double a, double b, double tol) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("eval_stops requires a > 0 and b > 0");
  if (!(2 * a > b)) throw std::domain_error("eval_stops requires 2a > b");
  const double lhs = std::exp(-log_gamma(2 * a)) / (2 * a - b);

  SeriesTally tally;
  const double u = std::exp(-2 * log_gamma(a + 1));
  const double k2 = a * a / ((2 * a - b) * std::exp(2 * log_gamma(a + 2)));
  const auto series = identity_series("stops", a, b, 0);
  double FA = tally.eval(series[0], u);
  double FB = tally.eval(series[1], std::fabs(k2) * b);
  double FC = tally.eval(series[2], std::fabs(k2) * 2 * a);
  const double rhs = FA * u + k2 * (b * FB - 2 * a * FC);

  return finalize_report("stops", a, b, 0, lhs, rhs, std::move(tally.bounds),
                         std::move(tally.terms), tally.propagated, tol);
}

std::pair<double, double> telescoping_term(double a, int d, long n) {
  if (n < 2) throw std::domain_error("telescoping_term: n must be >= 2");
  if (d < 2) throw std::domain_error("telescoping_term: d must be >= 2");
  require_above_half(a, "telescoping_term");

  // shared positive prefactor, in log space
  const double nd = static_cast<double>(n);
  const double log_pre = d * log_gamma(a + 1) + (d - 1) * log_gamma(nd - 1) +
                         log_gamma(nd - 1 + a * d) - d * log_gamma(nd + a);
  const double pre = std::exp(log_pre);

  // Both brackets are degree-d polynomials in x = n-1 equal by the
  // binomial theorem; the cancellation in the first one is mild (x^2
  // relative), so long double keeps it far below 1e-12.
  const long double x = static_cast<long double>(n - 1);
  const long double al = static_cast<long double>(a);
  long double lhs_br = powl(x, d - 1) * (x + al * d) - powl(x + al, d);
  long double rhs_br = 0.0L;
  for (int k = 0; k <= d - 2; ++k)
    rhs_br -= static_cast<long double>(rational_binom(d, k)) * powl(x, k) *
              powl(al, d - k);

  return {pre * static_cast<double>(lhs_br),
          pre * static_cast<double>(rhs_br)};
}

double telescoping_partial_sum(double a, int d, long n_max) {
  NeumaierSum acc;
  for (long n = 2; n <= n_max; ++n) acc.add(telescoping_term(a, d, n).first);
  return acc.value();
}

double series_limit_moment(double a, double b, int d) {
  switch (d) {
    case 2:
      return eval_t1(a).rhs;
    case 3:
      return b * eval_t2(a).rhs;
    case 4:
      return eval_t3(a).rhs;
    default:
      throw std::domain_error("series_limit_moment: d must be 2, 3 or 4");
  }
}

} // namespace erw
