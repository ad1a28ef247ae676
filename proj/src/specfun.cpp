#include "erw/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef ERW_HAVE_OPENMP
#include <omp.h>
#endif

namespace erw {

double log_gamma(double x) {
  if (!(x > 0.0))
    throw std::domain_error("log_gamma: argument must be positive, got " +
                            std::to_string(x));
  int sign = 0;
  return ::lgamma_r(x, &sign); // sign is +1 for x > 0
}

double pochhammer(double a, long n) {
  if (n < 0) throw std::domain_error("pochhammer: n must be >= 0");
  double p = 1.0;
  for (long i = 0; i < n; ++i) p *= (a + static_cast<double>(i));
  return p;
}

HypSeries::HypSeries(std::vector<double> num, std::vector<double> den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (num_.size() != den_.size() + 1)
    throw std::domain_error("HypSeries: need exactly one more numerator than "
                            "denominator parameter");
  for (double a : num_)
    if (!(a >= 0.0) || !std::isfinite(a))
      throw std::domain_error("HypSeries: numerator parameters must be >= 0");
  for (double b : den_)
    if (!(b > 0.0) || !std::isfinite(b))
      throw std::domain_error("HypSeries: denominator parameters must be > 0");
  double margin = 0.0;
  for (double b : den_) margin += b;
  for (double a : num_) margin -= a;
  if (!(margin > 0.0))
    throw std::domain_error(
        "HypSeries: nonpositive convergence margin, series diverges at z=1");
}

double convergence_margin(const HypSeries& s) {
  double m = 0.0;
  for (double b : s.den()) m += b;
  for (double a : s.num()) m -= a;
  return m;
}

namespace {

// Asymptotics of the terms: with margin s, t_n = C n^-(s+1) (1 + c1/n + ...).
// c1 falls out of expanding the term ratio prod(a_i+n)/(prod(b_j+n)(n+1))
// to second order in 1/n via the power sums of the parameter lists (the
// implicit (n+1) factorial counts as an extra denominator parameter 1).
struct TermModel {
  double s;     // convergence margin
  double sigma; // s + 1, the term decay exponent
  double c1;    // second-order coefficient
  double pmax;  // largest parameter, for the stopping eligibility guard
};

TermModel make_model(const HypSeries& hs) {
  double A1 = 0, A2 = 0, B1 = 1.0, B2 = 1.0, pmax = 1.0;
  for (double a : hs.num()) {
    A1 += a;
    A2 += a * a;
    pmax = std::max(pmax, a);
  }
  for (double b : hs.den()) {
    B1 += b;
    B2 += b * b;
    pmax = std::max(pmax, b);
  }
  double s = 0.0;
  for (double b : hs.den()) s += b;
  for (double a : hs.num()) s -= a;
  double e2a = (A1 * A1 - A2) / 2.0;
  double e2b = (B1 * B1 - B2) / 2.0;
  double rho2 = e2a - e2b - B1 * (A1 - B1);
  double sigma = s + 1.0;
  double c1 = sigma * (sigma + 1.0) / 2.0 - rho2;
  return {s, sigma, c1, pmax};
}

// Integral-comparison correction for the unsummed tail t_N + t_{N+1} + ...
// The midpoint shift x = N - 1/2 makes the integral a second-order-accurate
// stand-in for the sum, and the c1 term removes the next order as well.
double tail_correction(const TermModel& m, long N, double tN) {
  double Nd = static_cast<double>(N);
  double C = tN * std::pow(Nd, m.sigma) / (1.0 + m.c1 / Nd);
  double x = Nd - 0.5;
  return C * (std::pow(x, -m.s) / m.s + m.c1 * std::pow(x, -m.sigma) / m.sigma);
}

bool has_zero_numerator(const HypSeries& hs) {
  return std::any_of(hs.num().begin(), hs.num().end(),
                     [](double a) { return a == 0.0; });
}

double term_ratio(const HypSeries& hs, long n) {
  double r = 1.0;
  for (double a : hs.num()) r *= (a + static_cast<double>(n));
  for (double b : hs.den()) r /= (b + static_cast<double>(n));
  return r / (static_cast<double>(n) + 1.0);
}

// log t_n from scratch; lets parallel segments start mid-series.
double log_term(const HypSeries& hs, long n) {
  double lt = -log_gamma(static_cast<double>(n) + 1.0);
  for (double a : hs.num()) lt += log_gamma(a + static_cast<double>(n)) - log_gamma(a);
  for (double b : hs.den()) lt -= log_gamma(b + static_cast<double>(n)) - log_gamma(b);
  return lt;
}

} // namespace

SeriesValue pfq_sum_z1(const HypSeries& hs, double abs_tol, long max_terms) {
  if (!(abs_tol > 0.0)) throw std::domain_error("pfq_sum_z1: abs_tol must be > 0");
  if (has_zero_numerator(hs)) return {1.0, 0.0, 1};

  const TermModel m = make_model(hs);
  // Below this index the 1/n expansion behind the tail model is not yet
  // trustworthy, so checkpoint diffs there must not trigger a stop.
  const double n_min = 32.0 * std::max({1.0, std::fabs(m.c1), m.pmax});

  NeumaierSum acc;
  double t = 1.0;
  long n = 0;
  long next_cp = 64;
  double prev_val = 0.0, prev_diff = 0.0;
  bool have_prev_val = false, have_prev_diff = false;
  double last_bound = std::numeric_limits<double>::infinity();

  while (n < max_terms) {
    acc.add(t);
    t *= term_ratio(hs, n);
    ++n;
    if (n == next_cp) {
      double v = acc.value() + tail_correction(m, n, t);
      if (have_prev_val) {
        double diff = std::fabs(v - prev_val);
        double scaled_prev =
            have_prev_diff ? prev_diff / std::pow(2.0, m.s + 1.0) : diff;
        double bound = 2.0 * std::max(diff, scaled_prev) + 4e-16 * std::fabs(v);
        last_bound = bound;
        if (static_cast<double>(n) >= n_min && bound <= abs_tol)
          return {v, bound, n};
        prev_diff = diff;
        have_prev_diff = true;
      }
      prev_val = v;
      have_prev_val = true;
      next_cp *= 2;
    }
  }
  double v = acc.value() + tail_correction(m, n, t);
  throw SeriesTruncationError(
      "pfq_sum_z1: max_terms=" + std::to_string(max_terms) +
          " reached before bound " + std::to_string(last_bound) +
          " met abs_tol " + std::to_string(abs_tol),
      SeriesValue{v, last_bound, n});
}

SeriesValue pfq_sum_z1_fixed(const HypSeries& hs, long n_terms, bool parallel) {
  if (n_terms < 1) throw std::domain_error("pfq_sum_z1_fixed: n_terms must be >= 1");
  if (has_zero_numerator(hs)) return {1.0, 0.0, 1};
  const TermModel m = make_model(hs);

  // The first unsummed term comes from the running recurrence, not a
  // log-space rebuild: at n in the millions the log-gamma cancellation
  // costs ~|log t| * eps * n absolute in the log, and the tail correction
  // amplifies exactly that error when the margin is small.
  double partial, tN;
  if (!parallel) {
    NeumaierSum acc;
    double t = 1.0;
    for (long n = 0; n < n_terms; ++n) {
      acc.add(t);
      t *= term_ratio(hs, n);
    }
    partial = acc.value();
    tN = t;
  } else {
    const long chunk = 1L << 15;
    const long n_seg = (n_terms + chunk - 1) / chunk;
    std::vector<double> seg_sum(static_cast<std::size_t>(n_seg), 0.0);
    std::vector<double> seg_end(static_cast<std::size_t>(n_seg), 0.0);
#ifdef ERW_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long si = 0; si < n_seg; ++si) {
      const long lo = si * chunk;
      const long hi = std::min(n_terms, lo + chunk);
      NeumaierSum local;
      double t = (lo == 0) ? 1.0 : std::exp(log_term(hs, lo));
      for (long n = lo; n < hi; ++n) {
        local.add(t);
        t *= term_ratio(hs, n);
      }
      seg_sum[static_cast<std::size_t>(si)] = local.value();
      seg_end[static_cast<std::size_t>(si)] = t;
    }
    // deterministic ordered reduction, independent of thread count
    NeumaierSum acc;
    for (double s : seg_sum) acc.add(s);
    partial = acc.value();
    tN = seg_end.back();
  }

  double T = tail_correction(m, n_terms, tN);
  return {partial + T, std::fabs(T), n_terms};
}

double gauss_2f1_oracle(double a, double b, double c) {
  if (!(c > 0.0) || !(c - a - b > 0.0))
    throw std::domain_error("gauss_2f1_oracle: needs c > 0 and c - a - b > 0");
  if (!(c - a > 0.0) || !(c - b > 0.0))
    throw std::domain_error("gauss_2f1_oracle: c - a and c - b must be positive");
  return std::exp(log_gamma(c) + log_gamma(c - a - b) - log_gamma(c - a) -
                  log_gamma(c - b));
}

} // namespace erw
