#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace erw {

// ln Gamma(x) for x > 0. Thread-safe (does not touch the global signgam).
double log_gamma(double x);

// Rising factorial (a)_n = a(a+1)...(a+n-1), (a)_0 = 1.
double pochhammer(double a, long n);

// Compensated (Neumaier) accumulator; keeps rounding error bounded when
// summing 1e6+ series terms of shrinking magnitude.
struct NeumaierSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0; // certified bound on |value - true sum|
  long terms_used = 1;
};

// Parameter lists of a (p+1)Fp series evaluated at unit argument.
// Construction enforces: one more numerator than denominator entry,
// denominators strictly positive, numerators nonnegative (a zero
// numerator truncates the series to its first term), and a positive
// convergence margin, without which the series diverges at z = 1.
class HypSeries {
public:
  HypSeries(std::vector<double> num, std::vector<double> den);
  const std::vector<double>& num() const { return num_; }
  const std::vector<double>& den() const { return den_; }

private:
  std::vector<double> num_;
  std::vector<double> den_;
};

// s = sum(den) - sum(num); terms decay like n^-(s+1).
double convergence_margin(const HypSeries& s);

// Thrown when max_terms is hit before the certified bound reaches the
// tolerance; carries the best value obtained and its bound.
struct SeriesTruncationError : std::runtime_error {
  SeriesValue best;
  SeriesTruncationError(const std::string& msg, SeriesValue b)
      : std::runtime_error(msg), best(b) {}
};

// Sums the series with forward term recurrence plus an integral-comparison
// tail correction, stopping at the first doubling checkpoint whose
// certified bound is <= abs_tol. Guarantee: |value - true| <= tail_bound.
SeriesValue pfq_sum_z1(const HypSeries& s, double abs_tol = 1e-10,
                       long max_terms = 10000000L);

// Sums exactly n_terms terms and applies the same tail correction there.
// No stopping logic; tail_bound reports the correction magnitude, not a
// certificate. parallel=true uses the chunked OpenMP kernel, whose
// segmentation is fixed by n_terms alone so results do not depend on the
// worker count.
SeriesValue pfq_sum_z1_fixed(const HypSeries& s, long n_terms,
                             bool parallel = false);

// Closed form for 2F1(a,b;c;1), used only as an independent test oracle.
double gauss_2f1_oracle(double a, double b, double c);

} // namespace erw
