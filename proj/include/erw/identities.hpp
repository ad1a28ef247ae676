#pragma once

#include <string>
#include <utility>
#include <vector>

#include "erw/specfun.hpp"

namespace erw {

// Both sides of one identity instance, evaluated by unrelated code paths:
// the Gamma-product side touches no series summation, the series side no
// limiting-moment formulas. residual is the symmetric relative gap with a
// 1e-14 floor on the denominator; tail_allowance is the summation
// uncertainty propagated through the same denominator, so
// pass <=> residual <= tol + tail_allowance.
struct IdentityReport {
  std::string kind;
  double a = 0.0;
  double b = 0.0; // stops only
  int d = 0;      // general only
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  std::vector<double> series_tail_bounds;
  std::vector<long> terms_used;
  double tol = 0.0;
  double tail_allowance = 0.0;
  bool pass = false;
};

// The series instances one identity evaluation consumes, in evaluation
// order. The single source the evaluators draw from, exposed so soundness
// checks can re-sum exactly the instances a report was built from.
std::vector<HypSeries> identity_series(const std::string& kind, double a,
                                       double b, int d);

IdentityReport eval_t1(double a, double tol = 1e-7);
IdentityReport eval_t2(double a, double tol = 1e-7);
IdentityReport eval_t3(double a, double tol = 1e-7);
IdentityReport eval_t4(double a, double tol = 1e-7);

// Sum_{k=0}^{d-2} C(d,k) a^{d-k} F_k = (a+1)^d - Gamma(a+2)^d/Gamma(ad+1)
// where F_k has numerator parameters (1 x (d-k), 2 x k, ad+1) and d copies
// of a+2 downstairs. Slowest series has margin d-k-1 = 1.
IdentityReport eval_general(double a, int d, double tol);
IdentityReport eval_general(double a, int d); // default tol: 1e-7, 1e-6 for d >= 5

// Two-parameter variant tied to the walk with stops; needs a > 0, b > 0,
// 2a > b. At b = 1 it collapses term by term onto eval_t4.
IdentityReport eval_stops(double a, double b, double tol = 1e-7);

// One step of the telescoping scheme behind the general identity:
// lhs = a_n^d G(n+ad)/G(n) - a_{n-1}^d G(n-1+ad)/G(n-1), rhs the factored
// form. Both are a shared positive log-space prefactor times small
// polynomial brackets, which keeps the comparison meaningful at 1e-12.
std::pair<double, double> telescoping_term(double a, int d, long n);

// Sum of telescoping_term lhs over n = 2..n_max. Converges to
// Gamma(a+1)^d - Gamma(ad+1) at rate 1/n_max.
double telescoping_partial_sum(double a, int d, long n_max);

// E[L^d] for d = 2,3,4 obtained by solving the matching identity for the
// limiting moment, i.e. the series side evaluated by summation. The third
// leg of the limit-moment consistency triangle.
double series_limit_moment(double a, double b, int d);

// Shared residual/pass bookkeeping, exposed for direct testing.
IdentityReport finalize_report(std::string kind, double a, double b, int d,
                               double lhs, double rhs,
                               std::vector<double> tail_bounds,
                               std::vector<long> terms,
                               double propagated_abs, double tol);

} // namespace erw
