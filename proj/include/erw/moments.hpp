#pragma once

#include <string>
#include <vector>

#include "erw/numeric.hpp"

namespace erw {

enum class WalkMode { standard, stops };
enum class NumMode { exact, floating };

// Walk parameters. Standard mode: p is the memory parameter (probability
// of repeating the chosen past step), q the first-step right-probability.
// Stops mode: the chosen past step is repeated with probability p, flipped
// with probability q, annihilated with probability r (p+q+r = 1); the
// first step is +1 with probability s and never 0.
struct ErwParams {
  WalkMode mode = WalkMode::standard;
  Numeric p{0};
  Numeric q{0};
  Numeric r{0};
  Numeric s{0};

  static ErwParams standard(Numeric p, Numeric q);
  static ErwParams stops(Numeric p, Numeric q, Numeric r, Numeric s);

  // Drift coupling: 2p-1 for the standard walk, p-q with stops.
  Numeric a() const;
  // First-step mean: 2q-1 standard, 2s-1 with stops.
  Numeric first_step_mean() const;
  double a_f() const { return a().as_double(); }
  double b_f() const { return (q + q - Numeric(1)).as_double(); }

  bool is_exact() const;
};

// E[S_n^k] for 1 <= k <= d, 1 <= n <= n_max.
struct MomentTable {
  int d = 0;
  long n_max = 0;
  bool exact = false; // every entry is a rational
  std::string note;   // set when exact mode had to fall back to floats
  std::vector<Numeric> entries;

  const Numeric& at(long n, int k) const {
    return entries[static_cast<std::size_t>((n - 1) * d + (k - 1))];
  }
  Numeric& at(long n, int k) {
    return entries[static_cast<std::size_t>((n - 1) * d + (k - 1))];
  }
};

struct ScaledMoment {
  long n = 0;
  int d = 0;
  double value = 0.0; // a_n^d E[S_n^d] / Gamma(a+1)^d
};

// a_1 = 1, a_n = prod_{k<n} k/(k+a); rational when a is, else via log_gamma.
Numeric a_n(long n, const Numeric& a);

// C(d,2k) + (a/n) C(d,2k+1), the weight multiplying E[S_n^{d-2k}] in the
// one-step moment update.
Numeric step_coeff(long k, long d, long n, const Numeric& a);

// Fills the full moment triangle k = 1..d by the one-step recursion
// E[S_{n+1}^k] = sum_j step_coeff(j,k,n,a) E[S_n^{k-2j}] + [k even],
// E[S_1^k] = 1 (k even), b (k odd). Odd rows feed even rows and vice
// versa, so all orders are carried jointly. Exact mode keeps every entry
// rational; if the parameters are floats it falls back to floats and says
// so in the table note.
MomentTable moment_recursion(const ErwParams& params, int d, long n_max,
                             NumMode mode = NumMode::exact);

// Closed forms for E[S_n^d], d = 2, 3, 4. Exact mode works for any
// rational a away from the singular factors (the Gamma ratios reduce to
// rising factorials); float mode evaluates in log space.
Numeric closed_moment(const ErwParams& params, int d, long n,
                      NumMode mode = NumMode::floating);

// E[L_n^d] where L_n = a_n S_n / Gamma(a+1); log-space scaling so large n
// cannot overflow. Uses the closed forms for d <= 4, the recursion above.
ScaledMoment scaled_moment(const ErwParams& params, int d, long n);

// Printed closed forms for E[L^d], d = 1..4; requires a > 1/2.
double limit_moment(const ErwParams& params, int d);

// Estimates lim_n E[L_n^d] from the float recursion at n_max and halved
// checkpoints, eliminating the known correction exponents (j(1-2a) for
// j = 1..floor(d/2), plus -1, -2a, -2). Works for any d, in particular
// d > 4 where no closed form exists.
double limit_moment_numeric(const ErwParams& params, int d, long n_max);

// Same contract as moment_recursion for the walk with stops. Even step
// powers contribute (p+q) M_n/n where M_n counts the nonzero steps so
// far, so the recursion carries the joint moments E[S^al M^be] for
// al + 2be <= d (docs/methods.md has the derivation).
MomentTable stops_moment_recursion(const ErwParams& params, int d, long n_max,
                                   NumMode mode = NumMode::exact);

} // namespace erw
