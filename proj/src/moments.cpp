#include "erw/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "erw/specfun.hpp"

namespace erw {

namespace {

void check_prob(const Numeric& x, const char* name) {
  if (x < Numeric(0) || x > Numeric(1))
    throw std::domain_error(std::string(name) + " must lie in [0,1]");
}

// Rising factorial over rationals: (x0)(x0+1)...(x0+m-1). The closed-form
// Gamma ratios all reduce to these, which is what keeps exact mode exact.
Rational poch_rat(const Rational& x0, long m) {
  Rational p = 1;
  for (long i = 0; i < m; ++i) p *= (x0 + i);
  return p;
}

Rational fact_rat(long m) { return poch_rat(Rational(1), m); }

template <typename T>
struct Field;

template <>
struct Field<double> {
  static double from_long(long v) { return static_cast<double>(v); }
  static double binom(long n, long k) {
    return static_cast<double>(rational_binom(n, k));
  }
  static bool finite(double v) { return std::isfinite(v); }
};

template <>
struct Field<Rational> {
  static Rational from_long(long v) { return Rational(v); }
  static Rational binom(long n, long k) { return rational_binom(n, k); }
  static bool finite(const Rational&) { return true; }
};

// Full parity triangle of the one-step update. Row k consumes rows
// k, k-2, k-4, ... of the previous time slice.
template <typename T>
void recursion_fill(const T& a, const T& b, int d, long n_max,
                    std::vector<T>& out) {
  std::vector<T> cur(static_cast<std::size_t>(d) + 1, T(0));
  for (int k = 1; k <= d; ++k) cur[k] = (k % 2 == 0) ? T(1) : b;
  auto record = [&](long n) {
    for (int k = 1; k <= d; ++k) {
      const T& v = cur[k];
      if (!Field<T>::finite(v))
        throw std::overflow_error(
            "moment_recursion: float overflow at n=" + std::to_string(n) +
            "; use exact mode or the log-space closed forms");
      out[static_cast<std::size_t>((n - 1) * d + (k - 1))] = v;
    }
  };
  record(1);
  std::vector<T> nxt(static_cast<std::size_t>(d) + 1, T(0));
  for (long n = 1; n < n_max; ++n) {
    T an = a / Field<T>::from_long(n);
    for (int k = 1; k <= d; ++k) {
      long kp = (k % 2 == 0) ? (k - 2) / 2 : (k - 1) / 2;
      T acc = (k % 2 == 0) ? T(1) : T(0);
      for (long j = 0; j <= kp; ++j) {
        T A = Field<T>::binom(k, 2 * j) + an * Field<T>::binom(k, 2 * j + 1);
        acc += A * cur[static_cast<std::size_t>(k - 2 * j)];
      }
      nxt[static_cast<std::size_t>(k)] = acc;
    }
    std::swap(cur, nxt);
    record(n + 1);
  }
}

// Joint (al, be) triangle for the walk with stops, al + 2be <= d.
// S gains the step X, M gains X^2 (the nonzero-step counter), and the
// conditional step moments are linear in S or M, so the triangle closes.
struct PairIndex {
  int d;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> lookup; // (al, be) -> slot

  explicit PairIndex(int d_) : d(d_) {
    lookup.assign(static_cast<std::size_t>((d + 1) * (d / 2 + 1)), -1);
    for (int be = 0; 2 * be <= d; ++be)
      for (int al = 0; al + 2 * be <= d; ++al) {
        lookup[key(al, be)] = static_cast<int>(pairs.size());
        pairs.emplace_back(al, be);
      }
  }
  std::size_t key(int al, int be) const {
    return static_cast<std::size_t>(be) * (d + 1) + al;
  }
  int slot(int al, int be) const { return lookup[key(al, be)]; }
};

template <typename T>
void stops_fill(const T& p, const T& q, const T& s, int d, long n_max,
                std::vector<T>& out) {
  PairIndex ix(d);
  const T pq_sum = p + q;   // weight of even step powers
  const T pq_diff = p - q;  // weight of odd step powers
  const T first = s + s - T(1);

  std::vector<T> st(ix.pairs.size());
  for (std::size_t i = 0; i < ix.pairs.size(); ++i) {
    int al = ix.pairs[i].first;
    st[i] = (al % 2 == 0) ? T(1) : first; // M_1 = 1, so M powers drop out
  }
  auto record = [&](long n) {
    for (int k = 1; k <= d; ++k) {
      const T& v = st[static_cast<std::size_t>(ix.slot(k, 0))];
      if (!Field<T>::finite(v))
        throw std::overflow_error(
            "stops_moment_recursion: float overflow at n=" +
            std::to_string(n) + "; use exact mode");
      out[static_cast<std::size_t>((n - 1) * d + (k - 1))] = v;
    }
  };
  record(1);
  std::vector<T> nx(st.size());
  for (long n = 1; n < n_max; ++n) {
    T inv_n = T(1) / Field<T>::from_long(n);
    for (std::size_t i = 0; i < ix.pairs.size(); ++i) {
      int al = ix.pairs[i].first;
      int be = ix.pairs[i].second;
      T acc = st[i]; // u = 0, v = 0
      for (int u = 0; u <= al; ++u)
        for (int v = 0; v <= be; ++v) {
          if (u == 0 && v == 0) continue;
          T cuv = Field<T>::binom(al, u) * Field<T>::binom(be, v);
          if (u % 2 == 1) {
            // E[X^odd | past] = (p-q) S/n
            acc += cuv * pq_diff * inv_n *
                   st[static_cast<std::size_t>(ix.slot(al - u + 1, be - v))];
          } else {
            // E[X^even | past] = (p+q) M/n
            acc += cuv * pq_sum * inv_n *
                   st[static_cast<std::size_t>(ix.slot(al - u, be - v + 1))];
          }
        }
      nx[i] = acc;
    }
    std::swap(st, nx);
    record(n + 1);
  }
}

// E[S_n^d] from the float recursion at the requested time points, one
// streaming pass. nodes must be sorted ascending.
std::vector<double> float_moments_at(double a, double b, int d,
                                     const std::vector<long>& nodes) {
  std::vector<double> vals(nodes.size(), 0.0);
  if (nodes.empty()) return vals;
  long n_max = nodes.back();
  std::vector<double> cur(static_cast<std::size_t>(d) + 1, 0.0);
  for (int k = 1; k <= d; ++k) cur[k] = (k % 2 == 0) ? 1.0 : b;
  std::size_t next = 0;
  auto capture = [&](long n) {
    while (next < nodes.size() && nodes[next] == n) vals[next++] = cur[d];
  };
  capture(1);
  std::vector<double> nxt(static_cast<std::size_t>(d) + 1, 0.0);
  for (long n = 1; n < n_max; ++n) {
    double an = a / static_cast<double>(n);
    for (int k = 1; k <= d; ++k) {
      long kp = (k % 2 == 0) ? (k - 2) / 2 : (k - 1) / 2;
      double acc = (k % 2 == 0) ? 1.0 : 0.0;
      for (long j = 0; j <= kp; ++j) {
        double A = Field<double>::binom(k, 2 * j) +
                   an * Field<double>::binom(k, 2 * j + 1);
        acc += A * cur[static_cast<std::size_t>(k - 2 * j)];
      }
      nxt[static_cast<std::size_t>(k)] = acc;
    }
    std::swap(cur, nxt);
    capture(n + 1);
  }
  return vals;
}

double scaled_from_raw(double a, int d, long n, double raw) {
  double nd = static_cast<double>(n);
  return std::exp(d * (log_gamma(nd) - log_gamma(nd + a))) * raw;
}

// Correction exponents of E[L_n^d] - E[L^d]: the closed forms mix the
// leading Gamma-ratio term (1/n family) with subtracted lower-order terms
// that scale like n^{j(1-2a)}.
std::vector<double> correction_exponents(double a, int d) {
  std::vector<double> es;
  for (int j = 1; j <= d / 2; ++j) es.push_back(j * (1.0 - 2.0 * a));
  es.push_back(-1.0);
  es.push_back((1.0 - 2.0 * a) - 1.0);
  es.push_back(-2.0);
  std::vector<double> kept;
  std::sort(es.begin(), es.end(), std::greater<double>());
  for (double e : es) {
    if (!(e > -2.3 && e < -1e-9)) continue;
    bool fresh = true;
    for (double k : kept)
      if (std::fabs(e - k) <= 0.03) fresh = false;
    if (fresh) kept.push_back(e);
    if (kept.size() == 5) break;
  }
  return kept;
}

// Gaussian elimination with partial pivoting; fine at this size (<= 6).
std::vector<double> solve_dense(std::vector<std::vector<double>> A,
                                std::vector<double> y) {
  const std::size_t n = y.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    std::swap(y[col], y[piv]);
    if (A[col][col] == 0.0)
      throw std::runtime_error("extrapolation system is singular");
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = A[r][col] / A[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      y[r] -= f * y[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double acc = y[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= A[r][c] * x[c];
    x[r] = acc / A[r][r];
  }
  return x;
}

void require_supercritical(const ErwParams& params, const char* what) {
  if (!(params.a_f() > 0.5))
    throw std::domain_error(std::string(what) +
                            " requires a > 1/2 (memory parameter p > 3/4)");
}

} // namespace

ErwParams ErwParams::standard(Numeric p, Numeric q) {
  check_prob(p, "p");
  check_prob(q, "q");
  ErwParams out;
  out.mode = WalkMode::standard;
  out.p = p;
  out.q = q;
  out.r = Numeric(0);
  out.s = q;
  return out;
}

ErwParams ErwParams::stops(Numeric p, Numeric q, Numeric r, Numeric s) {
  check_prob(p, "p");
  check_prob(q, "q");
  check_prob(r, "r");
  check_prob(s, "s");
  if (r >= Numeric(1)) throw std::domain_error("r must lie in [0,1)");
  Numeric sum = p + q + r;
  bool ok = sum.is_exact() ? (sum == Numeric(1))
                           : std::fabs(sum.as_double() - 1.0) <= 1e-12;
  if (!ok)
    throw std::domain_error("stops parameters must satisfy p + q + r = 1");
  ErwParams out;
  out.mode = WalkMode::stops;
  out.p = p;
  out.q = q;
  out.r = r;
  out.s = s;
  return out;
}

Numeric ErwParams::a() const {
  if (mode == WalkMode::stops) return p - q;
  return p + p - Numeric(1);
}

Numeric ErwParams::first_step_mean() const {
  const Numeric& f = (mode == WalkMode::stops) ? s : q;
  return f + f - Numeric(1);
}

bool ErwParams::is_exact() const {
  return p.is_exact() && q.is_exact() && r.is_exact() && s.is_exact();
}

Numeric a_n(long n, const Numeric& a) {
  if (n < 1) throw std::domain_error("a_n: n must be >= 1");
  if (!(a.as_double() > -1.0)) throw std::domain_error("a_n: needs a > -1");
  if (a.is_exact()) {
    Rational prod = 1;
    for (long k = 1; k < n; ++k) prod *= Rational(k) / (Rational(k) + a.rat());
    return Numeric(prod);
  }
  double af = a.as_double();
  double nd = static_cast<double>(n);
  return Numeric(
      std::exp(log_gamma(nd) + log_gamma(af + 1.0) - log_gamma(nd + af)));
}

Numeric step_coeff(long k, long d, long n, const Numeric& a) {
  if (k < 0 || 2 * k > d) throw std::domain_error("step_coeff: need 0 <= 2k <= d");
  if (n < 1) throw std::domain_error("step_coeff: n must be >= 1");
  Numeric c0{rational_binom(d, 2 * k)};
  Numeric c1{rational_binom(d, 2 * k + 1)};
  return c0 + a / Numeric(n) * c1;
}

MomentTable moment_recursion(const ErwParams& params, int d, long n_max,
                             NumMode mode) {
  if (params.mode != WalkMode::standard)
    throw std::domain_error(
        "moment_recursion handles the standard walk; use "
        "stops_moment_recursion for r > 0");
  if (d < 1) throw std::domain_error("moment_recursion: d must be >= 1");
  if (n_max < 1) throw std::domain_error("moment_recursion: n_max must be >= 1");

  MomentTable table;
  table.d = d;
  table.n_max = n_max;
  table.entries.assign(static_cast<std::size_t>(d) * n_max, Numeric(0));

  bool exact = (mode == NumMode::exact);
  if (exact && !params.is_exact()) {
    exact = false;
    table.note = "exact mode requires rational p and q; computed with floats";
  }
  if (exact) {
    std::vector<Rational> vals(table.entries.size());
    recursion_fill<Rational>(params.a().rat(), params.first_step_mean().rat(),
                             d, n_max, vals);
    for (std::size_t i = 0; i < vals.size(); ++i)
      table.entries[i] = Numeric(std::move(vals[i]));
    table.exact = true;
  } else {
    std::vector<double> vals(table.entries.size());
    recursion_fill<double>(params.a_f(), params.first_step_mean().as_double(),
                           d, n_max, vals);
    for (std::size_t i = 0; i < vals.size(); ++i)
      table.entries[i] = Numeric(vals[i]);
    table.exact = false;
  }
  return table;
}

Numeric closed_moment(const ErwParams& params, int d, long n, NumMode mode) {
  if (params.mode != WalkMode::standard)
    throw std::domain_error("closed_moment applies to the standard walk");
  if (d < 2 || d > 4)
    throw std::domain_error("closed_moment: d must be 2, 3 or 4");
  if (n < 1) throw std::domain_error("closed_moment: n must be >= 1");

  const Numeric a = params.a();
  if (a == Numeric(Rational(1, 2)) || a.as_double() == 0.5)
    throw std::domain_error("closed_moment: singular factor 2a-1 (a = 1/2)");
  if (d == 4 && (a == Numeric(Rational(1, 4)) || a.as_double() == 0.25))
    throw std::domain_error("closed_moment: singular factor 4a-1 (a = 1/4)");

  if (mode == NumMode::exact) {
    if (!params.is_exact())
      throw std::invalid_argument(
          "closed_moment: exact mode needs rational parameters");
    const Rational& ar = a.rat();
    const Rational br = params.first_step_mean().rat();
    if (d == 2) {
      Rational lead = poch_rat(2 * ar, n) / fact_rat(n) - 1;
      return Numeric(lead * Rational(n) / (2 * ar - 1));
    }
    if (d == 3) {
      Rational t = 3 * (ar + 1) * poch_rat(3 * ar + 1, n - 1) -
                   (Rational(3 * n) + ar + 1) * poch_rat(ar + 1, n - 1);
      return Numeric(br * t / ((2 * ar - 1) * fact_rat(n - 1)));
    }
    Rational g1 = 6 * (2 * ar * ar + 2 * ar - 1) / (4 * ar - 1) *
                  poch_rat(4 * ar, n);
    Rational g2 = -2 * (Rational(3 * n + 2) + 2 * ar) * poch_rat(2 * ar, n);
    Rational part_a = (g1 + g2) / ((2 * ar - 1) * (2 * ar - 1) * fact_rat(n - 1));
    Rational part_b = ((4 * ar * ar - 12 * ar + 5) * Rational(n) / (4 * ar - 1) +
                       Rational(3 * n) * Rational(n + 1)) /
                      ((2 * ar - 1) * (2 * ar - 1));
    return Numeric(part_a + part_b);
  }

  const double af = a.as_double();
  if (!(af > 0.0))
    throw std::domain_error("closed_moment: float path needs a > 0");
  const double bf = params.first_step_mean().as_double();
  const double nd = static_cast<double>(n);
  auto lg = [](double x) { return log_gamma(x); };
  if (d == 2) {
    double ratio = std::exp(lg(nd + 2 * af) - lg(nd + 1) - lg(2 * af));
    return Numeric(nd / (2 * af - 1) * (ratio - 1.0));
  }
  if (d == 3) {
    double r3 = std::exp(lg(nd + 3 * af) - lg(3 * af + 1) - lg(nd));
    double r1 = std::exp(lg(nd + af) - lg(af + 1) - lg(nd));
    return Numeric(bf / (2 * af - 1) *
                   (3 * (af + 1) * r3 - (3 * nd + af + 1) * r1));
  }
  double r4 = std::exp(lg(nd + 4 * af) - lg(4 * af) - lg(nd));
  double r2 = std::exp(lg(nd + 2 * af) - lg(2 * af) - lg(nd));
  double v = 6 * (2 * af * af + 2 * af - 1) / (4 * af - 1) * r4 -
             2 * (3 * nd + 2 + 2 * af) * r2 +
             (4 * af * af - 12 * af + 5) * nd / (4 * af - 1) +
             3 * nd * (nd + 1);
  return Numeric(v / ((2 * af - 1) * (2 * af - 1)));
}

ScaledMoment scaled_moment(const ErwParams& params, int d, long n) {
  require_supercritical(params, "scaled_moment");
  if (d < 1) throw std::domain_error("scaled_moment: d must be >= 1");
  if (n < 1) throw std::domain_error("scaled_moment: n must be >= 1");
  double raw;
  if (d >= 2 && d <= 4) {
    raw = closed_moment(params, d, n, NumMode::floating).as_double();
  } else {
    raw = float_moments_at(params.a_f(), params.first_step_mean().as_double(),
                           d, {n})[0];
  }
  return {n, d, scaled_from_raw(params.a_f(), d, n, raw)};
}

double limit_moment(const ErwParams& params, int d) {
  require_supercritical(params, "limit_moment");
  const double a = params.a_f();
  const double b = params.first_step_mean().as_double();
  switch (d) {
    case 1:
      return b * std::exp(-log_gamma(a + 1.0));
    case 2:
      return std::exp(-log_gamma(2.0 * a)) / (2.0 * a - 1.0);
    case 3:
      return b * (a + 1.0) * std::exp(-log_gamma(3.0 * a)) /
             (a * (2.0 * a - 1.0));
    case 4:
      return 6.0 * (2.0 * a * a + 2.0 * a - 1.0) * std::exp(-log_gamma(4.0 * a)) /
             ((4.0 * a - 1.0) * (2.0 * a - 1.0) * (2.0 * a - 1.0));
    default:
      throw std::domain_error("limit_moment: closed forms exist for d = 1..4");
  }
}

double limit_moment_numeric(const ErwParams& params, int d, long n_max) {
  require_supercritical(params, "limit_moment_numeric");
  if (d < 1) throw std::domain_error("limit_moment_numeric: d must be >= 1");
  const double a = params.a_f();
  const std::vector<double> es = correction_exponents(a, d);
  const std::size_t m = es.size();
  if (n_max < (2L << m))
    throw std::domain_error("limit_moment_numeric: n_max too small");

  std::vector<long> nodes;
  for (std::size_t i = 0; i <= m; ++i) nodes.push_back(n_max >> i);
  std::sort(nodes.begin(), nodes.end());

  std::vector<double> raw = float_moments_at(
      a, params.first_step_mean().as_double(), d, nodes);
  std::vector<std::vector<double>> A(m + 1, std::vector<double>(m + 1, 0.0));
  std::vector<double> y(m + 1, 0.0);
  for (std::size_t i = 0; i <= m; ++i) {
    long n = nodes[nodes.size() - 1 - i]; // largest first
    y[i] = scaled_from_raw(a, d, n, raw[nodes.size() - 1 - i]);
    A[i][0] = 1.0;
    for (std::size_t k = 0; k < m; ++k)
      A[i][k + 1] = std::pow(static_cast<double>(n), es[k]);
  }
  return solve_dense(std::move(A), std::move(y))[0];
}

MomentTable stops_moment_recursion(const ErwParams& params, int d, long n_max,
                                   NumMode mode) {
  if (params.mode != WalkMode::stops)
    throw std::domain_error(
        "stops_moment_recursion needs stops-mode parameters (p + q + r = 1)");
  if (d < 1) throw std::domain_error("stops_moment_recursion: d must be >= 1");
  if (n_max < 1)
    throw std::domain_error("stops_moment_recursion: n_max must be >= 1");

  MomentTable table;
  table.d = d;
  table.n_max = n_max;
  table.entries.assign(static_cast<std::size_t>(d) * n_max, Numeric(0));

  bool exact = (mode == NumMode::exact);
  if (exact && !params.is_exact()) {
    exact = false;
    table.note = "exact mode requires rational parameters; computed with floats";
  }
  if (exact) {
    std::vector<Rational> vals(table.entries.size());
    stops_fill<Rational>(params.p.rat(), params.q.rat(), params.s.rat(), d,
                         n_max, vals);
    for (std::size_t i = 0; i < vals.size(); ++i)
      table.entries[i] = Numeric(std::move(vals[i]));
    table.exact = true;
  } else {
    std::vector<double> vals(table.entries.size());
    stops_fill<double>(params.p.as_double(), params.q.as_double(),
                       params.s.as_double(), d, n_max, vals);
    for (std::size_t i = 0; i < vals.size(); ++i)
      table.entries[i] = Numeric(vals[i]);
    table.exact = false;
  }
  return table;
}

} // namespace erw
