#include "erw/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "erw/specfun.hpp"

namespace erw {

namespace {

// SplitMix64. Each walk gets its own stream seeded from a mixed function
// of (master seed, walk index); see docs/methods.md for the derivation
// and the stream-collision argument.
struct SplitMix64 {
  std::uint64_t x;
  explicit SplitMix64(std::uint64_t state) : x(state) {}
  std::uint64_t next() {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1), 53 random bits
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

SplitMix64 walk_stream(std::uint64_t seed, long walk) {
  return SplitMix64(
      mix64(seed ^ (static_cast<std::uint64_t>(walk + 1) * 0xD2B74407B1CE6E93ull)));
}

void validate(const SimConfig& c) {
  if (c.n_steps < 1) throw std::domain_error("simulate: n_steps must be >= 1");
  if (c.n_walks < 1) throw std::domain_error("simulate: n_walks must be >= 1");
  if (c.moment_orders.empty())
    throw std::domain_error("simulate: moment_orders must be non-empty");
  for (int d : c.moment_orders)
    if (d < 1) throw std::domain_error("simulate: moment orders must be >= 1");
}

double run_standard_walk(SplitMix64 rng, double a, double q, long n_steps) {
  long long S = (rng.next_double() < q) ? 1 : -1;
  for (long n = 1; n < n_steps; ++n) {
    // exact one-draw update: P(next = +1 | past) = (1 + a S/n)/2
    double pn = 0.5 * (1.0 + a * static_cast<double>(S) / static_cast<double>(n));
    S += (rng.next_double() < pn) ? 1 : -1;
  }
  return static_cast<double>(S);
}

double run_stops_walk(SplitMix64 rng, double p, double q, double s,
                      long n_steps) {
  // counts of past +1 / -1 steps are a sufficient statistic: a uniformly
  // chosen past step is +1 with probability Np/n, and the kernel then
  // repeats with p, flips with q, stops with r
  long long S = (rng.next_double() < s) ? 1 : -1;
  double Np = (S > 0) ? 1.0 : 0.0;
  double Nm = 1.0 - Np;
  for (long n = 1; n < n_steps; ++n) {
    double inv_n = 1.0 / static_cast<double>(n);
    double p_plus = (p * Np + q * Nm) * inv_n;
    double p_minus = (q * Np + p * Nm) * inv_n;
    double u = rng.next_double();
    if (u < p_plus) {
      S += 1;
      Np += 1.0;
    } else if (u < p_plus + p_minus) {
      S -= 1;
      Nm += 1.0;
    }
    // else the step is 0: S and the nonzero counters stay put
  }
  return static_cast<double>(S);
}

std::vector<double> run_walks(const SimConfig& c, bool parallel) {
  validate(c);
  const ErwParams& pr = c.params;
  std::vector<double> out(static_cast<std::size_t>(c.n_walks), 0.0);

  if (pr.mode == WalkMode::standard) {
    const double a = pr.a_f();
    const double q = pr.q.as_double();
#ifdef ERW_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (long w = 0; w < c.n_walks; ++w)
      out[static_cast<std::size_t>(w)] =
          run_standard_walk(walk_stream(c.seed, w), a, q, c.n_steps);
  } else {
    const double p = pr.p.as_double();
    const double q = pr.q.as_double();
    const double s = pr.s.as_double();
#ifdef ERW_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (long w = 0; w < c.n_walks; ++w)
      out[static_cast<std::size_t>(w)] =
          run_stops_walk(walk_stream(c.seed, w), p, q, s, c.n_steps);
  }
  return out;
}

SimResult reduce(const SimConfig& c, const std::vector<double>& S_final) {
  // L_n = a_n S_n / Gamma(a+1) = S_n Gamma(n)/Gamma(n+a)
  const double a = c.params.a_f();
  const double nd = static_cast<double>(c.n_steps);
  const double scale = std::exp(log_gamma(nd) - log_gamma(nd + a));

  SimResult res;
  res.config = c;
  for (int d : c.moment_orders) {
    auto [mS, seS] = empirical_moment(S_final, d);
    double f = std::pow(scale, d);
    res.moments.push_back({d, mS, seS, f * mS, f * seS});
  }
  return res;
}

} // namespace

std::vector<double> sample_final_positions(const SimConfig& config,
                                           bool parallel) {
  return run_walks(config, parallel);
}

SimResult simulate(const SimConfig& config) {
  return reduce(config, run_walks(config, true));
}

SimResult simulate_reference(const SimConfig& config) {
  return reduce(config, run_walks(config, false));
}

std::pair<double, double> empirical_moment(const std::vector<double>& samples,
                                           int d) {
  if (samples.size() < 2)
    throw std::domain_error("empirical_moment: need at least 2 samples");
  const double n = static_cast<double>(samples.size());
  NeumaierSum acc;
  for (double x : samples) acc.add(std::pow(x, d));
  const double mean = acc.value() / n;
  NeumaierSum sq;
  for (double x : samples) {
    double dev = std::pow(x, d) - mean;
    sq.add(dev * dev);
  }
  const double var = sq.value() / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

} // namespace erw
