// Serial-vs-OpenMP timing for the two hot kernels: fixed-length series
// summation and batched walk simulation. Both pairs must agree exactly
// (bitwise for the walks, tiny quoted delta for the chunked sum), so this
// doubles as a smoke test of the reduction order.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "erw/montecarlo.hpp"
#include "erw/specfun.hpp"

namespace {

double seconds(std::chrono::steady_clock::time_point t0,
               std::chrono::steady_clock::time_point t1) {
  return std::chrono::duration<double>(t1 - t0).count();
}

void bench_series() {
  // margin 0.2: the slowest series the identity suite ever meets
  erw::HypSeries s({1.0, 1.0, 1.0}, {1.6, 1.6});
  const long n_terms = 50000000;

  auto t0 = std::chrono::steady_clock::now();
  erw::SeriesValue serial = erw::pfq_sum_z1_fixed(s, n_terms, false);
  auto t1 = std::chrono::steady_clock::now();
  erw::SeriesValue parallel = erw::pfq_sum_z1_fixed(s, n_terms, true);
  auto t2 = std::chrono::steady_clock::now();

  double ts = seconds(t0, t1), tp = seconds(t1, t2);
  std::printf("series    3F2 margin 0.2, %ld terms\n", n_terms);
  std::printf("  serial   %8.3f s   value %.17g\n", ts, serial.value);
  std::printf("  parallel %8.3f s   value %.17g\n", tp, parallel.value);
  std::printf("  speedup  %8.2fx   |delta| %.3g\n", ts / tp,
              std::fabs(serial.value - parallel.value));
}

void bench_walks() {
  erw::SimConfig cfg;
  cfg.params = erw::ErwParams::standard(erw::Numeric(0.85), erw::Numeric(0.9));
  cfg.n_steps = 2000;
  cfg.n_walks = 40000;
  cfg.seed = 7;

  auto t0 = std::chrono::steady_clock::now();
  erw::SimResult serial = erw::simulate_reference(cfg);
  auto t1 = std::chrono::steady_clock::now();
  erw::SimResult parallel = erw::simulate(cfg);
  auto t2 = std::chrono::steady_clock::now();

  bool identical = true;
  for (std::size_t i = 0; i < serial.moments.size(); ++i) {
    identical = identical &&
                serial.moments[i].mean_S == parallel.moments[i].mean_S &&
                serial.moments[i].stderr_S == parallel.moments[i].stderr_S;
  }

  double ts = seconds(t0, t1), tp = seconds(t1, t2);
  std::printf("walks     p=0.85 q=0.9, %ld steps x %ld walks\n", cfg.n_steps,
              cfg.n_walks);
  std::printf("  serial   %8.3f s   E[S] %.10g\n", ts, serial.moments[0].mean_S);
  std::printf("  parallel %8.3f s   E[S] %.10g\n", tp,
              parallel.moments[0].mean_S);
  std::printf("  speedup  %8.2fx   bitwise equal: %s\n", ts / tp,
              identical ? "yes" : "NO");
}

} // namespace

int main() {
  bench_series();
  bench_walks();
  return 0;
}
