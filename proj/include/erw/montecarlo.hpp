#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "erw/moments.hpp"

namespace erw {

struct SimConfig {
  ErwParams params;
  long n_steps = 1000;
  long n_walks = 10000;
  std::uint64_t seed = 0;
  std::vector<int> moment_orders = {1, 2, 3, 4};
};

struct MomentEstimate {
  int d = 0;
  double mean_S = 0.0;
  double stderr_S = 0.0;
  double mean_L = 0.0;
  double stderr_L = 0.0;
};

struct SimResult {
  SimConfig config; // echo
  std::vector<MomentEstimate> moments;
};

// Final positions S_n of every walk, one entry per walk index. Each walk
// draws from its own counter-derived stream, so the array is identical
// whatever the thread count; parallel=false runs the plain-loop reference.
std::vector<double> sample_final_positions(const SimConfig& config,
                                           bool parallel);

// Runs the walks (OpenMP over walk indices) and reduces moments in walk
// order. Bit-reproducible for a fixed (config, seed).
SimResult simulate(const SimConfig& config);

// Serial reference: same streams, same ordered reduction, no OpenMP.
// Must match simulate() bitwise.
SimResult simulate_reference(const SimConfig& config);

// Sample mean of d-th powers and its standard error (stdev / sqrt(n)).
std::pair<double, double> empirical_moment(const std::vector<double>& samples,
                                           int d);

} // namespace erw
