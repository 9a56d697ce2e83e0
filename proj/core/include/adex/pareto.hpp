#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "adex/solver.hpp"

namespace adex {

// One point of the length-regret tradeoff: the information-balanced
// allocation with exploitation rate beta and its normalized length/regret.
struct FrontierPoint {
  double beta = 0.0;
  double norm_length = 0.0;
  double norm_regret = 0.0;
  std::vector<double> allocation;
  bool dominated = false;  // true exactly when beta < beta_BAI
};

FrontierPoint frontier_point(const Instance& instance, double beta);

struct Extremes {
  double l_star = 0.0;    // minimal normalized length
  double r_star = 0.0;    // minimal normalized regret
  double beta_bai = 0.0;  // exploitation rate attaining l_star (unit costs)
};

// Gaussian instances use the closed form R* = 2 sigma^2 sum_j 1/gap_j; other
// families take the numerical beta -> 1 limit at beta = 1 - 1e-6.
Extremes extremes(const Instance& instance);

// Frontier points for an increasing beta grid, with dominated flags filled
// from beta_BAI.
std::vector<FrontierPoint> trace_frontier(const Instance& instance,
                                          std::span<const double> beta_grid);

// CSV columns beta,norm_length,norm_regret,dominated plus, when ln_n > 0, the
// ln(n)-scaled pair scaled_length,scaled_regret. Starts with one comment line
// naming the instance; extra header lines may be prepended by the caller.
void write_frontier_csv(std::ostream& os, const Instance& instance,
                        std::span<const FrontierPoint> points, double ln_n = 0.0,
                        const std::string& header_comment = "");

}  // namespace adex
