#include "adex/pareto.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "adex/simulator.hpp"
#include "adex/state.hpp"

namespace adex {

FrontierPoint frontier_point(const Instance& instance, double beta) {
  const int best = instance.best_arm();
  FrontierPoint pt;
  pt.beta = beta;
  pt.allocation = solve_p_beta(instance, beta);

  // Information balance makes every pairwise Chernoff term equal; the
  // smallest one defines the length either way.
  double d_min = std::numeric_limits<double>::infinity();
  double gap_weighted = 0.0;
  for (int j = 0; j < instance.k(); ++j) {
    if (j == best) continue;
    const double d = chernoff_info(instance.family(), instance.means()[best],
                                   instance.means()[j], beta, pt.allocation[j])
                         .value;
    d_min = std::min(d_min, d);
    gap_weighted += pt.allocation[j] * instance.gap(j);
  }
  pt.norm_length = 1.0 / d_min;
  pt.norm_regret = pt.norm_length * gap_weighted;
  return pt;
}

Extremes extremes(const Instance& instance) {
  Extremes out;
  const OptimalAllocation bai = solve_p_star(instance, CostModel::unit());
  out.beta_bai = bai.p_star[bai.best];
  out.l_star = frontier_point(instance, out.beta_bai).norm_length;
  if (instance.family().is_gaussian()) {
    const double sigma = instance.family().sigma();
    double sum = 0.0;
    for (int j = 0; j < instance.k(); ++j) {
      if (j == bai.best) continue;
      sum += 1.0 / instance.gap(j);
    }
    out.r_star = 2.0 * sigma * sigma * sum;
  } else {
    out.r_star = frontier_point(instance, 1.0 - 1e-6).norm_regret;
  }
  return out;
}

std::vector<FrontierPoint> trace_frontier(const Instance& instance,
                                          std::span<const double> beta_grid) {
  const double beta_bai = extremes(instance).beta_bai;
  std::vector<FrontierPoint> points;
  points.reserve(beta_grid.size());
  for (double beta : beta_grid) {
    FrontierPoint pt = frontier_point(instance, beta);
    pt.dominated = beta < beta_bai;
    points.push_back(std::move(pt));
  }
  return points;
}

void write_frontier_csv(std::ostream& os, const Instance& instance,
                        std::span<const FrontierPoint> points, double ln_n,
                        const std::string& header_comment) {
  if (!header_comment.empty()) os << "# " << header_comment << "\n";
  os << "# instance:";
  switch (instance.family().kind()) {
    case FamilyKind::gaussian:
      os << " gaussian sigma=" << format_double(instance.family().sigma());
      break;
    case FamilyKind::bernoulli: os << " bernoulli"; break;
    case FamilyKind::poisson: os << " poisson"; break;
  }
  os << " means=";
  for (int i = 0; i < instance.k(); ++i)
    os << (i ? "," : "") << format_double(instance.means()[i]);
  os << "\n";

  os << "beta,norm_length,norm_regret,dominated";
  if (ln_n > 0.0) os << ",scaled_length,scaled_regret";
  os << "\n";
  for (const auto& pt : points) {
    os << format_double(pt.beta) << ',' << format_double(pt.norm_length) << ','
       << format_double(pt.norm_regret) << ',' << (pt.dominated ? 1 : 0);
    if (ln_n > 0.0)
      os << ',' << format_double(pt.norm_length * ln_n) << ','
         << format_double(pt.norm_regret * ln_n);
    os << "\n";
  }
}

}  // namespace adex
