#pragma once

#include <vector>

namespace adex {

struct GaussHermite {
  std::vector<double> nodes;    // roots of the physicists' Hermite polynomial
  std::vector<double> weights;  // sum to sqrt(pi)
};

// Nodes and weights of the n-point Gauss-Hermite rule (weight exp(-x^2)),
// computed by Newton iteration and cached per order.
const GaussHermite& gauss_hermite(int n);

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

const GaussLegendre& gauss_legendre(int n);

}  // namespace adex
