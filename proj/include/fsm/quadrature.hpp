#pragma once

#include <functional>
#include <vector>

namespace fsm {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Cached per order; safe for concurrent callers.
const GaussRule& gauss_legendre(int n);

// Nodes and weights of a composite rule: `panels` equal panels on [lo, hi], `order` points each.
struct CompositeRule {
  std::vector<double> x;
  std::vector<double> w;
};

CompositeRule composite_gauss(double lo, double hi, int panels, int order);

double integrate(const std::function<double(double)>& f, double lo, double hi, int panels, int order);

}  // namespace fsm
