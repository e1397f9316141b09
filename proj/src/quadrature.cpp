#include "fsm/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <map>
#include <memory>
#include <mutex>

#include "fsm/errors.hpp"

namespace fsm {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  if (n < 1) throw DomainError("quadrature order must be positive");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto rule = std::make_unique<GaussRule>();
  rule->x.resize(n);
  rule->w.resize(n);
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
  for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(-1.0, 1.0, i, &rule->x[i], &rule->w[i], t);
  gsl_integration_glfixed_table_free(t);
  return *cache.emplace(n, std::move(rule)).first->second;
}

CompositeRule composite_gauss(double lo, double hi, int panels, int order) {
  if (panels < 1 || !(hi > lo)) throw DomainError("invalid composite rule");
  const GaussRule& g = gauss_legendre(order);
  CompositeRule r;
  r.x.reserve(static_cast<std::size_t>(panels) * order);
  r.w.reserve(r.x.capacity());
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      r.x.push_back(mid + 0.5 * h * g.x[i]);
      r.w.push_back(0.5 * h * g.w[i]);
    }
  }
  return r;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, int panels, int order) {
  const CompositeRule r = composite_gauss(lo, hi, panels, order);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s;
}

}  // namespace fsm
