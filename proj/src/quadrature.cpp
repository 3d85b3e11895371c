#include "polykin/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <stdexcept>

namespace polykin {

namespace {

struct FixedDeleter {
  void operator()(gsl_integration_fixed_workspace* w) const { gsl_integration_fixed_free(w); }
};

Rule fixed_rule(const gsl_integration_fixed_type* type, std::size_t n, double a, double b, double alpha) {
  if (n == 0) throw std::invalid_argument("quadrature rule needs at least one node");
  std::unique_ptr<gsl_integration_fixed_workspace, FixedDeleter> ws(
      gsl_integration_fixed_alloc(type, n, a, b, alpha, 0.0));
  if (!ws) throw std::runtime_error("gsl_integration_fixed_alloc failed");
  Rule r;
  const double* x = gsl_integration_fixed_nodes(ws.get());
  const double* w = gsl_integration_fixed_weights(ws.get());
  r.x.assign(x, x + n);
  r.w.assign(w, w + n);
  return r;
}

}  // namespace

Rule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
  if (!t) throw std::runtime_error("gsl_integration_glfixed_table_alloc failed");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, i, &r.x[i], &r.w[i], t);
  gsl_integration_glfixed_table_free(t);
  return r;
}

Rule gauss_hermite(std::size_t n) { return fixed_rule(gsl_integration_fixed_hermite, n, 0.0, 1.0, 0.0); }

Rule gauss_laguerre(std::size_t n, double alpha) {
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_laguerre: alpha must exceed -1");
  return fixed_rule(gsl_integration_fixed_laguerre, n, 0.0, 1.0, alpha);
}

Rule log_gauss_legendre(std::size_t n, double a, double b) {
  if (!(a > 0.0 && b > a)) throw std::invalid_argument("log_gauss_legendre: need 0 < a < b");
  Rule t = gauss_legendre(n, std::log(a), std::log(b));
  for (std::size_t i = 0; i < n; ++i) {
    t.x[i] = std::exp(t.x[i]);
    t.w[i] *= t.x[i];
  }
  return t;
}

Rule two_sided_log_rule(std::size_t n_per_half, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("two_sided_log_rule: eps must lie in (0, 1/2)");
  Rule lo = log_gauss_legendre(n_per_half, eps, 0.5);
  Rule out = lo;
  // mirror: nodes 1 - x, same weights
  for (std::size_t i = 0; i < lo.size(); ++i) {
    out.x.push_back(1.0 - lo.x[i]);
    out.w.push_back(lo.w[i]);
  }
  return out;
}

double integrate_2d(const Rule& rx, const Rule& ry, const std::function<double(double, double)>& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < ry.size(); ++j) row += ry.w[j] * f(rx.x[i], ry.x[j]);
    total += rx.w[i] * row;
  }
  return total;
}

}  // namespace polykin
