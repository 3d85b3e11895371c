#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace polykin {

/// Nodes and weights of a one-dimensional rule: int f ~ sum w_i f(x_i).
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
  [[nodiscard]] std::size_t size() const { return x.size(); }
};

/// Gauss-Legendre on [a, b].
[[nodiscard]] Rule gauss_legendre(std::size_t n, double a, double b);

/// Gauss-Hermite for the weight exp(-x^2) on the real line.
[[nodiscard]] Rule gauss_hermite(std::size_t n);

/// Generalized Gauss-Laguerre for the weight x^alpha exp(-x) on (0, inf).
[[nodiscard]] Rule gauss_laguerre(std::size_t n, double alpha);

/// Rule on [a, b] (0 < a < b) in the variable t = log x, suited to integrands
/// with a power singularity at 0. Weights include the Jacobian x.
[[nodiscard]] Rule log_gauss_legendre(std::size_t n, double a, double b);

/// Rule for the open interval (eps, 1 - eps), split at 1/2 with a logarithmic
/// rule towards each end so that x^p and (1-x)^p are resolved down to eps.
[[nodiscard]] Rule two_sided_log_rule(std::size_t n_per_half, double eps);

/// Tensor-product integral of f(x, y) over two rules.
[[nodiscard]] double integrate_2d(const Rule& rx, const Rule& ry, const std::function<double(double, double)>& f);

}  // namespace polykin
