#pragma once

#include <Eigen/Dense>

#include <functional>

namespace ltlab {

/// Gauss–Hermite rule for ∫ g(x) e^{-x^2} dx ≈ Σ w_i g(x_i).
/// Nodes/weights from the Golub–Welsch eigen-decomposition of the Jacobi
/// matrix, so the rule is exact for polynomials of degree 2n-1.
struct GaussHermite {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;

  static GaussHermite compute(int n);

  /// ∫ g(z) φ(z) dz with φ the standard normal density.
  template <class Fn>
  double gaussian_expectation(Fn&& g) const {
    double acc = 0.0;
    const double c = 1.0 / std::sqrt(M_PI);
    for (Eigen::Index i = 0; i < nodes.size(); ++i)
      acc += c * weights[i] * g(std::sqrt(2.0) * nodes[i]);
    return acc;
  }
};

/// Composite 16-point Gauss–Legendre integration of f over [a, b],
/// split into `panels` equal panels. Deterministic, non-adaptive.
double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels);

/// Same rule on caller-supplied panel edges (ascending).
double integrate_edges(const std::function<double(double)>& f, const Eigen::ArrayXd& edges);

}  // namespace ltlab
