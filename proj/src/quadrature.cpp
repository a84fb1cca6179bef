#include "ltlab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace ltlab {

GaussHermite GaussHermite::compute(int n) {
  if (n < 1) throw std::invalid_argument("GaussHermite: node count must be >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    const double b = std::sqrt((k + 1) / 2.0);
    J(k, k + 1) = b;
    J(k + 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermite gh;
  gh.nodes = es.eigenvalues().array();
  gh.weights.resize(n);
  const double mu0 = std::sqrt(M_PI);  // ∫ e^{-x^2} dx
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    gh.weights[i] = mu0 * v0 * v0;
  }
  return gh;
}

namespace {

// 16-point Gauss–Legendre nodes/weights on [-1, 1] (symmetric halves).
constexpr double kGlx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                            0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kGlw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                            0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

double gl16(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) {
    acc += kGlw[i] * (f(mid - half * kGlx[i]) + f(mid + half * kGlx[i]));
  }
  return half * acc;
}

}  // namespace

double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("integrate_panels: panels must be >= 1");
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) acc += gl16(f, a + p * h, a + (p + 1) * h);
  return acc;
}

double integrate_edges(const std::function<double(double)>& f, const Eigen::ArrayXd& edges) {
  if (edges.size() < 2) throw std::invalid_argument("integrate_edges: need at least 2 edges");
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < edges.size(); ++i) acc += gl16(f, edges[i], edges[i + 1]);
  return acc;
}

}  // namespace ltlab
