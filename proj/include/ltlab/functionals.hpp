#pragma once

#include "ltlab/path_engine.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace ltlab {

/// Test-function catalog. Every entry knows its integral, squared integral,
/// absolute integral, boundedness and support, so routing preconditions are
/// checked in closed form and validated against numeric quadrature in tests.
///   Indicator(c, d)          1 on (c, d)
///   IndicatorUnion(edges)    1 on a finite disjoint union of intervals
///   GaussBump(c, w)          Gaussian density, mean c, sd w
///   Triangle(c, h)           peak 1 at c, support [c-h, c+h]
///   SignedHat(h)             triangle up on [-h, 0], down on [0, h]; ∫ = 0
///   PowerCusp(tau, r)        |y|^tau on [-r, r], tau in (-1/2, 0): unbounded
///   CustomGrid(lo, step, ys) piecewise-linear interpolant, 0 outside
///   Zero                     identically 0
struct TestFunction {
  enum class Kind {
    Indicator,
    IndicatorUnion,
    GaussBump,
    Triangle,
    SignedHat,
    PowerCusp,
    CustomGrid,
    Zero
  };
  Kind kind = Kind::Zero;
  double p1 = 0.0;
  double p2 = 0.0;
  Eigen::ArrayXd knots;  // union edges (c1,d1,c2,d2,...) or grid samples

  static TestFunction indicator(double c, double d);
  static TestFunction indicator_union(Eigen::ArrayXd edges);
  static TestFunction gauss_bump(double center, double width);
  static TestFunction triangle(double center, double halfwidth);
  static TestFunction signed_hat(double halfwidth);
  static TestFunction power_cusp(double tau, double radius);
  static TestFunction custom_grid(double lo, double step, Eigen::ArrayXd ys);
  static TestFunction zero();

  double operator()(double y) const;

  double integral() const;       // ∫ f
  double integral_sq() const;    // ∫ f^2
  double integral_abs() const;   // ∫ |f|
  /// Oriented ∫_0^y f(u) du (negative of the back integral for y < 0).
  double integral_from_zero(double y) const;
  /// ∫_{|y| >= a} |f|.
  double tail_abs(double a) const;

  bool bounded() const;
  bool compact_support() const;
  /// Conservative support radius: f = 0 outside [-r, r] (inf for GaussBump).
  double support_radius() const;
  std::string id() const;
};

/// Sliding envelopes of Eq-style oscillation control:
///   M(y) = sup_{|u-y| <= eta} f(u),  m(y) = inf_{|u-y| <= eta} f(u).
/// Closed form for monotone/unimodal catalog entries; composed shapes
/// (SignedHat, CustomGrid) fall back to a numeric sliding-window max on a
/// dense grid. PowerCusp has M = +inf on [-eta, eta].
struct EnvelopePair {
  double eta = 0.0;
  std::function<double(double)> upper;
  std::function<double(double)> lower;
};

EnvelopePair envelopes(const TestFunction& f, double eta);

/// ∫ (M_{f,delta} - m_{f,delta}) for each delta, plus the verdict of the
/// oscillation condition: values must trend to 0 (monotone decreasing and
/// last < 0.1 * first). Unbounded envelopes report +inf and fail.
struct OscillationReport {
  Eigen::ArrayXd deltas;
  Eigen::ArrayXd values;
  bool vanishes = false;
};
OscillationReport oscillation_condition(const TestFunction& f, const Eigen::ArrayXd& deltas);

/// ∫ M_{|f|, eta}; +inf when the envelope is not integrable.
double envelope_abs_integral(const TestFunction& f, double eta);

/// The four admissibility conditions of the scaled family
/// f_n(y) = beta_n f(beta_n y) checked at the given n's:
///  (i)   sup_n ∫ |f_n| < inf           (= ∫|f|, n-free)
///  (ii)  n^{-1} ∫ f_n^2 = (beta_n/n) ∫ f^2 -> 0
///  (iii) lim_kappa sup_n ∫_{|y| >= kappa} |f_n| = 0
///  (iv)  F_n(y) = ∫_0^{beta_n y} f -> F(y) away from 0, where
///        F(y > 0) = ∫_0^inf f and F(y < 0) = -∫_{-inf}^0 f
struct Remark4Report {
  bool abs_integrable = false;
  bool sq_vanishes = false;
  bool tails_vanish = false;
  bool cumulative_converges = false;
  Eigen::ArrayXd sq_values;        // (beta_n/n) ∫ f^2 per n
  Eigen::ArrayXd tail_values;      // sup_n tail mass per kappa in {1,1/2,1/4,...}
  double cumulative_worst = 0.0;   // max |F_n - F| at the largest n
  bool all() const { return abs_integrable && sq_vanishes && tails_vanish && cumulative_converges; }
};
Remark4Report scaled_family_conditions(const TestFunction& f, const Eigen::ArrayXd& n_list,
                                       double kappa_exponent);

/// T = (beta/n) Σ_{k=q}^{[n t]} f(beta (v_k + x)) on a normalized partial-sum
/// path (n = path size per unit time). Compensated accumulation in k order.
double functional_statistic(const SamplePath& path, const TestFunction& f, double beta, double t,
                            double x, Eigen::Index start_k = 1);

/// Batched variant: rows t_list, cols x_list, one pass over the path.
Eigen::MatrixXd functional_statistic_batch(const SamplePath& path, const TestFunction& f,
                                           double beta, const Eigen::ArrayXd& t_list,
                                           const Eigen::ArrayXd& x_list,
                                           Eigen::Index start_k = 1);

/// The discarded head Σ_{k<q} of the same statistic (Theorem routing with
/// unbounded f starts at q and must certify the head is negligible).
double functional_presum(const SamplePath& path, const TestFunction& f, double beta, double x,
                         Eigen::Index start_k);

/// Continuous-path forms on an LFSM grid path:
///   discrete:  (beta/n) Σ_{k<=[nt]} f(beta (Λ(k/n) - x)),  beta = n^kappa
///   scaled:    kappa_c^H ∫_0^t f(kappa_c^H (Λ(s) - x)) ds  (grid measure)
double lfsm_functional_discrete(const SamplePath& path, const TestFunction& f, double beta,
                                double t, double x);
double lfsm_functional_scaled(const SamplePath& path, const TestFunction& f, double kappa_c,
                              double hurst, double t, double x);

}  // namespace ltlab
