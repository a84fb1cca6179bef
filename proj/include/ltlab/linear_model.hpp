#pragma once

#include <Eigen/Dense>

#include <string>

namespace ltlab {

/// Positive slowly varying function, evaluated at x >= 0.
///   Constant: x -> c
///   LogPower: x -> (ln(e + x))^p
struct SlowlyVarying {
  enum class Kind { Constant, LogPower } kind = Kind::Constant;
  double value = 1.0;  // c for Constant, p for LogPower

  static SlowlyVarying constant(double c);
  static SlowlyVarying log_power(double p);

  double operator()(double x) const;
  std::string id() const;
};

/// Moving-average coefficient model for X_k = Σ_j c_j ξ_{k-j}.
///
/// C1 (power-law memory): c_0 = 1, c_j = j^{H-1-1/alpha} R(j) for j >= 1.
///   With zero_sum = true the sequence is instead the fractional-differencing
///   expansion of (1-B)^{-d}, d = H - 1/alpha < 0, whose partial sums
///   telescope to 0.
/// C2 (summable): explicit coefficients with Σ|c_j|^tau < inf certified by
///   tau in (0, min(alpha,1)] and Σ c_j != 0; requires alpha > 1. A
///   FarimaNegative(d<0) generator is accepted syntactically but always
///   rejected at validation since its coefficient sum is exactly 0.
struct CoefficientModel {
  enum class Regime { C1, C2 } regime = Regime::C1;

  // shared
  double alpha = 2.0;

  // C1
  double H = 0.5;
  SlowlyVarying R = SlowlyVarying::constant(1.0);
  bool zero_sum = false;

  // C2
  Eigen::ArrayXd coeffs;  // explicit list, c_0 first
  double tau = 1.0;
  bool farima_generator = false;  // FarimaNegative(d) requested
  double farima_d = 0.0;

  static CoefficientModel c1(double H, double alpha, SlowlyVarying R, bool zero_sum = false);
  static CoefficientModel c2(Eigen::ArrayXd coeffs, double alpha, double tau);
  static CoefficientModel c2_farima(double d, double alpha, double tau);

  /// H for norming purposes: the C1 field, or 1/alpha under C2.
  double hurst() const;
  double memory_d() const { return H - 1.0 / alpha; }
  std::string id() const;
};

/// First `count` coefficients c_0..c_{count-1}.
Eigen::ArrayXd coefficients(const CoefficientModel& model, Eigen::Index count);

/// Fractional-differencing expansion of (1-B)^{-d}: c_0 = 1,
/// c_j = c_{j-1} (j-1+d)/j.
Eigen::ArrayXd farima_coefficients(double d, Eigen::Index count);

/// Prefix sums g(k) = Σ_{i<=k} c_i, same length as the input.
Eigen::ArrayXd cumulative_g(const Eigen::Ref<const Eigen::ArrayXd>& coeffs);

/// Norming sequences of the partial-sum theory:
///   b_n^{-1} = inf{u > 0 : u^alpha G(1/u) = 1/n}
///   gamma_n  = n^{H-1/alpha} R(n) b_n   (C1)
///   gamma_n  = (Σ c_j) b_n              (C2)
/// G is slowly varying at 0 through the substitution u -> G(1/u).
struct NormSchedule {
  double alpha = 2.0;
  SlowlyVarying G = SlowlyVarying::constant(1.0);

  NormSchedule() = default;
  NormSchedule(double alpha_, SlowlyVarying G_);

  double b(double n) const;
};

/// gamma_n for the given model; needs the coefficient sum under C2.
double gamma_n(const CoefficientModel& model, const NormSchedule& norms, double n);

/// Σ c_j for a C2 model (exact over the explicit list).
double coefficient_sum(const CoefficientModel& model);

/// beta_n = n^kappa, kappa in (0, 1).
double beta_n(double n, double kappa);

}  // namespace ltlab
