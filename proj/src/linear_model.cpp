#include "ltlab/linear_model.hpp"

#include "ltlab/util.hpp"

#include <cmath>
#include <stdexcept>

namespace ltlab {

SlowlyVarying SlowlyVarying::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("SlowlyVarying: constant must be positive");
  return {Kind::Constant, c};
}

SlowlyVarying SlowlyVarying::log_power(double p) { return {Kind::LogPower, p}; }

double SlowlyVarying::operator()(double x) const {
  if (x < 0.0) throw std::invalid_argument("SlowlyVarying: argument must be >= 0");
  switch (kind) {
    case Kind::Constant: return value;
    case Kind::LogPower: return std::pow(std::log(std::exp(1.0) + x), value);
  }
  return value;
}

std::string SlowlyVarying::id() const {
  return kind == Kind::Constant ? "const(" + format_double(value) + ")"
                                : "logpow(" + format_double(value) + ")";
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 2.0)
    throw std::invalid_argument("CoefficientModel: alpha must be in (0, 2]");
}

}  // namespace

CoefficientModel CoefficientModel::c1(double H, double alpha, SlowlyVarying R, bool zero_sum) {
  check_alpha(alpha);
  if (!(H > 0.0) || !(H < 1.0)) throw std::invalid_argument("CoefficientModel: H must be in (0, 1)");
  const double d = H - 1.0 / alpha;
  if (d == 0.0)
    throw std::invalid_argument("CoefficientModel: C1 needs H != 1/alpha (use the Levy kind instead)");
  if (d < 0.0 && !zero_sum)
    throw std::invalid_argument("CoefficientModel: H - 1/alpha < 0 requires zero_sum = true");
  if (d > 0.0 && zero_sum)
    throw std::invalid_argument("CoefficientModel: zero_sum realization needs H - 1/alpha < 0");
  CoefficientModel m;
  m.regime = Regime::C1;
  m.H = H;
  m.alpha = alpha;
  m.R = R;
  m.zero_sum = zero_sum;
  return m;
}

CoefficientModel CoefficientModel::c2(Eigen::ArrayXd coeffs, double alpha, double tau) {
  check_alpha(alpha);
  if (!(alpha > 1.0))
    throw std::invalid_argument("CoefficientModel: C2 requires 1 < alpha <= 2");
  if (coeffs.size() == 0) throw std::invalid_argument("CoefficientModel: C2 needs coefficients");
  if (!(tau > 0.0) || tau > std::min(alpha, 1.0))
    throw std::invalid_argument("CoefficientModel: tau must lie in (0, min(alpha, 1)]");
  const double total = compensated_total(coeffs);
  if (total == 0.0)
    throw std::invalid_argument("CoefficientModel: C2 requires a nonzero coefficient sum");
  CoefficientModel m;
  m.regime = Regime::C2;
  m.alpha = alpha;
  m.coeffs = std::move(coeffs);
  m.tau = tau;
  m.H = 1.0 / alpha;
  return m;
}

CoefficientModel CoefficientModel::c2_farima(double d, double alpha, double tau) {
  check_alpha(alpha);
  if (!(d < 0.0)) throw std::invalid_argument("CoefficientModel: FarimaNegative needs d < 0");
  (void)tau;
  // (1-B)^{-d} at B = 1 telescopes: Σ c_j = 0, which contradicts the C2
  // requirement Σ c_j != 0, so this generator never validates.
  throw std::invalid_argument(
      "CoefficientModel: C2 requires a nonzero coefficient sum; FarimaNegative sums to 0 "
      "(use it as the C1 zero_sum realization instead)");
}

double CoefficientModel::hurst() const { return regime == Regime::C1 ? H : 1.0 / alpha; }

std::string CoefficientModel::id() const {
  if (regime == Regime::C1) {
    return "c1(H=" + format_double(H) + ",alpha=" + format_double(alpha) + ",R=" + R.id() +
           (zero_sum ? ",zero_sum" : "") + ")";
  }
  return "c2(m=" + std::to_string(coeffs.size()) + ",alpha=" + format_double(alpha) +
         ",tau=" + format_double(tau) + ")";
}

Eigen::ArrayXd farima_coefficients(double d, Eigen::Index count) {
  if (count < 1) throw std::invalid_argument("farima_coefficients: count must be >= 1");
  Eigen::ArrayXd c(count);
  c[0] = 1.0;
  for (Eigen::Index j = 1; j < count; ++j) c[j] = c[j - 1] * (double(j) - 1.0 + d) / double(j);
  return c;
}

Eigen::ArrayXd coefficients(const CoefficientModel& model, Eigen::Index count) {
  if (count < 1) throw std::invalid_argument("coefficients: count must be >= 1");
  if (model.regime == CoefficientModel::Regime::C2) {
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(count);
    const Eigen::Index m = std::min(count, model.coeffs.size());
    out.head(m) = model.coeffs.head(m);
    return out;
  }
  if (model.zero_sum) return farima_coefficients(model.memory_d(), count);
  Eigen::ArrayXd c(count);
  c[0] = 1.0;
  const double expo = model.H - 1.0 - 1.0 / model.alpha;
  for (Eigen::Index j = 1; j < count; ++j) {
    const double x = double(j);
    c[j] = std::pow(x, expo) * model.R(x);
  }
  return c;
}

Eigen::ArrayXd cumulative_g(const Eigen::Ref<const Eigen::ArrayXd>& coeffs) {
  Eigen::ArrayXd g(coeffs.size());
  CompensatedSum acc;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    acc.add(coeffs[i]);
    g[i] = acc.value();
  }
  return g;
}

NormSchedule::NormSchedule(double alpha_, SlowlyVarying G_) : alpha(alpha_), G(G_) {
  check_alpha(alpha);
}

double NormSchedule::b(double n) const {
  if (!(n >= 1.0)) throw std::invalid_argument("NormSchedule: n must be >= 1");
  if (G.kind == SlowlyVarying::Kind::Constant) {
    return std::pow(G.value * n, 1.0 / alpha);  // u^alpha c = 1/n exactly
  }
  // Solve u^alpha G(1/u) = 1/n by bisection on u in (0, 1]; the left side is
  // strictly increasing in u for the LogPower family near 0.
  const double target = 1.0 / n;
  auto phi = [&](double u) { return std::pow(u, alpha) * G(1.0 / u) - target; };
  double lo = 1e-300, hi = 1.0;
  while (phi(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 500; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-16 * hi) break;
  }
  return 1.0 / (0.5 * (lo + hi));
}

double coefficient_sum(const CoefficientModel& model) {
  if (model.regime != CoefficientModel::Regime::C2)
    throw std::invalid_argument("coefficient_sum: defined for C2 models");
  return compensated_total(model.coeffs);
}

double gamma_n(const CoefficientModel& model, const NormSchedule& norms, double n) {
  if (norms.alpha != model.alpha)
    throw std::invalid_argument("gamma_n: norm schedule alpha must match the model");
  const double bn = norms.b(n);
  if (model.regime == CoefficientModel::Regime::C2) return coefficient_sum(model) * bn;
  return std::pow(n, model.H - 1.0 / model.alpha) * model.R(n) * bn;
}

double beta_n(double n, double kappa) {
  if (!(kappa > 0.0) || !(kappa < 1.0))
    throw std::invalid_argument("beta_n: kappa must be in (0, 1)");
  if (!(n >= 1.0)) throw std::invalid_argument("beta_n: n must be >= 1");
  return std::pow(n, kappa);
}

}  // namespace ltlab
