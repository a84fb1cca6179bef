#include "ltlab/stable_rng.hpp"

#include "ltlab/util.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ltlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t stream_id) {
  // Two avalanche rounds decorrelate nearby (seed, id) pairs.
  return mix64(mix64(master_seed) ^ mix64(stream_id * 0xda942042e4dd58b5ULL + 1));
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t counter)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      key_(derive_key(master_seed, stream_id)),
      counter_(counter) {}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RngStream::uniform01() {
  // 53-bit mantissa, offset by half an ulp: strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential() { return -std::log(uniform01()); }

double RngStream::gaussian() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return RngStream(master_seed, stream_id, 0);
}

StableLaw::StableLaw(double alpha_, double beta_, double gscale_)
    : alpha(alpha_), beta(beta_), gscale(gscale_) {
  if (!(alpha > 0.0) || alpha > 2.0) throw std::invalid_argument("StableLaw: alpha must be in (0, 2]");
  if (beta < -1.0 || beta > 1.0) throw std::invalid_argument("StableLaw: beta must be in [-1, 1]");
  if (alpha == 1.0 && beta != 0.0)
    throw std::invalid_argument("StableLaw: alpha = 1 is strictly stable only with beta = 0");
  if (alpha == 2.0 && beta != 0.0)
    throw std::invalid_argument("StableLaw: beta is vacuous at alpha = 2; require 0");
  if (!(gscale > 0.0)) throw std::invalid_argument("StableLaw: gscale must be positive");
}

double sample_stable(const StableLaw& law, RngStream& rng) {
  const double u1 = rng.uniform01();
  const double u2 = rng.uniform01();
  const double U = kPi * (u1 - 0.5);   // uniform on (-pi/2, pi/2)
  const double W = -std::log(u2);      // exponential(1)
  const double a = law.alpha;

  if (a == 2.0) {
    // CMS degenerates to 2 sin(U) sqrt(W) ~ N(0, 2); scale to N(0, 2*gscale).
    return std::sqrt(law.gscale) * 2.0 * std::sin(U) * std::sqrt(W);
  }
  if (a == 1.0) {
    return law.gscale * std::tan(U);  // symmetric Cauchy, E e^{iuX} = e^{-gscale|u|}
  }
  // The CMS formula targets exp{-|u|^a (1 - i b sign(u) tan(pi a/2))}; our
  // convention carries "+ i beta", so flip the skewness sign.
  const double b = -law.beta;
  const double tb = b * std::tan(kPi * a / 2.0);
  const double B = std::atan(tb) / a;
  const double S = std::pow(1.0 + tb * tb, 1.0 / (2.0 * a));
  const double x = S * std::sin(a * (U + B)) / std::pow(std::cos(U), 1.0 / a) *
                   std::pow(std::cos(U - a * (U + B)) / W, (1.0 - a) / a);
  return std::pow(law.gscale, 1.0 / a) * x;
}

std::complex<double> char_fn(const StableLaw& law, double u) {
  if (u == 0.0) return {1.0, 0.0};
  const double au = std::abs(u);
  const double sgn = (u > 0.0) ? 1.0 : -1.0;
  if (law.alpha == 1.0) return {std::exp(-law.gscale * au), 0.0};
  const double mod = law.gscale * std::pow(au, law.alpha);
  const std::complex<double> expo(-mod, -mod * law.beta * sgn * std::tan(kPi * law.alpha / 2.0));
  return std::exp(expo);
}

ShiftedPareto::ShiftedPareto(double alpha_, double tail_balance_)
    : alpha(alpha_), tail_balance(tail_balance_) {
  if (!(alpha > 0.0) || !(alpha < 2.0))
    throw std::invalid_argument("ShiftedPareto: alpha must be in (0, 2)");
  if (tail_balance < 0.0 || tail_balance > 1.0)
    throw std::invalid_argument("ShiftedPareto: tail_balance must be in [0, 1]");
  if (alpha == 1.0 && tail_balance != 0.5)
    throw std::invalid_argument("ShiftedPareto: alpha = 1 needs tail_balance = 1/2");
}

double ShiftedPareto::shift() const {
  if (alpha <= 1.0) return 0.0;
  return (2.0 * tail_balance - 1.0) * alpha / (alpha - 1.0);
}

double sample_pareto(const ShiftedPareto& law, RngStream& rng) {
  const double u = rng.uniform01();
  const double v = rng.uniform01();
  const double mag = std::pow(u, -1.0 / law.alpha);  // P(mag > x) = x^{-alpha}, x >= 1
  const double x = (v < law.tail_balance) ? mag : -mag;
  return x - law.shift();
}

namespace {

/// I(U) = ∫_1^∞ e^{iUx} alpha x^{-alpha-1} dx for U > 0: geometric /
/// phase-limited panels on [1, X], then a 14-term integration-by-parts tail.
std::complex<double> pareto_tail_cf(double alpha, double U) {
  const double X = std::max(1.0, 36.0 / U);
  std::complex<double> quad(0.0, 0.0);
  if (X > 1.0) {
    // 16-pt Gauss-Legendre panels; length capped by both phase and geometry.
    const double max_phase_len = kPi / (2.0 * U);
    double lo = 1.0;
    // Inline GL16 on complex integrand.
    static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    while (lo < X) {
      const double hi = std::min(X, lo + std::min(0.5 * lo + 1e-3, max_phase_len));
      const double mid = 0.5 * (lo + hi);
      const double half = 0.5 * (hi - lo);
      std::complex<double> acc(0.0, 0.0);
      for (int i = 0; i < 8; ++i) {
        for (const double s : {-1.0, 1.0}) {
          const double x = mid + s * half * gx[i];
          const double g = alpha * std::pow(x, -alpha - 1.0);
          acc += gw[i] * g * std::complex<double>(std::cos(U * x), std::sin(U * x));
        }
      }
      quad += half * acc;
      lo = hi;
    }
  }
  // Tail from X: -e^{iUX} Σ_{k<m} a_k X^{-alpha-1-k} / (iU)^{k+1},
  // a_0 = alpha, a_{k+1} = a_k (alpha+k+1).
  const std::complex<double> iU(0.0, U);
  const std::complex<double> eiUX(std::cos(U * X), std::sin(U * X));
  std::complex<double> tail(0.0, 0.0);
  double ak = alpha;
  double xpow = std::pow(X, -alpha - 1.0);
  std::complex<double> iUpow = iU;
  for (int k = 0; k < 14; ++k) {
    tail += ak * xpow / iUpow;
    ak *= (alpha + k + 1);
    xpow /= X;
    iUpow *= iU;
  }
  return quad - eiUX * tail;
}

}  // namespace

std::complex<double> char_fn(const ShiftedPareto& law, double u) {
  if (u == 0.0) return {1.0, 0.0};
  const double U = std::abs(u);
  const std::complex<double> I = pareto_tail_cf(law.alpha, U);
  const double p = law.tail_balance;
  std::complex<double> psi = p * I + (1.0 - p) * std::conj(I);
  if (u < 0.0) psi = std::conj(psi);
  const double s = law.shift();
  if (s != 0.0) psi *= std::complex<double>(std::cos(-u * s), std::sin(-u * s));
  return psi;
}

GaussianMixture::GaussianMixture(Eigen::ArrayXd w, Eigen::ArrayXd mu, Eigen::ArrayXd sd)
    : weights(std::move(w)), means(std::move(mu)), sds(std::move(sd)) {
  const auto n = weights.size();
  if (n == 0 || means.size() != n || sds.size() != n)
    throw std::invalid_argument("GaussianMixture: weights/means/sds must be same nonzero size");
  if ((weights <= 0.0).any()) throw std::invalid_argument("GaussianMixture: weights must be positive");
  if (std::abs(weights.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("GaussianMixture: weights must sum to 1");
  if ((sds <= 0.0).any()) throw std::invalid_argument("GaussianMixture: sds must be positive");
  if (std::abs((weights * means).sum()) > 1e-12)
    throw std::invalid_argument("GaussianMixture: mixture mean must be 0 (strict attraction)");
}

double GaussianMixture::variance() const {
  return (weights * (sds.square() + means.square())).sum();
}

double sample_mixture(const GaussianMixture& law, RngStream& rng) {
  const double u = rng.uniform01();
  const double z = rng.gaussian();
  double cum = 0.0;
  Eigen::Index pick = law.weights.size() - 1;
  for (Eigen::Index i = 0; i < law.weights.size(); ++i) {
    cum += law.weights[i];
    if (u < cum) {
      pick = i;
      break;
    }
  }
  return law.means[pick] + law.sds[pick] * z;
}

std::complex<double> char_fn(const GaussianMixture& law, double u) {
  std::complex<double> acc(0.0, 0.0);
  for (Eigen::Index i = 0; i < law.weights.size(); ++i) {
    const double e = -0.5 * law.sds[i] * law.sds[i] * u * u;
    acc += law.weights[i] * std::exp(e) *
           std::complex<double>(std::cos(law.means[i] * u), std::sin(law.means[i] * u));
  }
  return acc;
}

InnovationSpec InnovationSpec::exact_stable(double alpha, double beta, double gscale) {
  InnovationSpec s;
  s.kind = LawKind::ExactStable;
  s.stable = StableLaw(alpha, beta, gscale);
  s.cramer = true;            // |psi| = e^{-g|u|^alpha} -> 0
  s.abs_continuous = true;    // stable laws have densities
  s.char_integrable_power = 1.0;
  return s;
}

InnovationSpec InnovationSpec::shifted_pareto(double alpha, double tail_balance) {
  InnovationSpec s;
  s.kind = LawKind::ShiftedPareto;
  s.pareto = ShiftedPareto(alpha, tail_balance);
  s.cramer = true;          // density + Riemann-Lebesgue
  s.abs_continuous = true;
  s.char_integrable_power = 2.0;  // |psi| ~ C/|u|, so ∫|psi|^p < inf for p > 1
  return s;
}

InnovationSpec InnovationSpec::gaussian_mixture(Eigen::ArrayXd w, Eigen::ArrayXd mu,
                                                Eigen::ArrayXd sd) {
  InnovationSpec s;
  s.kind = LawKind::GaussianMixture;
  s.mixture = GaussianMixture(std::move(w), std::move(mu), std::move(sd));
  s.cramer = true;
  s.abs_continuous = true;
  s.char_integrable_power = 1.0;
  return s;
}

InnovationSpec& InnovationSpec::with_flags(std::optional<bool> cramer_flag,
                                           std::optional<bool> abs_continuous_flag,
                                           std::optional<double> char_power) {
  // All shipped laws are absolutely continuous with vanishing |psi| at
  // infinity; a declaration contradicting that is a config error.
  if (cramer_flag && !*cramer_flag)
    throw std::invalid_argument("InnovationSpec: law satisfies Cramer's condition; cramer=false contradicts it");
  if (abs_continuous_flag && !*abs_continuous_flag)
    throw std::invalid_argument("InnovationSpec: law is absolutely continuous; abs_continuous=false contradicts it");
  if (char_power) {
    if (!(*char_power > 0.0))
      throw std::invalid_argument("InnovationSpec: char_integrable_power must be positive");
    if (kind == LawKind::ShiftedPareto && *char_power <= 1.0)
      throw std::invalid_argument(
          "InnovationSpec: ShiftedPareto has |psi| ~ C/|u|; need char_integrable_power > 1");
    char_integrable_power = *char_power;
  }
  return *this;
}

double InnovationSpec::alpha() const {
  switch (kind) {
    case LawKind::ExactStable: return stable.alpha;
    case LawKind::ShiftedPareto: return pareto.alpha;
    case LawKind::GaussianMixture: return 2.0;
  }
  return 2.0;
}

double InnovationSpec::beta() const {
  switch (kind) {
    case LawKind::ExactStable: return stable.beta;
    case LawKind::ShiftedPareto: return 2.0 * pareto.tail_balance - 1.0;
    case LawKind::GaussianMixture: return 0.0;
  }
  return 0.0;
}

std::string InnovationSpec::id() const {
  switch (kind) {
    case LawKind::ExactStable:
      return "stable(alpha=" + format_double(stable.alpha) + ",beta=" + format_double(stable.beta) +
             ",g=" + format_double(stable.gscale) + ")";
    case LawKind::ShiftedPareto:
      return "pareto(alpha=" + format_double(pareto.alpha) +
             ",p=" + format_double(pareto.tail_balance) + ")";
    case LawKind::GaussianMixture:
      return "mixture(k=" + std::to_string(mixture.weights.size()) + ")";
  }
  return "unknown";
}

double sample_innovation(const InnovationSpec& spec, RngStream& rng) {
  switch (spec.kind) {
    case LawKind::ExactStable: return sample_stable(spec.stable, rng);
    case LawKind::ShiftedPareto: return sample_pareto(spec.pareto, rng);
    case LawKind::GaussianMixture: return sample_mixture(spec.mixture, rng);
  }
  throw std::logic_error("sample_innovation: unreachable");
}

std::complex<double> char_fn(const InnovationSpec& spec, double u) {
  switch (spec.kind) {
    case LawKind::ExactStable: return char_fn(spec.stable, u);
    case LawKind::ShiftedPareto: return char_fn(spec.pareto, u);
    case LawKind::GaussianMixture: return char_fn(spec.mixture, u);
  }
  throw std::logic_error("char_fn: unreachable");
}

double char_log_modulus(const InnovationSpec& spec, double u) {
  switch (spec.kind) {
    case LawKind::ExactStable: {
      const double au = std::abs(u);
      if (au == 0.0) return 0.0;
      return spec.stable.alpha == 1.0 ? -spec.stable.gscale * au
                                      : -spec.stable.gscale * std::pow(au, spec.stable.alpha);
    }
    case LawKind::GaussianMixture: {
      // Factor out the dominant component so the log survives underflow.
      const auto& m = spec.mixture;
      const Eigen::ArrayXd expo = -0.5 * m.sds.square() * u * u;
      const double top = expo.maxCoeff();
      std::complex<double> acc(0.0, 0.0);
      for (Eigen::Index i = 0; i < m.weights.size(); ++i) {
        acc += m.weights[i] * std::exp(expo[i] - top) *
               std::complex<double>(std::cos(m.means[i] * u), std::sin(m.means[i] * u));
      }
      const double a = std::abs(acc);
      if (a == 0.0) return -std::numeric_limits<double>::infinity();
      return top + std::log(a);
    }
    case LawKind::ShiftedPareto: {
      const double a = std::abs(char_fn(spec.pareto, u));
      if (a == 0.0) return -std::numeric_limits<double>::infinity();
      return std::log(a);
    }
  }
  throw std::logic_error("char_log_modulus: unreachable");
}

}  // namespace ltlab
