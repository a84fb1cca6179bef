#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

namespace ltlab {

/// Counter-based random stream. A draw at counter i is a pure function of
/// (master_seed, stream_id, i), so any (seed, id, counter) triple
/// reconstructs the remaining sequence exactly, and distinct stream ids give
/// statistically independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t counter = 0);

  std::uint64_t next_u64();
  /// Uniform draw strictly inside (0, 1); never returns an endpoint.
  double uniform01();
  /// Standard exponential via inversion; consumes one uniform.
  double exponential();
  /// Standard normal via Box–Muller; always consumes two uniforms.
  double gaussian();

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Stream with counter 0 for the given (master_seed, stream_id).
RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id);

/// Strictly stable law with characteristic function
///   E e^{iuX} = exp{ -|u|^alpha * gscale * (1 + i*beta*sign(u)*tan(pi*alpha/2)) },  alpha != 1
///   E e^{iuX} = exp{ -|u| * gscale },                                              alpha  = 1
/// For alpha = 1 strict stability forces beta = 0 here. alpha = 2 is the
/// Gaussian member: N(0, 2*gscale).
struct StableLaw {
  double alpha = 2.0;
  double beta = 0.0;
  double gscale = 1.0;

  StableLaw() = default;
  StableLaw(double alpha_, double beta_, double gscale_);
};

/// One draw by the Chambers–Mallows–Stuck construction (two uniforms).
double sample_stable(const StableLaw& law, RngStream& rng);

std::complex<double> char_fn(const StableLaw& law, double u);

/// Two-sided Pareto with P(|X| > x) = x^{-alpha} for x >= 1, positive-tail
/// mass `tail_balance`, mean-shifted when alpha > 1 so the law lies strictly
/// in the normalized domain of attraction of the stable law with
/// beta = 2*tail_balance - 1. Absolutely continuous, so Cramer's condition
/// holds. alpha = 1 requires tail_balance = 1/2 (no strict centering
/// otherwise).
struct ShiftedPareto {
  double alpha = 1.5;
  double tail_balance = 0.5;

  ShiftedPareto() = default;
  ShiftedPareto(double alpha_, double tail_balance_);

  double shift() const;  // mean of the unshifted law (0 when alpha <= 1)
};

double sample_pareto(const ShiftedPareto& law, RngStream& rng);

/// psi(u) computed by oscillation-aware quadrature plus an analytic tail
/// expansion; absolute error ~1e-8 (documented tolerance 1e-7).
std::complex<double> char_fn(const ShiftedPareto& law, double u);

/// Zero-mean finite-variance Gaussian mixture: Σ w_i N(mu_i, sd_i^2).
/// All sd_i > 0, weights positive summing to 1, Σ w_i mu_i = 0.
struct GaussianMixture {
  Eigen::ArrayXd weights;
  Eigen::ArrayXd means;
  Eigen::ArrayXd sds;

  GaussianMixture() = default;
  GaussianMixture(Eigen::ArrayXd w, Eigen::ArrayXd mu, Eigen::ArrayXd sd);

  double variance() const;
};

double sample_mixture(const GaussianMixture& law, RngStream& rng);
std::complex<double> char_fn(const GaussianMixture& law, double u);

enum class LawKind { ExactStable, ShiftedPareto, GaussianMixture };

/// Innovation law plus the attraction-domain facts the limit theorems
/// consume. Flags are auto-derived from the law; explicit overrides are
/// validated and contradictions rejected.
struct InnovationSpec {
  LawKind kind = LawKind::ExactStable;
  StableLaw stable;
  ShiftedPareto pareto;
  GaussianMixture mixture;

  bool cramer = true;            // limsup_{|u|->inf} |psi(u)| < 1
  bool abs_continuous = true;    // law has a density
  double char_integrable_power = 1.0;  // some p with ∫|psi|^p < inf

  static InnovationSpec exact_stable(double alpha, double beta, double gscale);
  static InnovationSpec shifted_pareto(double alpha, double tail_balance);
  static InnovationSpec gaussian_mixture(Eigen::ArrayXd w, Eigen::ArrayXd mu, Eigen::ArrayXd sd);

  /// Validated override of the attraction-domain flags.
  InnovationSpec& with_flags(std::optional<bool> cramer_flag,
                             std::optional<bool> abs_continuous_flag,
                             std::optional<double> char_power);

  /// Tail index of the attracting stable law (2 for the mixture).
  double alpha() const;
  /// Skewness of the attracting stable law.
  double beta() const;
  std::string id() const;
};

double sample_innovation(const InnovationSpec& spec, RngStream& rng);
std::complex<double> char_fn(const InnovationSpec& spec, double u);

/// log |psi(u)|. Closed form for stable (-gscale*|u|^alpha) and mixture
/// (max-exponent factoring, safe for arguments far past double underflow);
/// quadrature-backed for the Pareto law (moderate |u| only).
double char_log_modulus(const InnovationSpec& spec, double u);

}  // namespace ltlab
