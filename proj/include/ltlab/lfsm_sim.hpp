#pragma once

#include "ltlab/path_engine.hpp"
#include "ltlab/stable_rng.hpp"

#include <Eigen/Dense>

#include <string>

namespace ltlab {

/// Target self-similar process
///   Λ(t) = a ∫_{-inf}^0 {(t-u)^{H-1/a} - (-u)^{H-1/a}} Z(du)
///        + a ∫_0^t (t-u)^{H-1/a} Z(du)
/// driven by a strictly alpha-stable motion Z with skewness `beta`
/// (Z(1) has gscale 1). Kind is derived:
///   Fbm        alpha = 2, H != 1/2   (exact circulant embedding,
///                                     Var Λ(1) = 2 a^2 matching the
///                                     variance-2 Brownian convention)
///   LevyMotion H = 1/alpha           (iid stable increments)
///   Lfsm       otherwise             (cell-averaged Riemann kernel)
struct LfsmSpec {
  double alpha = 2.0;
  double H = 0.5;
  double a = 1.0;
  double beta = 0.0;

  // discretization controls
  Eigen::Index grid_n = 1 << 12;  // samples on (0, t_max]
  double t_max = 1.0;
  int refine = 8;                 // kernel sub-steps per grid step
  double t_past_factor = 8.0;     // past truncation at -t_past_factor * t_max

  enum class Kind { Fbm, LevyMotion, Lfsm };
  Kind kind() const;
  std::string id() const;
  void validate() const;
};

/// Autocovariance of the embedded fractional Gaussian noise at lag k:
/// increments over spacing dt of the alpha = 2 member, Var matching
/// 2 a^2 dt^{2H}. This is the covariance the circulant embedding targets
/// and the oracle tests evaluate directly.
double fbm_increment_autocov(double H, double a, double dt, Eigen::Index lag);

/// Reusable per-(spec) sampler; precomputes embedding eigenvalues or the
/// kernel spectrum once, then draws paths cheaply.
class LfsmSampler {
 public:
  explicit LfsmSampler(const LfsmSpec& spec);

  /// One path on times {t_max k/grid_n}; consumes only `rng`.
  SamplePath sample(RngStream& rng) const;

  const LfsmSpec& spec() const { return spec_; }

 private:
  LfsmSpec spec_;
  // Fbm: sqrt of circulant eigenvalues (size 2N).
  Eigen::ArrayXd sqrt_eigs_;
  // Lfsm: forward FFT of the cell-averaged kernel, cell width, cell count.
  Eigen::ArrayXcd kernel_fft_;
  Eigen::Index cells_past_ = 0;
  Eigen::Index cells_total_ = 0;
  double cell_dt_ = 0.0;
  Eigen::Index fft_len_ = 0;
};

SamplePath simulate_lfsm(const LfsmSpec& spec, RngStream& rng);

/// Two-sample KS between c^{-H} Λ(c t0) and Λ(t0) over `replicates`
/// independent paths each (disjoint stream blocks under the given seed).
double self_similarity_check(const LfsmSpec& spec, double c, double t0, int replicates,
                             std::uint64_t master_seed, std::uint64_t stream_base,
                             int threads = 1);

}  // namespace ltlab
