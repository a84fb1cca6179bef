#pragma once

#include "ltlab/linear_model.hpp"
#include "ltlab/stable_rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace ltlab {

/// Uniformly spaced scalar path. values[k] is the sample at time (k+1)*dt;
/// the path starts at 0 by convention and is treated as piecewise constant
/// on ((k)*dt, (k+1)*dt] for occupation integrals, which makes grid
/// occupation measure coincide with the discrete k <= [nt] sums.
struct SamplePath {
  Eigen::ArrayXd values;
  double dt = 0.0;
  std::string model_id;
  std::uint64_t stream_id = 0;

  Eigen::Index size() const { return values.size(); }
  double horizon() const { return dt * double(values.size()); }
  /// Piecewise-constant accessor; value_at(0) = 0.
  double value_at(double t) const;
  Eigen::ArrayXd times() const;
};

/// Pre-sample truncation of the moving average.
///   ExactFinite: only in-sample innovations; X_k = Σ_{j<k} c_j ξ_{k-j}.
///   Truncate(m): m pre-sample innovations; X_k = Σ_{j<=min(k-1+m, ...)}.
/// m = 0 with Truncate is the automatic rule m = max(2^14, 4n).
struct TruncationPolicy {
  enum class Mode { ExactFinite, Truncate } mode = Mode::Truncate;
  Eigen::Index m = 0;

  static TruncationPolicy exact_finite();
  static TruncationPolicy truncate(Eigen::Index m = 0);
  Eigen::Index effective_m(Eigen::Index n) const;
};

/// Full linear convolution of two sequences via zero-padded FFT.
/// Deterministic; throws if the padded transform would exceed 2^24 points.
Eigen::ArrayXd fft_convolve(const Eigen::Ref<const Eigen::ArrayXd>& a,
                            const Eigen::Ref<const Eigen::ArrayXd>& b);

/// X_1..X_n of the moving average driven by `spec` innovations: the n+m
/// innovations ξ_{1-m}..ξ_n are convolved with the first n+m coefficients.
/// One innovation stream per path; the stream id is recorded on the result.
SamplePath simulate_linear_process(const CoefficientModel& model, const InnovationSpec& spec,
                                   Eigen::Index n, const TruncationPolicy& policy,
                                   RngStream& rng);

/// Compensated prefix sums S_k = Σ_{i<=k} X_i, fixed ascending order.
Eigen::ArrayXd partial_sums(const Eigen::Ref<const Eigen::ArrayXd>& x);

/// Path of gamma_n^{-1} S_k at times k/n.
SamplePath normalized_path(const CoefficientModel& model, const NormSchedule& norms,
                           const InnovationSpec& spec, Eigen::Index n,
                           const TruncationPolicy& policy, RngStream& rng);

/// One draw of the weighted innovation sum S_j*.
///   exact:      Σ_{k=0}^{j-1} g(k) ξ_{k+1} / gamma_j
///   simplified: Σ_{k=1}^{j}  (k/j)^{H-1/alpha} ξ_k / b_j
enum class SStarWeights { Exact, Simplified };
double s_star(const CoefficientModel& model, const NormSchedule& norms, const InnovationSpec& spec,
              Eigen::Index j, SStarWeights convention, RngStream& rng);

/// The deterministic weight vector used by s_star and the H_j diagnostics.
Eigen::ArrayXd s_star_weight_vector(const CoefficientModel& model, const NormSchedule& norms,
                                    Eigen::Index j, SStarWeights convention);

}  // namespace ltlab
