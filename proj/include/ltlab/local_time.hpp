#pragma once

#include "ltlab/path_engine.hpp"

#include <Eigen/Dense>

#include <string>

namespace ltlab {

/// Occupation measure of [x, x + eta) up to time t, divided by eta.
/// Grid time is the discrete measure dt * #{k : t_k <= t}, which matches the
/// k <= [nt] sums of the functional statistics exactly.
double window_estimate(const SamplePath& path, double t, double x, double eta);

/// Typical one-step move of the path; window widths below this are flagged
/// unreliable by the grid builder (estimates are still returned).
double path_value_resolution(const SamplePath& path);

/// ∫_0^t φ_eps(path(s) - x) ds on the grid (Gaussian kernel, sd = eps).
double smoothed_estimate(const SamplePath& path, double t, double x, double eps);

/// (2π)^{-1} ∫_{-u_max}^{u_max} ∫_0^t cos(u (path(s) - x)) ds du by nested
/// trapezoid (quad_n intervals in u). The imaginary part of the complex
/// quadrature is returned as a diagnostic; `unstable` reports a > 10%
/// change when the u-cap is halved (cap-doubling sensitivity).
struct CharRepResult {
  double value = 0.0;
  double imag_abs = 0.0;
  double half_cap_value = 0.0;
  bool unstable = false;
};
CharRepResult charrep_estimate(const SamplePath& path, double t, double x, double u_max,
                               int quad_n);

/// Local-time estimates on a (t, x) grid; values(i, j) covers t_list[i],
/// x_grid[j]. One pass over the path per estimator.
struct LocalTimeEstimate {
  Eigen::ArrayXd t_list;
  Eigen::ArrayXd x_grid;
  Eigen::MatrixXd values;
  std::string estimator;  // "window(eta)" or "smoothed(eps)"
  double param = 0.0;
  bool unreliable = false;  // window eta below path value resolution
};

LocalTimeEstimate window_grid(const SamplePath& path, const Eigen::ArrayXd& t_list,
                              const Eigen::ArrayXd& x_grid, double eta);
LocalTimeEstimate smoothed_grid(const SamplePath& path, const Eigen::ArrayXd& t_list,
                                const Eigen::ArrayXd& x_grid, double eps);

/// Trapezoid ∫ L̂(t, x) dx over the estimate's x grid (one t row).
double integrate_x(const LocalTimeEstimate& est, Eigen::Index t_index);

/// | grid-time{path in [a, b]} - ∫_a^b L̂(t, x) dx | with window estimates
/// on the aligned grid a, a + x_step, ..., b.
double occupation_identity_check(const SamplePath& path, double t, double a, double b, double eta,
                                 double x_step);

}  // namespace ltlab
