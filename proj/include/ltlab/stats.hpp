#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace ltlab {

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

struct Distances {
  double ks = 0.0;
  double w1 = 0.0;
};

/// sup |F̂_a - F̂_b| by a merge sweep over both sorted samples.
double ks_two_sample(const Eigen::Ref<const Eigen::ArrayXd>& a,
                     const Eigen::Ref<const Eigen::ArrayXd>& b);

/// Mean |sorted_a - sorted_b| for equal sizes; 512-point quantile grid
/// otherwise.
double w1_distance(const Eigen::Ref<const Eigen::ArrayXd>& a,
                   const Eigen::Ref<const Eigen::ArrayXd>& b);

Distances distances(const Eigen::Ref<const Eigen::ArrayXd>& a,
                    const Eigen::Ref<const Eigen::ArrayXd>& b);

/// sup |F̂_sample - cdf| (evaluated at the jump points of the empirical CDF).
double ks_one_sample(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                     const std::function<double(double)>& cdf);

double median(Eigen::ArrayXd v);
/// Median absolute deviation about the median (no consistency factor).
double mad(const Eigen::Ref<const Eigen::ArrayXd>& v);
/// (x - median) / mad; scale left at 1 when the MAD is zero.
Eigen::ArrayXd mad_rescaled(const Eigen::Ref<const Eigen::ArrayXd>& v);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};
LinearFit linear_fit(const Eigen::Ref<const Eigen::ArrayXd>& x,
                     const Eigen::Ref<const Eigen::ArrayXd>& y);

}  // namespace ltlab
