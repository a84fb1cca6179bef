#include "ltlab/stats.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ltlab {
namespace {

std::vector<double> sorted(const Eigen::Ref<const Eigen::ArrayXd>& a) {
  std::vector<double> v(a.data(), a.data() + a.size());
  std::sort(v.begin(), v.end());
  return v;
}

double quantile_sorted(const std::vector<double>& v, double p) {
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(i);
  return v[i] + (v[i + 1] - v[i]) * frac;
}

}  // namespace

double ks_two_sample(const Eigen::Ref<const Eigen::ArrayXd>& a,
                     const Eigen::Ref<const Eigen::ArrayXd>& b) {
  if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("ks_two_sample: empty sample");
  const auto sa = sorted(a);
  const auto sb = sorted(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double ks = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    ks = std::max(ks, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return ks;
}

double w1_distance(const Eigen::Ref<const Eigen::ArrayXd>& a,
                   const Eigen::Ref<const Eigen::ArrayXd>& b) {
  if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("w1_distance: empty sample");
  const auto sa = sorted(a);
  const auto sb = sorted(b);
  double total = 0.0;
  if (sa.size() == sb.size()) {
    for (std::size_t i = 0; i < sa.size(); ++i) total += std::abs(sa[i] - sb[i]);
    return total / static_cast<double>(sa.size());
  }
  constexpr int kGrid = 512;
  for (int r = 0; r < kGrid; ++r) {
    const double p = (static_cast<double>(r) + 0.5) / kGrid;
    total += std::abs(quantile_sorted(sa, p) - quantile_sorted(sb, p));
  }
  return total / kGrid;
}

Distances distances(const Eigen::Ref<const Eigen::ArrayXd>& a,
                    const Eigen::Ref<const Eigen::ArrayXd>& b) {
  return Distances{ks_two_sample(a, b), w1_distance(a, b)};
}

double ks_one_sample(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                     const std::function<double(double)>& cdf) {
  if (sample.size() == 0) throw std::invalid_argument("ks_one_sample: empty sample");
  const auto s = sorted(sample);
  const double n = static_cast<double>(s.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double F = cdf(s[i]);
    ks = std::max(ks, std::max(F - static_cast<double>(i) / n,
                               static_cast<double>(i + 1) / n - F));
  }
  return ks;
}

double median(Eigen::ArrayXd v) {
  if (v.size() == 0) throw std::invalid_argument("median: empty sample");
  std::vector<double> s(v.data(), v.data() + v.size());
  const auto mid = s.size() / 2;
  std::nth_element(s.begin(), s.begin() + mid, s.end());
  if (s.size() % 2 == 1) return s[mid];
  const double hi = s[mid];
  std::nth_element(s.begin(), s.begin() + mid - 1, s.begin() + mid);
  return 0.5 * (s[mid - 1] + hi);
}

double mad(const Eigen::Ref<const Eigen::ArrayXd>& v) {
  const double med = median(v);
  return median((v - med).abs());
}

Eigen::ArrayXd mad_rescaled(const Eigen::Ref<const Eigen::ArrayXd>& v) {
  const double med = median(v);
  const double scale = median((v - med).abs());
  return (v - med) / (scale > 0.0 ? scale : 1.0);
}

LinearFit linear_fit(const Eigen::Ref<const Eigen::ArrayXd>& x,
                     const Eigen::Ref<const Eigen::ArrayXd>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: needs two equal-length samples of size >= 2");
  const double mx = x.mean();
  const double my = y.mean();
  const double sxx = ((x - mx) * (x - mx)).sum();
  const double sxy = ((x - mx) * (y - my)).sum();
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const Eigen::ArrayXd resid = y - (fit.intercept + fit.slope * x);
  const double ss_tot = ((y - my) * (y - my)).sum();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - (resid * resid).sum() / ss_tot : 1.0;
  return fit;
}

}  // namespace ltlab
