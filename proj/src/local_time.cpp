#include "ltlab/local_time.hpp"

#include "ltlab/util.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ltlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Index grid_count(const SamplePath& path, double t) {
  if (path.dt <= 0.0) throw std::invalid_argument("local_time: path has no grid");
  if (t < 0.0) throw std::invalid_argument("local_time: t must be >= 0");
  // #{k >= 1 : k dt <= t} with a half-ulp cushion against t on the grid.
  const auto k = static_cast<Eigen::Index>(std::floor(t / path.dt + 1e-9));
  return std::min(k, path.values.size());
}

void check_window(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("local_time: window width must be positive");
}

}  // namespace

double window_estimate(const SamplePath& path, double t, double x, double eta) {
  check_window(eta);
  const Eigen::Index upto = grid_count(path, t);
  Eigen::Index count = 0;
  for (Eigen::Index k = 0; k < upto; ++k) {
    const double v = path.values[k];
    if (v >= x && v < x + eta) ++count;
  }
  return path.dt * double(count) / eta;
}

double path_value_resolution(const SamplePath& path) {
  const Eigen::Index n = std::min<Eigen::Index>(path.values.size(), 4096);
  if (n < 2) return 0.0;
  double acc = 0.0;
  double prev = 0.0;  // path starts at 0
  for (Eigen::Index k = 0; k < n; ++k) {
    acc += std::abs(path.values[k] - prev);
    prev = path.values[k];
  }
  return acc / double(n);
}

double smoothed_estimate(const SamplePath& path, double t, double x, double eps) {
  check_window(eps);
  const Eigen::Index upto = grid_count(path, t);
  const double c = 1.0 / (eps * std::sqrt(2.0 * kPi));
  const double inv2 = 1.0 / (2.0 * eps * eps);
  CompensatedSum acc;
  for (Eigen::Index k = 0; k < upto; ++k) {
    const double d = path.values[k] - x;
    acc.add(c * std::exp(-d * d * inv2));
  }
  return path.dt * acc.value();
}

CharRepResult charrep_estimate(const SamplePath& path, double t, double x, double u_max,
                               int quad_n) {
  if (u_max < 0.0) throw std::invalid_argument("charrep_estimate: u_max must be >= 0");
  if (quad_n < 2 || quad_n % 2 != 0)
    throw std::invalid_argument("charrep_estimate: quad_n must be even and >= 2");
  CharRepResult res;
  if (u_max == 0.0) return res;

  const Eigen::Index upto = grid_count(path, t);
  const double du = 2.0 * u_max / quad_n;
  // Trapezoid over the symmetric u grid; inner grid integral of e^{iu(v-x)}.
  std::complex<double> total(0.0, 0.0);
  std::complex<double> half_total(0.0, 0.0);
  const int q4 = quad_n / 4;
  for (int i = 0; i <= quad_n; ++i) {
    const double u = -u_max + du * i;
    std::complex<double> inner(0.0, 0.0);
    double re = 0.0, im = 0.0;
    for (Eigen::Index k = 0; k < upto; ++k) {
      const double ph = u * (path.values[k] - x);
      re += std::cos(ph);
      im += std::sin(ph);
    }
    inner = {re * path.dt, im * path.dt};
    const double w = (i == 0 || i == quad_n) ? 0.5 : 1.0;
    total += w * inner;
    // Re-use the same samples for the [-u_max/2, u_max/2] cap when the grid
    // admits it (quad_n divisible by 4).
    if (quad_n % 4 == 0 && i >= q4 && i <= quad_n - q4) {
      const double wh = (i == q4 || i == quad_n - q4) ? 0.5 : 1.0;
      half_total += wh * inner;
    }
  }
  total *= du / (2.0 * kPi);
  half_total *= du / (2.0 * kPi);
  res.value = total.real();
  res.imag_abs = std::abs(total.imag());
  res.half_cap_value = half_total.real();
  const double denom = std::max(std::abs(res.value), 1e-12);
  res.unstable = std::abs(res.value - res.half_cap_value) > 0.1 * denom;
  return res;
}

namespace {

LocalTimeEstimate make_estimate(const SamplePath& path, const Eigen::ArrayXd& t_list,
                                const Eigen::ArrayXd& x_grid) {
  if (t_list.size() == 0 || x_grid.size() == 0)
    throw std::invalid_argument("local_time: empty estimate grid");
  for (Eigen::Index i = 1; i < t_list.size(); ++i)
    if (!(t_list[i] > t_list[i - 1]))
      throw std::invalid_argument("local_time: t_list must be strictly increasing");
  LocalTimeEstimate est;
  est.t_list = t_list;
  est.x_grid = x_grid;
  est.values = Eigen::MatrixXd::Zero(t_list.size(), x_grid.size());
  (void)path;
  return est;
}

}  // namespace

LocalTimeEstimate window_grid(const SamplePath& path, const Eigen::ArrayXd& t_list,
                              const Eigen::ArrayXd& x_grid, double eta) {
  check_window(eta);
  LocalTimeEstimate est = make_estimate(path, t_list, x_grid);
  est.estimator = "window";
  est.param = eta;
  est.unreliable = eta < path_value_resolution(path);

  // Uniform x grid admits O(1) binning; otherwise fall back to per-column.
  const Eigen::Index nx = x_grid.size();
  const double x0 = x_grid[0];
  const double step = nx > 1 ? x_grid[1] - x_grid[0] : 0.0;
  bool uniform = nx > 1 && step > 0.0;
  for (Eigen::Index j = 1; uniform && j + 1 < nx; ++j)
    uniform = std::abs((x_grid[j + 1] - x_grid[j]) - step) <= 1e-12 * std::max(1.0, std::abs(step));

  Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(nx);
  Eigen::Index k = 0;
  for (Eigen::Index ti = 0; ti < t_list.size(); ++ti) {
    const Eigen::Index upto = grid_count(path, t_list[ti]);
    for (; k < upto; ++k) {
      const double v = path.values[k];
      if (uniform) {
        // v lands in column j iff x_j <= v < x_j + eta.
        const Eigen::Index j_hi = static_cast<Eigen::Index>(std::floor((v - x0) / step));
        const Eigen::Index j_lo = static_cast<Eigen::Index>(std::ceil((v - x0 - eta) / step + 1e-12));
        for (Eigen::Index j = std::max<Eigen::Index>(j_lo, 0); j <= std::min(j_hi, nx - 1); ++j) {
          if (v >= x_grid[j] && v < x_grid[j] + eta) counts[j] += 1.0;
        }
      } else {
        for (Eigen::Index j = 0; j < nx; ++j)
          if (v >= x_grid[j] && v < x_grid[j] + eta) counts[j] += 1.0;
      }
    }
    est.values.row(ti) = (counts * path.dt / eta).matrix().transpose();
  }
  return est;
}

LocalTimeEstimate smoothed_grid(const SamplePath& path, const Eigen::ArrayXd& t_list,
                                const Eigen::ArrayXd& x_grid, double eps) {
  check_window(eps);
  LocalTimeEstimate est = make_estimate(path, t_list, x_grid);
  est.estimator = "smoothed";
  est.param = eps;

  const double c = 1.0 / (eps * std::sqrt(2.0 * kPi));
  const double inv2 = 1.0 / (2.0 * eps * eps);
  const double cut = 8.0 * eps;  // φ below 8 sd is ~1e-15 of the peak
  const Eigen::Index nx = x_grid.size();
  const double x0 = x_grid[0];
  const double step = nx > 1 ? x_grid[1] - x_grid[0] : 1.0;
  bool uniform = nx > 1 && step > 0.0;
  for (Eigen::Index j = 1; uniform && j + 1 < nx; ++j)
    uniform = std::abs((x_grid[j + 1] - x_grid[j]) - step) <= 1e-12 * std::max(1.0, std::abs(step));

  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(nx);
  Eigen::Index k = 0;
  for (Eigen::Index ti = 0; ti < t_list.size(); ++ti) {
    const Eigen::Index upto = grid_count(path, t_list[ti]);
    for (; k < upto; ++k) {
      const double v = path.values[k];
      Eigen::Index j_lo = 0, j_hi = nx - 1;
      if (uniform) {
        j_lo = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::ceil((v - cut - x0) / step)));
        j_hi = std::min<Eigen::Index>(nx - 1,
                                      static_cast<Eigen::Index>(std::floor((v + cut - x0) / step)));
      }
      for (Eigen::Index j = j_lo; j <= j_hi; ++j) {
        const double d = v - x_grid[j];
        acc[j] += c * std::exp(-d * d * inv2);
      }
    }
    est.values.row(ti) = (acc * path.dt).matrix().transpose();
  }
  return est;
}

double integrate_x(const LocalTimeEstimate& est, Eigen::Index t_index) {
  if (t_index < 0 || t_index >= est.t_list.size())
    throw std::invalid_argument("integrate_x: t index out of range");
  if (est.x_grid.size() < 2) throw std::invalid_argument("integrate_x: need >= 2 x points");
  double acc = 0.0;
  for (Eigen::Index j = 0; j + 1 < est.x_grid.size(); ++j) {
    acc += 0.5 * (est.values(t_index, j) + est.values(t_index, j + 1)) *
           (est.x_grid[j + 1] - est.x_grid[j]);
  }
  return acc;
}

double occupation_identity_check(const SamplePath& path, double t, double a, double b, double eta,
                                 double x_step) {
  if (!(b > a)) throw std::invalid_argument("occupation_identity_check: need a < b");
  check_window(eta);
  if (!(x_step > 0.0)) throw std::invalid_argument("occupation_identity_check: x_step > 0");

  const Eigen::Index upto = grid_count(path, t);
  Eigen::Index inside = 0;
  for (Eigen::Index k = 0; k < upto; ++k) {
    const double v = path.values[k];
    if (v >= a && v <= b) ++inside;
  }
  const double grid_time = path.dt * double(inside);

  const auto nx = static_cast<Eigen::Index>(std::llround((b - a) / x_step)) + 1;
  Eigen::ArrayXd xg(nx);
  for (Eigen::Index j = 0; j < nx; ++j) xg[j] = a + double(j) * x_step;
  Eigen::ArrayXd tl(1);
  tl[0] = t;
  const LocalTimeEstimate est = window_grid(path, tl, xg, eta);
  return std::abs(grid_time - integrate_x(est, 0));
}

}  // namespace ltlab
