#include "ltlab/path_engine.hpp"

#include "ltlab/util.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ltlab {

double SamplePath::value_at(double t) const {
  if (t < 0.0 || t > horizon() + 0.5 * dt)
    throw std::invalid_argument("SamplePath: time outside the path horizon");
  // values[k-1] on ((k-1)*dt, k*dt]; 0 at and before time 0.
  const auto k = static_cast<Eigen::Index>(std::ceil(t / dt - 1e-9));
  if (k <= 0) return 0.0;
  return values[std::min(k, values.size()) - 1];
}

Eigen::ArrayXd SamplePath::times() const {
  Eigen::ArrayXd t(values.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) t[k] = dt * double(k + 1);
  return t;
}

TruncationPolicy TruncationPolicy::exact_finite() { return {Mode::ExactFinite, 0}; }

TruncationPolicy TruncationPolicy::truncate(Eigen::Index m) {
  if (m < 0) throw std::invalid_argument("TruncationPolicy: m must be >= 0");
  return {Mode::Truncate, m};
}

Eigen::Index TruncationPolicy::effective_m(Eigen::Index n) const {
  if (mode == Mode::ExactFinite) return 0;
  if (m > 0) return m;
  return std::max<Eigen::Index>(Eigen::Index(1) << 14, 4 * n);
}

namespace {

Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

constexpr Eigen::Index kMaxFft = Eigen::Index(1) << 24;

}  // namespace

Eigen::ArrayXd fft_convolve(const Eigen::Ref<const Eigen::ArrayXd>& a,
                            const Eigen::Ref<const Eigen::ArrayXd>& b) {
  if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("fft_convolve: empty input");
  const Eigen::Index out_len = a.size() + b.size() - 1;
  const Eigen::Index fft_len = next_pow2(out_len);
  if (fft_len > kMaxFft)
    throw std::invalid_argument("fft_convolve: padded transform of " + std::to_string(fft_len) +
                                " points exceeds the 2^24 cap");
  std::vector<double> pa(static_cast<std::size_t>(fft_len), 0.0);
  std::vector<double> pb(static_cast<std::size_t>(fft_len), 0.0);
  for (Eigen::Index i = 0; i < a.size(); ++i) pa[static_cast<std::size_t>(i)] = a[i];
  for (Eigen::Index i = 0; i < b.size(); ++i) pb[static_cast<std::size_t>(i)] = b[i];

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> fa, fb;
  fft.fwd(fa, pa);
  fft.fwd(fb, pb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  std::vector<double> full;
  fft.inv(full, fa);

  Eigen::ArrayXd out(out_len);
  for (Eigen::Index i = 0; i < out_len; ++i) out[i] = full[static_cast<std::size_t>(i)];
  return out;
}

SamplePath simulate_linear_process(const CoefficientModel& model, const InnovationSpec& spec,
                                   Eigen::Index n, const TruncationPolicy& policy,
                                   RngStream& rng) {
  if (n < 1) throw std::invalid_argument("simulate_linear_process: n must be >= 1");
  const Eigen::Index m = policy.effective_m(n);
  const Eigen::Index total = n + m;
  const Eigen::ArrayXd c = coefficients(model, total);

  // Innovations xi_{1-m}, ..., xi_0, xi_1, ..., xi_n in draw order.
  Eigen::ArrayXd e(total);
  for (Eigen::Index i = 0; i < total; ++i) e[i] = sample_innovation(spec, rng);

  // X_k = Σ_j c_j e[m+k-1-j]: slice the full convolution at lags m..m+n-1.
  const Eigen::ArrayXd full = fft_convolve(c, e);
  SamplePath path;
  path.values = full.segment(m, n);
  path.dt = 1.0 / double(n);
  path.model_id = model.id() + "/" + spec.id();
  path.stream_id = rng.stream_id();
  return path;
}

Eigen::ArrayXd partial_sums(const Eigen::Ref<const Eigen::ArrayXd>& x) {
  Eigen::ArrayXd s(x.size());
  CompensatedSum acc;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    acc.add(x[i]);
    s[i] = acc.value();
  }
  return s;
}

SamplePath normalized_path(const CoefficientModel& model, const NormSchedule& norms,
                           const InnovationSpec& spec, Eigen::Index n,
                           const TruncationPolicy& policy, RngStream& rng) {
  SamplePath path = simulate_linear_process(model, spec, n, policy, rng);
  const double g = gamma_n(model, norms, double(n));
  path.values = partial_sums(path.values) / g;
  path.model_id += "/norm";
  return path;
}

Eigen::ArrayXd s_star_weight_vector(const CoefficientModel& model, const NormSchedule& norms,
                                    Eigen::Index j, SStarWeights convention) {
  if (j < 1) throw std::invalid_argument("s_star: j must be >= 1");
  Eigen::ArrayXd w(j);
  if (convention == SStarWeights::Simplified) {
    const double bj = norms.b(double(j));
    const double expo = model.hurst() - 1.0 / model.alpha;
    for (Eigen::Index k = 1; k <= j; ++k) w[k - 1] = std::pow(double(k) / double(j), expo) / bj;
    return w;
  }
  const Eigen::ArrayXd g = cumulative_g(coefficients(model, j));
  const double gj = gamma_n(model, norms, double(j));
  for (Eigen::Index k = 0; k < j; ++k) w[k] = g[k] / gj;
  return w;
}

double s_star(const CoefficientModel& model, const NormSchedule& norms, const InnovationSpec& spec,
              Eigen::Index j, SStarWeights convention, RngStream& rng) {
  const Eigen::ArrayXd w = s_star_weight_vector(model, norms, j, convention);
  CompensatedSum acc;
  for (Eigen::Index k = 0; k < j; ++k) acc.add(w[k] * sample_innovation(spec, rng));
  return acc.value();
}

}  // namespace ltlab
