#include "ltlab/lfsm_sim.hpp"

#include "ltlab/util.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ltlab {

void LfsmSpec::validate() const {
  if (!(alpha > 0.0) || alpha > 2.0) throw std::invalid_argument("LfsmSpec: alpha must be in (0, 2]");
  if (!(H > 0.0) || !(H < 1.0)) throw std::invalid_argument("LfsmSpec: H must be in (0, 1)");
  if (a == 0.0) throw std::invalid_argument("LfsmSpec: scale a must be nonzero");
  if (alpha == 2.0 && beta != 0.0) throw std::invalid_argument("LfsmSpec: beta must be 0 at alpha = 2");
  if (beta < -1.0 || beta > 1.0) throw std::invalid_argument("LfsmSpec: beta must be in [-1, 1]");
  if (grid_n < 2) throw std::invalid_argument("LfsmSpec: grid_n must be >= 2");
  if (!(t_max > 0.0)) throw std::invalid_argument("LfsmSpec: t_max must be positive");
  if (refine < 1) throw std::invalid_argument("LfsmSpec: refine must be >= 1");
  if (!(t_past_factor > 0.0)) throw std::invalid_argument("LfsmSpec: t_past_factor must be positive");
}

LfsmSpec::Kind LfsmSpec::kind() const {
  if (H == 1.0 / alpha) return Kind::LevyMotion;
  if (alpha == 2.0) return Kind::Fbm;
  return Kind::Lfsm;
}

std::string LfsmSpec::id() const {
  const char* k = kind() == Kind::Fbm ? "fbm" : (kind() == Kind::LevyMotion ? "levy" : "lfsm");
  return std::string(k) + "(alpha=" + format_double(alpha) + ",H=" + format_double(H) +
         ",a=" + format_double(a) + ")";
}

double fbm_increment_autocov(double H, double a, double dt, Eigen::Index lag) {
  // 2 a^2 dt^{2H} * 0.5 (|k+1|^{2H} + |k-1|^{2H} - 2|k|^{2H})
  const double k = double(lag < 0 ? -lag : lag);
  const double h2 = 2.0 * H;
  const double body =
      0.5 * (std::pow(k + 1.0, h2) + std::pow(std::abs(k - 1.0), h2) - 2.0 * std::pow(k, h2));
  return 2.0 * a * a * std::pow(dt, h2) * body;
}

namespace {

constexpr Eigen::Index kMaxFft = Eigen::Index(1) << 24;

Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

LfsmSampler::LfsmSampler(const LfsmSpec& spec) : spec_(spec) {
  spec_.validate();
  const Eigen::Index N = spec_.grid_n;
  switch (spec_.kind()) {
    case LfsmSpec::Kind::LevyMotion:
      return;  // nothing to precompute
    case LfsmSpec::Kind::Fbm: {
      // Davies–Harte: eigenvalues of the circulant extension of the fGn
      // autocovariance (row: r_0..r_N, r_{N-1}..r_1).
      const Eigen::Index two_n = 2 * N;
      if (two_n > kMaxFft) throw std::invalid_argument("LfsmSampler: grid too large to embed");
      const double dt = spec_.t_max / double(N);
      std::vector<std::complex<double>> row(static_cast<std::size_t>(two_n));
      for (Eigen::Index k = 0; k <= N; ++k)
        row[static_cast<std::size_t>(k)] = fbm_increment_autocov(spec_.H, spec_.a, dt, k);
      for (Eigen::Index k = 1; k < N; ++k)
        row[static_cast<std::size_t>(two_n - k)] = row[static_cast<std::size_t>(k)];
      Eigen::FFT<double> fft;
      std::vector<std::complex<double>> eig;
      fft.fwd(eig, row);
      sqrt_eigs_.resize(two_n);
      double max_eig = 0.0;
      for (auto& e : eig) max_eig = std::max(max_eig, e.real());
      for (Eigen::Index i = 0; i < two_n; ++i) {
        double lam = eig[static_cast<std::size_t>(i)].real();
        if (lam < 0.0) {
          if (lam < -1e-8 * max_eig)
            throw std::runtime_error("LfsmSampler: circulant embedding is not nonnegative definite");
          lam = 0.0;
        }
        sqrt_eigs_[i] = std::sqrt(lam);
      }
      return;
    }
    case LfsmSpec::Kind::Lfsm: {
      // Cell-averaged moving-average kernel on the refined grid. With
      // kappa = H - 1/alpha and cell width d, the weight at lag l >= 1 is
      //   w(l) = ((l d)^{kappa+1} - ((l-1) d)^{kappa+1}) / (d (kappa+1)),
      // the exact cell average of s^kappa, which absorbs the u -> t
      // singularity when kappa < 0.
      cell_dt_ = spec_.t_max / double(N * spec_.refine);
      const auto cells_horizon = N * Eigen::Index(spec_.refine);
      cells_past_ = static_cast<Eigen::Index>(
          std::llround(spec_.t_past_factor * double(cells_horizon)));
      cells_total_ = cells_past_ + cells_horizon;
      const double kappa = spec_.H - 1.0 / spec_.alpha;
      Eigen::ArrayXd kernel(cells_total_);
      const double inv = 1.0 / (cell_dt_ * (kappa + 1.0));
      double prev = 0.0;  // (0)^{kappa+1}
      for (Eigen::Index l = 1; l <= cells_total_; ++l) {
        const double cur = std::pow(double(l) * cell_dt_, kappa + 1.0);
        kernel[l - 1] = (cur - prev) * inv;
        prev = cur;
      }
      const Eigen::Index out_len = cells_total_ + cells_total_ - 1;
      fft_len_ = next_pow2(out_len);
      if (fft_len_ > kMaxFft)
        throw std::invalid_argument("LfsmSampler: kernel transform exceeds the 2^24 cap");
      std::vector<double> padded(static_cast<std::size_t>(fft_len_), 0.0);
      for (Eigen::Index i = 0; i < cells_total_; ++i) padded[static_cast<std::size_t>(i)] = kernel[i];
      Eigen::FFT<double> fft;
      std::vector<std::complex<double>> kf;
      fft.fwd(kf, padded);
      kernel_fft_ = Eigen::Map<Eigen::ArrayXcd>(kf.data(), Eigen::Index(kf.size()));
      return;
    }
  }
}

SamplePath LfsmSampler::sample(RngStream& rng) const {
  const Eigen::Index N = spec_.grid_n;
  SamplePath path;
  path.dt = spec_.t_max / double(N);
  path.model_id = spec_.id();
  path.stream_id = rng.stream_id();

  switch (spec_.kind()) {
    case LfsmSpec::Kind::LevyMotion: {
      // Λ has iid strictly stable increments of scale dt^{1/alpha};
      // the alpha = 2 member gives Var Λ(1) = 2 a^2 t.
      const StableLaw unit(spec_.alpha, spec_.alpha == 2.0 ? 0.0 : spec_.beta, 1.0);
      const double scale = spec_.a * std::pow(path.dt, 1.0 / spec_.alpha);
      Eigen::ArrayXd inc(N);
      for (Eigen::Index i = 0; i < N; ++i) inc[i] = scale * sample_stable(unit, rng);
      path.values = partial_sums(inc);
      return path;
    }
    case LfsmSpec::Kind::Fbm: {
      const Eigen::Index two_n = 2 * N;
      // Complex Gaussian spectrum with Hermitian pairing.
      std::vector<std::complex<double>> w(static_cast<std::size_t>(two_n));
      const double norm = 1.0 / std::sqrt(double(two_n));
      w[0] = sqrt_eigs_[0] * rng.gaussian() * norm;
      for (Eigen::Index k = 1; k < N; ++k) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        const double s = sqrt_eigs_[k] * norm / std::sqrt(2.0);
        w[static_cast<std::size_t>(k)] = std::complex<double>(s * re, s * im);
        w[static_cast<std::size_t>(two_n - k)] = std::conj(w[static_cast<std::size_t>(k)]);
      }
      w[static_cast<std::size_t>(N)] = sqrt_eigs_[N] * rng.gaussian() * norm;
      Eigen::FFT<double> fft;
      std::vector<std::complex<double>> spectrum;
      fft.fwd(spectrum, w);
      Eigen::ArrayXd inc(N);
      for (Eigen::Index i = 0; i < N; ++i) inc[i] = spectrum[static_cast<std::size_t>(i)].real();
      path.values = partial_sums(inc);
      return path;
    }
    case LfsmSpec::Kind::Lfsm: {
      // dZ over each refined cell, then one convolution with the kernel
      // spectrum gives C(t) = Σ_{u_i < t} w(t - u_i) dZ_i; subtracting the
      // t = 0 column C0 (cells u_i < 0) yields Λ on the grid.
      const StableLaw unit(spec_.alpha, spec_.beta, 1.0);
      const double zscale = std::pow(cell_dt_, 1.0 / spec_.alpha);
      std::vector<double> dz(static_cast<std::size_t>(fft_len_), 0.0);
      for (Eigen::Index i = 0; i < cells_total_; ++i)
        dz[static_cast<std::size_t>(i)] = zscale * sample_stable(unit, rng);

      Eigen::FFT<double> fft;
      std::vector<std::complex<double>> f;
      fft.fwd(f, dz);
      for (Eigen::Index i = 0; i < fft_len_; ++i) f[static_cast<std::size_t>(i)] *= kernel_fft_[i];
      std::vector<double> conv;
      fft.inv(conv, f);

      // conv[r] = Σ_i kernel[r - i] dz[i], so C at the point q cells past
      // the left edge is conv[q - 1]; q = cells_past_ is t = 0.
      const double C0 = conv.at(static_cast<std::size_t>(cells_past_ - 1));
      path.values.resize(N);
      for (Eigen::Index k = 1; k <= N; ++k) {
        const Eigen::Index cell = cells_past_ + k * spec_.refine;  // t_k in cell units from -t_past
        path.values[k - 1] = spec_.a * (conv.at(static_cast<std::size_t>(cell - 1)) - C0);
      }
      return path;
    }
  }
  throw std::logic_error("LfsmSampler: unreachable");
}

SamplePath simulate_lfsm(const LfsmSpec& spec, RngStream& rng) {
  return LfsmSampler(spec).sample(rng);
}

double self_similarity_check(const LfsmSpec& spec, double c, double t0, int replicates,
                             std::uint64_t master_seed, std::uint64_t stream_base, int threads) {
  if (!(c > 0.0) || !(t0 > 0.0)) throw std::invalid_argument("self_similarity_check: c, t0 > 0");
  if (replicates < 2) throw std::invalid_argument("self_similarity_check: need >= 2 replicates");
  LfsmSpec wide = spec;
  wide.t_max = std::max(spec.t_max, c * t0);
  const LfsmSampler scaled_sampler(wide);
  LfsmSpec narrow = spec;
  narrow.t_max = std::max(spec.t_max, t0);
  const LfsmSampler base_sampler(narrow);

  std::vector<double> scaled(static_cast<std::size_t>(replicates));
  std::vector<double> base(static_cast<std::size_t>(replicates));
  parallel_for(replicates, threads, [&](int r) {
    RngStream rng_a(master_seed, stream_base + std::uint64_t(r));
    scaled[static_cast<std::size_t>(r)] =
        std::pow(c, -spec.H) * scaled_sampler.sample(rng_a).value_at(c * t0);
    RngStream rng_b(master_seed, stream_base + std::uint64_t(replicates) + std::uint64_t(r));
    base[static_cast<std::size_t>(r)] = base_sampler.sample(rng_b).value_at(t0);
  });

  std::sort(scaled.begin(), scaled.end());
  std::sort(base.begin(), base.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < scaled.size() && j < base.size()) {
    if (scaled[i] <= base[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(double(i) / scaled.size() - double(j) / base.size()));
  }
  return d;
}

}  // namespace ltlab
