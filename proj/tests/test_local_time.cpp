#include "ltlab/local_time.hpp"

#include "ltlab/lfsm_sim.hpp"
#include "ltlab/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ltlab;

namespace {

SamplePath ramp_path(Eigen::Index n) {
  // path(s) = s on the grid: values[k] = (k+1)/n
  SamplePath p;
  p.values = Eigen::ArrayXd::LinSpaced(n, 1.0 / double(n), 1.0);
  p.dt = 1.0 / double(n);
  p.model_id = "ramp";
  return p;
}

SamplePath const_path(Eigen::Index n, double level) {
  SamplePath p;
  p.values = Eigen::ArrayXd::Constant(n, level);
  p.dt = 1.0 / double(n);
  p.model_id = "const";
  return p;
}

}  // namespace

TEST_CASE("window estimate on deterministic paths") {
  const SamplePath ramp = ramp_path(1 << 12);
  // identity occupation density is 1 everywhere inside (0, 1)
  CHECK(window_estimate(ramp, 1.0, 0.25, 1.0 / 64) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(window_estimate(ramp, 0.5, 0.25, 1.0 / 64) == doctest::Approx(1.0).epsilon(1e-10));
  // window fully above the visited range
  CHECK(window_estimate(ramp, 0.5, 0.8, 1.0 / 64) == 0.0);

  const SamplePath flat = const_path(256, 0.3);
  CHECK(window_estimate(flat, 1.0, 0.3, 0.1) == doctest::Approx(10.0));   // t/eta
  CHECK(window_estimate(flat, 0.25, 0.3, 0.1) == doctest::Approx(2.5));
  CHECK(window_estimate(flat, 1.0, 0.31, 0.1) == 0.0);  // level below the window

  CHECK_THROWS_AS(window_estimate(flat, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("window estimate counts exactly the discrete grid sums") {
  SamplePath p;
  p.values = (Eigen::ArrayXd(4) << 0.1, 0.5, 0.1, 0.9).finished();
  p.dt = 0.25;
  // t = 0.5 covers k = 1,2 (values 0.1, 0.5); window [0, 0.2) catches one
  CHECK(window_estimate(p, 0.5, 0.0, 0.2) == doctest::Approx(0.25 / 0.2));
  // t = 0.6 still covers only [nt] = 2 samples
  CHECK(window_estimate(p, 0.6, 0.0, 0.2) == doctest::Approx(0.25 / 0.2));
  // t = 0.75 picks up the third sample
  CHECK(window_estimate(p, 0.75, 0.0, 0.2) == doctest::Approx(0.5 / 0.2));
}

TEST_CASE("smoothed estimate against exact Gaussian convolutions") {
  const SamplePath ramp = ramp_path(1 << 13);
  // occupation is Lebesgue on (0,1): estimate = Phi(0.5/eps) - Phi(-0.5/eps)
  double prev_err = 1.0;
  for (double eps : {0.1, 0.05, 0.025}) {
    const double got = smoothed_estimate(ramp, 1.0, 0.5, eps);
    const double want = 1.0 - 2.0 * normal_cdf(-0.5 / eps);
    CHECK(got == doctest::Approx(want).epsilon(1e-4));
    const double err = std::abs(got - 1.0);
    CHECK(err < prev_err);
    prev_err = err;
  }

  const SamplePath zero = const_path(512, 0.0);
  CHECK(smoothed_estimate(zero, 1.0, 0.0, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("inversion estimate recovers the ramp at its documented accuracy") {
  const SamplePath ramp = ramp_path(1 << 12);
  const CharRepResult r = charrep_estimate(ramp, 1.0, 0.5, 200.0, 4096);
  // closed form: (2/pi) Si(100); the oscillatory tail caps the accuracy
  CHECK(r.value == doctest::Approx(0.9945).epsilon(0.02));
  CHECK(r.imag_abs < 1e-10);
  CHECK_FALSE(r.unstable);

  // far outside the visited range everything cancels
  const CharRepResult far = charrep_estimate(ramp, 1.0, 40.0, 200.0, 4096);
  CHECK(std::abs(far.value) < 0.05);
}

TEST_CASE("grid estimates agree with their pointwise versions") {
  const SamplePath ramp = ramp_path(1 << 10);
  Eigen::ArrayXd ts(2), xs(3);
  ts << 0.5, 1.0;
  xs << 0.1, 0.4, 0.9;
  const LocalTimeEstimate w = window_grid(ramp, ts, xs, 1.0 / 32);
  const LocalTimeEstimate s = smoothed_grid(ramp, ts, xs, 0.05);
  for (Eigen::Index i = 0; i < ts.size(); ++i)
    for (Eigen::Index j = 0; j < xs.size(); ++j) {
      CHECK(w.values(i, j) ==
            doctest::Approx(window_estimate(ramp, ts[i], xs[j], 1.0 / 32)).epsilon(1e-13));
      CHECK(s.values(i, j) ==
            doctest::Approx(smoothed_estimate(ramp, ts[i], xs[j], 0.05)).epsilon(1e-13));
    }
  CHECK_FALSE(w.unreliable);

  // eta below the path's one-step move flags the grid
  const LocalTimeEstimate tiny = window_grid(ramp, ts, xs, 1e-6);
  CHECK(tiny.unreliable);
}

TEST_CASE("occupation identity on deterministic paths") {
  const SamplePath ramp = ramp_path(1 << 12);
  CHECK(occupation_identity_check(ramp, 1.0, -0.25, 1.25, 1.0 / 64, 1.0 / 64) < 0.02);
}

TEST_CASE("local-time facts on Brownian paths") {
  LfsmSpec brown;
  brown.alpha = 2.0;
  brown.H = 0.5;
  brown.grid_n = 1 << 12;
  LfsmSampler sampler(brown);
  const int R = 600;
  const double eta = 1.0 / 64;

  double mean_l = 0.0, mean_half = 0.0, mean_mass = 0.0, med_occ = 0.0;
  Eigen::ArrayXd occ(R);
  const Eigen::ArrayXd xg = Eigen::ArrayXd::LinSpaced(257, -4.0, 4.0);
  Eigen::ArrayXd t1(1);
  t1 << 1.0;
  for (int r = 0; r < R; ++r) {
    RngStream rng = derive_stream(2024, std::uint64_t(r));
    const SamplePath p = sampler.sample(rng);
    const double l_full = window_estimate(p, 1.0, 0.0, eta);
    const double l_half = window_estimate(p, 0.5, 0.0, eta);
    mean_l += l_full;
    mean_half += l_half;
    CHECK(l_half <= l_full + 1e-12);  // occupation grows with t
    const LocalTimeEstimate est = window_grid(p, t1, xg, eta);
    mean_mass += integrate_x(est, 0);
    occ[r] = occupation_identity_check(p, 1.0, -0.5, 0.5, eta, 1.0 / 64);
  }
  mean_l /= R;
  mean_half /= R;
  mean_mass /= R;
  med_occ = median(occ);

  // E L(1, 0) = 1/sqrt(pi) for the variance-2 Brownian convention
  CHECK(mean_l == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(0.06));
  CHECK(mean_half < mean_l);
  // total occupation mass is the elapsed time
  CHECK(mean_mass == doctest::Approx(1.0).epsilon(0.02));
  // pathwise identity between grid time and integrated window estimates
  CHECK(med_occ < 0.02);
}
