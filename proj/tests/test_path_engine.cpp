#include "ltlab/path_engine.hpp"

#include "ltlab/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace ltlab;

namespace {

Eigen::ArrayXd naive_convolve(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

double normal_cdf(double x, double sd) { return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0))); }

}  // namespace

TEST_CASE("fft convolution against the direct sum") {
  Eigen::ArrayXd a(4), b(3);
  a << 1.0, 2.0, -1.0, 0.5;
  b << 1.0, 1.0, 0.25;
  const Eigen::ArrayXd got = fft_convolve(a, b);
  const Eigen::ArrayXd want = naive_convolve(a, b);
  REQUIRE(got.size() == want.size());
  CHECK(((got - want).abs() < 1e-12).all());

  RngStream rng = derive_stream(7, 1);
  Eigen::ArrayXd ra(257), rb(130);
  for (Eigen::Index i = 0; i < ra.size(); ++i) ra[i] = rng.gaussian();
  for (Eigen::Index i = 0; i < rb.size(); ++i) rb[i] = rng.gaussian();
  const Eigen::ArrayXd g2 = fft_convolve(ra, rb);
  const Eigen::ArrayXd w2 = naive_convolve(ra, rb);
  CHECK((g2 - w2).abs().maxCoeff() / w2.abs().maxCoeff() < 1e-12);
}

TEST_CASE("fft convolution rejects transforms past the size cap") {
  Eigen::ArrayXd big = Eigen::ArrayXd::Zero((1 << 23) + 1);
  CHECK_THROWS_AS(fft_convolve(big, big), std::invalid_argument);
}

TEST_CASE("identity filter reproduces the innovations") {
  Eigen::ArrayXd one(1);
  one << 1.0;
  const CoefficientModel m = CoefficientModel::c2(one, 2.0, 1.0);
  const InnovationSpec spec = InnovationSpec::exact_stable(2.0, 0.0, 1.0);
  RngStream rng = derive_stream(11, 3);
  const SamplePath p = simulate_linear_process(m, spec, 64, TruncationPolicy::exact_finite(), rng);
  // the single-tap case still routes through the fft, so allow its rounding
  RngStream rng2 = derive_stream(11, 3);
  for (Eigen::Index k = 0; k < 64; ++k)
    CHECK(p.values[k] == doctest::Approx(sample_innovation(spec, rng2)).epsilon(1e-12));
}

TEST_CASE("two-tap filter by hand") {
  // X_k = xi_k + xi_{k-1}; with only in-sample innovations X_1 = xi_1.
  Eigen::ArrayXd taps(2);
  taps << 1.0, 1.0;
  const CoefficientModel m = CoefficientModel::c2(taps, 2.0, 1.0);
  const InnovationSpec spec = InnovationSpec::exact_stable(2.0, 0.0, 1.0);
  RngStream rng = derive_stream(5, 9);
  const SamplePath p = simulate_linear_process(m, spec, 32, TruncationPolicy::exact_finite(), rng);
  RngStream rng2 = derive_stream(5, 9);
  Eigen::ArrayXd xi(32);
  for (Eigen::Index k = 0; k < 32; ++k) xi[k] = sample_innovation(spec, rng2);
  CHECK(p.values[0] == doctest::Approx(xi[0]).epsilon(1e-12));
  for (Eigen::Index k = 1; k < 32; ++k)
    CHECK(p.values[k] == doctest::Approx(xi[k] + xi[k - 1]).epsilon(1e-13));
}

TEST_CASE("fft path equals the direct moving average") {
  // long-memory taps force the convolution route; compare against a naive sum
  const CoefficientModel m = CoefficientModel::c1(0.7, 2.0, SlowlyVarying::constant(1.0));
  const InnovationSpec spec = InnovationSpec::exact_stable(2.0, 0.0, 1.0);
  const Eigen::Index n = 1 << 10, mm = 1 << 14;
  RngStream rng = derive_stream(21, 0);
  const SamplePath p = simulate_linear_process(m, spec, n, TruncationPolicy::truncate(mm), rng);

  RngStream rng2 = derive_stream(21, 0);
  Eigen::ArrayXd xi(n + mm);  // xi_{1-m}..xi_n in draw order
  for (Eigen::Index i = 0; i < xi.size(); ++i) xi[i] = sample_innovation(spec, rng2);
  const Eigen::ArrayXd c = coefficients(m, n + mm);
  double max_rel = 0.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    double direct = 0.0;
    for (Eigen::Index j = 0; j < k + mm; ++j) direct += c[j] * xi[mm + k - 1 - j];
    max_rel = std::max(max_rel, std::abs(p.values[k - 1] - direct) /
                                    std::max(1.0, std::abs(direct)));
  }
  CHECK(max_rel < 1e-9);
}

TEST_CASE("normalized iid sums look standard normal at the horizon") {
  Eigen::ArrayXd one(1);
  one << 1.0;
  const CoefficientModel m = CoefficientModel::c2(one, 2.0, 1.0);
  const NormSchedule norms(2.0, SlowlyVarying::constant(1.0));
  const InnovationSpec spec = InnovationSpec::exact_stable(2.0, 0.0, 1.0);
  const int R = 4000;
  Eigen::ArrayXd endpoints(R);
  for (int r = 0; r < R; ++r) {
    RngStream rng = derive_stream(100, std::uint64_t(r));
    const SamplePath p = normalized_path(m, norms, spec, 512, TruncationPolicy::exact_finite(), rng);
    endpoints[r] = p.values[p.size() - 1];
    if (r == 0) {
      CHECK(p.dt == doctest::Approx(1.0 / 512.0));
      CHECK(p.value_at(0.0) == 0.0);
      CHECK(p.horizon() == doctest::Approx(1.0));
    }
  }
  // S_n / (1 * sqrt(n)) with Var(xi) = 2: exactly N(0, 2) here
  const double ks = ks_one_sample(endpoints, [](double x) { return normal_cdf(x, std::sqrt(2.0)); });
  CHECK(ks < 0.03);
}

TEST_CASE("piecewise-constant accessor walks the grid") {
  SamplePath p;
  p.values = Eigen::ArrayXd::LinSpaced(4, 1.0, 4.0);  // 1, 2, 3, 4
  p.dt = 0.25;
  CHECK(p.value_at(0.0) == 0.0);
  CHECK(p.value_at(0.1) == 1.0);
  CHECK(p.value_at(0.25) == 1.0);
  CHECK(p.value_at(0.26) == 2.0);
  CHECK(p.value_at(1.0) == 4.0);
  CHECK(p.times()[0] == doctest::Approx(0.25));
  CHECK(p.times()[3] == doctest::Approx(1.0));
}

TEST_CASE("partial sums are exact prefix sums") {
  Eigen::ArrayXd x(5);
  x << 1.0, -2.0, 0.5, 0.25, 3.0;
  const Eigen::ArrayXd s = partial_sums(x);
  CHECK(s[0] == 1.0);
  CHECK(s[1] == -1.0);
  CHECK(s[4] == doctest::Approx(2.75));
}

TEST_CASE("weighted innovation sums reuse the declared stream") {
  // j = 1: both conventions reduce to xi_1 / b_1 = xi_1
  const CoefficientModel m = CoefficientModel::c1(0.7, 2.0, SlowlyVarying::constant(1.0));
  const NormSchedule norms(2.0, SlowlyVarying::constant(1.0));
  const InnovationSpec spec = InnovationSpec::exact_stable(2.0, 0.0, 1.0);
  RngStream a = derive_stream(3, 4);
  const double v = s_star(m, norms, spec, 1, SStarWeights::Simplified, a);
  RngStream b = derive_stream(3, 4);
  CHECK(v == doctest::Approx(sample_innovation(spec, b)).epsilon(1e-14));

  // H = 1/alpha: the simplified weights (k/j)^{H-1/alpha} are all one
  Eigen::ArrayXd one(1);
  one << 1.0;
  const CoefficientModel levy = CoefficientModel::c2(one, 2.0, 1.0);
  const Eigen::ArrayXd w = s_star_weight_vector(levy, norms, 16, SStarWeights::Simplified);
  CHECK(w.size() == 16);
  CHECK((w - 0.25).abs().maxCoeff() < 1e-15);  // 1 / b_16 = 1/4

  // exact convention weights are prefix sums of the coefficients over gamma_j
  const Eigen::ArrayXd we = s_star_weight_vector(m, norms, 8, SStarWeights::Exact);
  const Eigen::ArrayXd g = cumulative_g(coefficients(m, 8));
  const double gamma8 = gamma_n(m, norms, 8.0);
  CHECK(((we - g / gamma8).abs() < 1e-14).all());
}

TEST_CASE("truncation policies") {
  CHECK(TruncationPolicy::exact_finite().effective_m(100) == 0);
  CHECK(TruncationPolicy::truncate(64).effective_m(100) == 64);
  CHECK(TruncationPolicy::truncate().effective_m(1 << 10) == (1 << 14));
  CHECK(TruncationPolicy::truncate().effective_m(1 << 13) == (1 << 15));
}
