#include "ltlab/diagnostics.hpp"
#include "ltlab/linear_model.hpp"
#include "ltlab/path_engine.hpp"
#include "ltlab/stable_rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace ltlab;

namespace {

NormSchedule unit_norms(double alpha) { return {alpha, SlowlyVarying::constant(1.0)}; }

InnovationSpec unit_gaussian() { return InnovationSpec::exact_stable(2.0, 0.0, 1.0); }

InnovationSpec mixture_var2(double p_wide, double wide_var) {
  // two zero-mean components with total variance (1 - p) + p * wide_var
  Eigen::ArrayXd w(2), mu(2), sd(2);
  w << 1.0 - p_wide, p_wide;
  mu << 0.0, 0.0;
  sd << 1.0, std::sqrt(wide_var);
  return InnovationSpec::gaussian_mixture(w, mu, sd);
}

}  // namespace

TEST_CASE("weighted-sum log modulus: stable closed forms") {
  const auto model = CoefficientModel::c1(0.7, 2.0, SlowlyVarying::constant(1.0));
  const auto norms = unit_norms(2.0);
  const auto spec = unit_gaussian();

  Eigen::ArrayXd u(5);
  u << -3.0, -0.9, 0.0, 0.4, 2.0;

  // j = 1: the single weight is 1^{H-1/alpha}/gamma_1 = 1, so the sum's
  // characteristic function is the innovation's own: log|psi(u)| = -u^2.
  const Eigen::ArrayXd lm1 = s_star_cf_log_modulus(model, norms, spec, 1, u);
  for (Eigen::Index i = 0; i < u.size(); ++i)
    CHECK(lm1[i] == doctest::Approx(-u[i] * u[i]).epsilon(1e-12));
  CHECK(s_star_cf_modulus(model, norms, spec, 1, u)[2] == 1.0);

  // Unit-coefficient iid model (hurst = 1/alpha): every weight is 1/b_j, so
  // |H_j(u)| = |psi(u/b_j)|^j.
  Eigen::ArrayXd one(1);
  one << 1.0;
  const auto flat = CoefficientModel::c2(one, 2.0, 1.0);
  const Eigen::ArrayXd lm16 = s_star_cf_log_modulus(flat, norms, spec, 16, u);
  for (Eigen::Index i = 0; i < u.size(); ++i)
    CHECK(lm16[i] == doctest::Approx(16.0 * char_log_modulus(spec, u[i] / 4.0)).epsilon(1e-12));

  const auto flat15 = CoefficientModel::c2(one, 1.5, 1.0);
  const auto norms15 = unit_norms(1.5);
  const auto spec15 = InnovationSpec::exact_stable(1.5, 0.3, 1.0);
  const double b16 = std::pow(16.0, 1.0 / 1.5);
  const Eigen::ArrayXd lm15 = s_star_cf_log_modulus(flat15, norms15, spec15, 16, u);
  for (Eigen::Index i = 0; i < u.size(); ++i)
    CHECK(lm15[i] == doctest::Approx(16.0 * -std::pow(std::abs(u[i]) / b16, 1.5)).epsilon(1e-12));

  // alpha = 2 stable and a single-component Gaussian mixture with sd^2 = 2
  // are the same law; the two evaluation paths must agree.
  Eigen::ArrayXd w1(1), mu1(1), sd1(1);
  w1 << 1.0;
  mu1 << 0.0;
  sd1 << std::sqrt(2.0);
  const auto gm = InnovationSpec::gaussian_mixture(w1, mu1, sd1);
  const Eigen::ArrayXd lm_st = s_star_cf_log_modulus(model, norms, spec, 32, u);
  const Eigen::ArrayXd lm_gm = s_star_cf_log_modulus(model, norms, gm, 32, u);
  for (Eigen::Index i = 0; i < u.size(); ++i)
    CHECK(lm_gm[i] == doctest::Approx(lm_st[i]).epsilon(1e-10));

  CHECK_THROWS_AS(s_star_cf_log_modulus(model, norms, spec, 0, u), std::invalid_argument);
  const auto pareto = InnovationSpec::shifted_pareto(1.5, 0.5);
  CHECK_THROWS_AS(s_star_cf_log_modulus(model, norms, pareto, 4, u), std::invalid_argument);
}

TEST_CASE("unit-argument modulus approaches exp(-1/(alpha H))") {
  // Riemann-sum limit of the simplified weights: sum_k (k^{H-1/alpha}/gamma_j)^alpha
  // -> 1/(alpha H), so |H_j(1)| -> exp(-gscale/(alpha H)).
  Eigen::ArrayXd u(1);
  u << 1.0;

  const auto m1 = CoefficientModel::c1(0.7, 2.0, SlowlyVarying::constant(1.0));
  const double v1 = s_star_cf_modulus(m1, unit_norms(2.0), unit_gaussian(), 10000, u)[0];
  CHECK(v1 == doctest::Approx(std::exp(-1.0 / 1.4)).epsilon(0.005));

  const auto m2 = CoefficientModel::c1(0.6, 1.5, SlowlyVarying::constant(1.0), true);
  const auto s2 = InnovationSpec::exact_stable(1.5, 0.0, 1.0);
  const double v2 = s_star_cf_modulus(m2, unit_norms(1.5), s2, 10000, u)[0];
  CHECK(v2 == doctest::Approx(std::exp(-1.0 / 0.9)).epsilon(0.005));
}

TEST_CASE("window bound check accepts j-independent families") {
  const auto model = CoefficientModel::c1(0.7, 2.0, SlowlyVarying::constant(1.0));
  const auto norms = unit_norms(2.0);
  const auto spec = unit_gaussian();
  const std::vector<Eigen::Index> js = {64, 256, 1024};

  // c < alpha: the interior maximum of d u^c - W u^alpha is j-independent
  // (W = sum |w_k|^2 drifts only through its Riemann-sum tail).
  const auto good = cf_window_bound_check(model, norms, spec, js, 1.0, 1.0, 1.0);
  CHECK(good.uniformly_bounded);
  CHECK(good.spread < 0.01);
  for (Eigen::Index i = 0; i < good.log_ratio_max.size(); ++i) {
    CHECK(good.log_ratio_max[i] > 0.2);
    CHECK(good.log_ratio_max[i] < 0.5);
  }

  // c = alpha with d below the quadratic coefficient: the exponent stays
  // negative on the whole window, so the u = 0 term is the maximum.
  const auto flat = cf_window_bound_check(model, norms, spec, js, 1.0, 0.3, 2.0);
  CHECK(flat.uniformly_bounded);
  CHECK(flat.log_ratio_max.maxCoeff() == 0.0);
  CHECK(flat.spread == 0.0);

  // c > alpha: the compensator wins at the window edge u = lambda b_j, which
  // grows with j; the family cannot be uniformly bounded.
  const auto bad =
      cf_window_bound_check(model, norms, spec, {64, 1024}, 1.0, 0.2, 2.5);
  CHECK_FALSE(bad.uniformly_bounded);
  CHECK(bad.log_ratio_max[1] > bad.log_ratio_max[0] + 100.0);

  // lambda = 0: empty window, vacuously bounded.
  const auto vac = cf_window_bound_check(model, norms, spec, js, 0.0, 1.0, 2.0);
  CHECK(vac.uniformly_bounded);
  CHECK(vac.spread == 0.0);

  CHECK_THROWS_AS(cf_window_bound_check(model, norms, spec, {}, 1.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cf_window_bound_check(model, norms, spec, js, -1.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cf_window_bound_check(model, norms, spec, js, 1.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cf_window_bound_check(model, norms, spec, js, 1.0, 1.0, 0.0),
                  std::invalid_argument);
  const auto pareto = InnovationSpec::shifted_pareto(1.5, 0.5);
  CHECK_THROWS_AS(cf_window_bound_check(model, norms, pareto, js, 1.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("tail decay fit recovers the per-factor decay rate") {
  const auto norms = unit_norms(2.0);
  Eigen::ArrayXd one(1);
  one << 1.0;
  const auto unit_c2 = CoefficientModel::c2(one, 2.0, 1.0);

  // Single unit coefficient: weights 1/b_j, log sup = -d^2 j exactly, so the
  // fit is exact with rho = exp(-d^2).
  const auto exact = cf_tail_decay(unit_c2, norms, unit_gaussian(), {256, 512, 1024, 2048}, 0.5);
  CHECK(exact.decays);
  CHECK(exact.rho == doctest::Approx(std::exp(-0.25)).epsilon(1e-9));
  CHECK(exact.r_squared > 0.9999);
  for (Eigen::Index i = 0; i < exact.j_list.size(); ++i)
    CHECK(exact.log_sup[i] == doctest::Approx(-0.25 * exact.j_list[i]).epsilon(1e-9));

  // Power-law memory: W_j -> 1/(2H) gives log sup ~ -(d^2/(2H)) j.
  const auto mem = CoefficientModel::c1(0.35, 2.0, SlowlyVarying::constant(1.0), true);
  const auto slow = cf_tail_decay(mem, norms, unit_gaussian(), {64, 128, 256, 512, 1024}, 0.5);
  CHECK(slow.decays);
  CHECK(slow.rho == doctest::Approx(std::exp(-0.25 / 0.7)).epsilon(0.02));
  CHECK(slow.r_squared > 0.999);

  // Mixture innovations: |H_j| = psi(u/b_j)^j, so the sup over the window is
  // psi(d)^j and the fitted rate is the hand-computable psi(d).
  const auto gm = mixture_var2(0.4, 3.5);
  const auto mix = cf_tail_decay(unit_c2, norms, gm, {64, 128, 256, 512}, 0.8);
  const double psi_d = 0.6 * std::exp(-0.5 * 0.64) + 0.4 * std::exp(-0.5 * 3.5 * 0.64);
  CHECK(mix.decays);
  CHECK(mix.rho == doctest::Approx(psi_d).epsilon(1e-6));
  CHECK(mix.r_squared > 0.9999);

  CHECK_THROWS_AS(cf_tail_decay(unit_c2, norms, unit_gaussian(), {64}, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(cf_tail_decay(unit_c2, norms, unit_gaussian(), {64, 128}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(cf_tail_decay(unit_c2, norms, unit_gaussian(), {64, 128}, 0.5, 1.0),
                  std::invalid_argument);
  const auto pareto = InnovationSpec::shifted_pareto(1.5, 0.5);
  CHECK_THROWS_AS(cf_tail_decay(unit_c2, norms, pareto, {64, 128}, 0.5),
                  std::invalid_argument);
}

TEST_CASE("marginal check: kurtotic iid sums converge to the exact reference") {
  Eigen::ArrayXd one(1);
  one << 1.0;
  const auto model = CoefficientModel::c2(one, 2.0, 1.0);
  const auto norms = unit_norms(2.0);
  const auto spec = mixture_var2(0.05, 21.0);  // variance 2, excess kurtosis 14.25

  const auto rep = marginal_convergence_check(model, norms, spec, {2, 1024}, 1.0, 3000, 424242, 2);
  CHECK(rep.exact_reference);
  CHECK(rep.ks[0] > 0.04);   // two-draw sum keeps the mixture's heavy shoulders
  CHECK(rep.ks[1] < 0.035);  // CLT noise floor at R = 3000
  CHECK(rep.decreasing);
}

TEST_CASE("marginal check: shape mode against simulated limit marginals") {
  const auto model = CoefficientModel::c1(0.7, 2.0, SlowlyVarying::constant(1.0));
  const auto norms = unit_norms(2.0);

  // Long-memory Gaussian model: every finite-n marginal is already Gaussian,
  // so the MAD-rescaled two-sample distance sits at the resolution floor.
  const auto rep = marginal_convergence_check(model, norms, unit_gaussian(), {256}, 1.0, 800, 77, 2);
  CHECK_FALSE(rep.exact_reference);
  CHECK(rep.ks[0] < 0.09);
}

TEST_CASE("marginal check: replicate streams make the verdict thread-invariant") {
  Eigen::ArrayXd one(1);
  one << 1.0;
  const auto model = CoefficientModel::c2(one, 2.0, 1.0);
  const auto norms = unit_norms(2.0);
  const auto spec = mixture_var2(0.1, 11.0);

  const auto a = marginal_convergence_check(model, norms, spec, {2, 64}, 1.0, 400, 9001, 1);
  const auto b = marginal_convergence_check(model, norms, spec, {2, 64}, 1.0, 400, 9001, 3);
  CHECK((a.ks == b.ks).all());
}

TEST_CASE("marginal check rejects malformed requests") {
  Eigen::ArrayXd one(1);
  one << 1.0;
  const auto model = CoefficientModel::c2(one, 2.0, 1.0);
  const auto norms = unit_norms(2.0);
  const auto spec = unit_gaussian();

  CHECK_THROWS_AS(marginal_convergence_check(model, norms, spec, {}, 1.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(marginal_convergence_check(model, norms, spec, {1, 8}, 1.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(marginal_convergence_check(model, norms, spec, {8, 8}, 1.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(marginal_convergence_check(model, norms, spec, {8, 16}, 0.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(marginal_convergence_check(model, norms, spec, {8, 16}, 1.0, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(marginal_convergence_check(model, norms, spec, {2, 16}, 0.3, 100, 1),
                  std::invalid_argument);
}
