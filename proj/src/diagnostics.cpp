#include "ltlab/diagnostics.hpp"

#include "ltlab/lfsm_sim.hpp"
#include "ltlab/stats.hpp"
#include "ltlab/util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ltlab {
namespace {

void require_closed_form(const InnovationSpec& spec, const char* what) {
  if (spec.kind == LawKind::ShiftedPareto)
    throw std::invalid_argument(std::string(what) +
                                ": needs a closed-form characteristic function (stable or "
                                "Gaussian-mixture innovations)");
}

Eigen::ArrayXd log_modulus_on_grid(const CoefficientModel& model, const NormSchedule& norms,
                                   const InnovationSpec& spec, Eigen::Index j,
                                   const Eigen::ArrayXd& u_grid, SStarWeights convention) {
  if (j < 1) throw std::invalid_argument("s_star_cf_log_modulus: j must be >= 1");
  const Eigen::ArrayXd w = s_star_weight_vector(model, norms, j, convention);
  Eigen::ArrayXd out(u_grid.size());
  if (spec.kind == LawKind::ExactStable) {
    // |psi(v)| = exp(-g |v|^alpha): the factor product collapses.
    const double g = spec.stable.gscale;
    const double alpha = spec.stable.alpha;
    const double wsum = w.abs().pow(alpha).sum();
    out = -g * wsum * u_grid.abs().pow(alpha);
    return out;
  }
  for (Eigen::Index i = 0; i < u_grid.size(); ++i) {
    CompensatedSum acc;
    for (Eigen::Index k = 0; k < w.size(); ++k)
      acc.add(char_log_modulus(spec, w[k] * u_grid[i]));
    out[i] = acc.value();
  }
  return out;
}

Eigen::ArrayXd log_spaced(double lo, double hi, Eigen::Index count) {
  Eigen::ArrayXd out(count);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double f = count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::exp(llo + (lhi - llo) * f);
  }
  return out;
}

}  // namespace

Eigen::ArrayXd s_star_cf_log_modulus(const CoefficientModel& model, const NormSchedule& norms,
                                     const InnovationSpec& spec, Eigen::Index j,
                                     const Eigen::ArrayXd& u_grid, SStarWeights convention) {
  require_closed_form(spec, "s_star_cf_log_modulus");
  return log_modulus_on_grid(model, norms, spec, j, u_grid, convention);
}

Eigen::ArrayXd s_star_cf_modulus(const CoefficientModel& model, const NormSchedule& norms,
                                 const InnovationSpec& spec, Eigen::Index j,
                                 const Eigen::ArrayXd& u_grid, SStarWeights convention) {
  return s_star_cf_log_modulus(model, norms, spec, j, u_grid, convention).exp();
}

CfWindowBoundReport cf_window_bound_check(const CoefficientModel& model, const NormSchedule& norms,
                                          const InnovationSpec& spec,
                                          const std::vector<Eigen::Index>& j_list, double lambda,
                                          double d, double c, SStarWeights convention) {
  require_closed_form(spec, "cf_window_bound_check");
  if (j_list.empty()) throw std::invalid_argument("cf_window_bound_check: empty j list");
  if (lambda < 0.0) throw std::invalid_argument("cf_window_bound_check: lambda must be >= 0");
  if (!(d > 0.0) || !(c > 0.0))
    throw std::invalid_argument("cf_window_bound_check: d and c must be > 0");

  CfWindowBoundReport rep;
  rep.j_list.resize(static_cast<Eigen::Index>(j_list.size()));
  rep.log_ratio_max.resize(static_cast<Eigen::Index>(j_list.size()));
  for (std::size_t i = 0; i < j_list.size(); ++i) {
    const Eigen::Index j = j_list[i];
    rep.j_list[static_cast<Eigen::Index>(i)] = static_cast<double>(j);
    const double u_hi = lambda * norms.b(static_cast<double>(j));
    double best = 0.0;  // u = 0 term: |H_j(0)| e^0 = 1
    if (u_hi > 0.0) {
      const Eigen::ArrayXd u = log_spaced(u_hi * 1e-6, u_hi, 512);
      const Eigen::ArrayXd lm = log_modulus_on_grid(model, norms, spec, j, u, convention);
      for (Eigen::Index k = 0; k < u.size(); ++k)
        best = std::max(best, lm[k] + d * std::pow(u[k], c));
    }
    rep.log_ratio_max[static_cast<Eigen::Index>(i)] = best;
  }
  rep.spread = rep.log_ratio_max.maxCoeff() - rep.log_ratio_max.minCoeff();
  rep.uniformly_bounded = rep.spread <= std::log(2.0);
  return rep;
}

CfTailDecayReport cf_tail_decay(const CoefficientModel& model, const NormSchedule& norms,
                                const InnovationSpec& spec,
                                const std::vector<Eigen::Index>& j_list, double d, double cap,
                                SStarWeights convention) {
  require_closed_form(spec, "cf_tail_decay");
  if (j_list.size() < 2) throw std::invalid_argument("cf_tail_decay: needs at least two j values");
  if (!(d > 0.0)) throw std::invalid_argument("cf_tail_decay: d must be > 0");
  if (!(cap > 1.0)) throw std::invalid_argument("cf_tail_decay: cap must be > 1");

  CfTailDecayReport rep;
  rep.u_cap_factor = cap;
  rep.j_list.resize(static_cast<Eigen::Index>(j_list.size()));
  rep.log_sup.resize(static_cast<Eigen::Index>(j_list.size()));
  for (std::size_t i = 0; i < j_list.size(); ++i) {
    const Eigen::Index j = j_list[i];
    rep.j_list[static_cast<Eigen::Index>(i)] = static_cast<double>(j);
    const double u_lo = d * norms.b(static_cast<double>(j));
    const Eigen::ArrayXd u = log_spaced(u_lo, cap * u_lo, 256);
    const Eigen::ArrayXd lm = log_modulus_on_grid(model, norms, spec, j, u, convention);
    rep.log_sup[static_cast<Eigen::Index>(i)] = lm.maxCoeff();
  }
  const LinearFit fit = linear_fit(rep.j_list, rep.log_sup);
  rep.rho = std::exp(fit.slope);
  rep.r_squared = fit.r_squared;
  rep.decays = rep.rho < 1.0;
  return rep;
}

MarginalCheckReport marginal_convergence_check(const CoefficientModel& model,
                                               const NormSchedule& norms,
                                               const InnovationSpec& spec,
                                               const std::vector<Eigen::Index>& n_list, double t,
                                               int replicates, std::uint64_t master_seed,
                                               int threads) {
  if (n_list.empty()) throw std::invalid_argument("marginal_convergence_check: empty n list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2) throw std::invalid_argument("marginal_convergence_check: n must be >= 2");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("marginal_convergence_check: n list must be strictly increasing");
  }
  if (!(t > 0.0)) throw std::invalid_argument("marginal_convergence_check: t must be > 0");
  if (replicates < 2) throw std::invalid_argument("marginal_convergence_check: replicates >= 2");
  if (static_cast<double>(n_list[0]) * t < 1.0)
    throw std::invalid_argument("marginal_convergence_check: [n t] must be >= 1 at the smallest n");

  MarginalCheckReport rep;
  rep.exact_reference =
      model.alpha == 2.0 && spec.alpha() == 2.0 && model.regime == CoefficientModel::Regime::C2;
  rep.n_list.resize(static_cast<Eigen::Index>(n_list.size()));
  rep.ks.resize(static_cast<Eigen::Index>(n_list.size()));

  const auto R = static_cast<std::uint64_t>(replicates);

  // Reference marginals (stream ids [0, R)). Only needed in shape mode.
  Eigen::ArrayXd ref(replicates);
  if (!rep.exact_reference) {
    LfsmSpec lspec;
    lspec.alpha = model.alpha;
    lspec.H = model.hurst();
    lspec.a = 1.0;
    lspec.beta = model.alpha < 2.0 ? spec.beta() : 0.0;
    lspec.grid_n = 1 << 10;
    lspec.t_max = t;
    const LfsmSampler sampler(lspec);
    parallel_for(replicates, threads, [&](Eigen::Index r) {
      RngStream rng = derive_stream(master_seed, static_cast<std::uint64_t>(r));
      ref[r] = sampler.sample(rng).value_at(t);
    });
  }

  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const Eigen::Index n = n_list[ni];
    rep.n_list[static_cast<Eigen::Index>(ni)] = static_cast<double>(n);
    const auto K = static_cast<Eigen::Index>(std::floor(static_cast<double>(n) * t + 1e-9));

    // S_K = Σ_i xi_i (G(K-i) - G(-i)) over i in [1-m, K]: one pass per
    // replicate over the innovation stream in canonical draw order.
    const Eigen::Index m = model.regime == CoefficientModel::Regime::C2
                               ? model.coeffs.size() - 1
                               : TruncationPolicy::truncate().effective_m(n);
    const Eigen::ArrayXd G = cumulative_g(coefficients(model, K + m));
    Eigen::ArrayXd w(K + m);
    for (Eigen::Index s = 0; s < K + m; ++s) {
      const Eigen::Index i = 1 - m + s;
      w[s] = G[K - i] - (i <= 0 ? G[-i] : 0.0);
    }
    const double gamma = gamma_n(model, norms, static_cast<double>(n));

    Eigen::ArrayXd vals(replicates);
    const std::uint64_t base = R * static_cast<std::uint64_t>(ni + 1);
    parallel_for(replicates, threads, [&](Eigen::Index r) {
      RngStream rng = derive_stream(master_seed, base + static_cast<std::uint64_t>(r));
      CompensatedSum acc;
      for (Eigen::Index s = 0; s < w.size(); ++s)
        acc.add(w[s] * sample_innovation(spec, rng));
      vals[r] = acc.value() / gamma;
    });

    if (rep.exact_reference) {
      const double sd = std::sqrt(2.0 * t);
      rep.ks[static_cast<Eigen::Index>(ni)] =
          ks_one_sample(vals, [sd](double v) { return normal_cdf(v / sd); });
    } else {
      rep.ks[static_cast<Eigen::Index>(ni)] =
          ks_two_sample(mad_rescaled(vals), mad_rescaled(ref));
    }
  }

  rep.decreasing = rep.ks[rep.ks.size() - 1] <= rep.ks[0];
  for (Eigen::Index i = 1; i < rep.ks.size() && rep.decreasing; ++i)
    rep.decreasing = rep.ks[i] <= rep.ks[i - 1] + 0.005;
  return rep;
}

}  // namespace ltlab
