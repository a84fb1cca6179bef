#include "ltlab/harness.hpp"

#include "ltlab/functionals.hpp"
#include "ltlab/lfsm_sim.hpp"
#include "ltlab/local_time.hpp"
#include "ltlab/quadrature.hpp"
#include "ltlab/stats.hpp"
#include "ltlab/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace ltlab {
namespace {

// Pinned verdict tolerances. The KS slack absorbs the two-sample Monte Carlo
// floor (~1/sqrt(replicates)); the gap slack absorbs replicate noise in L²
// columns. Both are part of the published pass/fail contract.
constexpr double kKsSlack = 0.005;
constexpr double kKsFinalThreshold = 0.1;
constexpr double kGapStepSlack = 1.10;
constexpr double kPresumFraction = 0.05;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string num(double v) { return format_double(v); }

// Routing deltas scale with the support so narrow functions are probed below
// half their width, where the oscillation integral enters its linear regime.
Eigen::ArrayXd routing_deltas(const TestFunction& f) {
  double s = 1.0;
  if (f.compact_support()) s = std::min(1.0, std::max(f.support_radius(), 1e-6));
  Eigen::ArrayXd d(5);
  for (int i = 0; i < 5; ++i) d[i] = s / double(2 << i);
  return d;
}

[[noreturn]] void oscillation_abort(const TestFunction& f, const OscillationReport& rep) {
  std::ostringstream os;
  os << "routing check failed for f=" << f.id()
     << ": the oscillation integral does not vanish with the window\n";
  for (Eigen::Index i = 0; i < rep.deltas.size(); ++i)
    os << "  delta=" << num(rep.deltas[i]) << " -> " << num(rep.values[i]) << "\n";
  os << "route this function through the shifted-start variant or smooth it";
  throw PreconditionError(os.str());
}

void require_eq7(const TestFunction& f) {
  if (!f.bounded())
    throw PreconditionError("routing check failed for f=" + f.id() +
                            ": unbounded functions need the shifted-start variant");
  if (!std::isfinite(f.integral_abs()))
    throw PreconditionError("routing check failed for f=" + f.id() + ": |f| is not integrable");
  OscillationReport rep = oscillation_condition(f, routing_deltas(f));
  if (!rep.vanishes) oscillation_abort(f, rep);
}

void require_unit_horizon(const ExperimentConfig& cfg) {
  if (cfg.t_list.maxCoeff() > 1.0 + 1e-9)
    throw PreconditionError(
        "normalized partial-sum paths live on (0, 1]; t_list exceeds that horizon");
}

std::string comparison_mode(const ExperimentConfig& cfg) {
  const bool exact = cfg.spec.alpha() == 2.0 && cfg.model.alpha == 2.0 &&
                     cfg.model.regime == CoefficientModel::Regime::C2;
  return exact ? "exact" : "shape";
}

struct CellGrid {
  int fc, tc, xc;
  int size() const { return fc * tc * xc; }
  int idx(int fi, int ti, int xi) const { return (fi * tc + ti) * xc + xi; }
};

// Shared core of the distributional checks: statistic replicates per n against
// n-free reference replicates, KS/W1 per cell, trend verdict.
ExperimentResult run_distribution_check(const ExperimentConfig& cfg, const std::string& verb,
                                        Eigen::Index start_k, bool record_presum) {
  Timer timer;
  cfg.validate();
  require_unit_horizon(cfg);

  const int R = cfg.replicates;
  const CellGrid grid{int(cfg.f_list.size()), int(cfg.t_list.size()), int(cfg.x_list.size())};
  const int NC = int(cfg.n_list.size());
  const TruncationPolicy policy = effective_policy(cfg);

  ExperimentResult res;
  res.verb = verb;
  res.experiment = experiment_id(cfg);
  res.comparison = comparison_mode(cfg);

  // Reference replicates: target-process paths with the model-implied
  // (alpha, H, skewness). The statistic spikes where the path sits near -x,
  // so the reference local time is read at level -x.
  LfsmSpec ref_spec = reference_spec(cfg);
  ref_spec.validate();
  LfsmSampler sampler(ref_spec);
  std::vector<Eigen::ArrayXd> refs(grid.size(), Eigen::ArrayXd(R));
  parallel_for(R, cfg.threads, [&](int r) {
    RngStream rng = derive_stream(cfg.master_seed, std::uint64_t(r));
    const SamplePath path = sampler.sample(rng);
    for (int fi = 0; fi < grid.fc; ++fi) {
      const double mass = cfg.f_list[fi].integral();
      for (int ti = 0; ti < grid.tc; ++ti)
        for (int xi = 0; xi < grid.xc; ++xi)
          refs[grid.idx(fi, ti, xi)][r] =
              mass * window_estimate(path, cfg.t_list[ti], -cfg.x_list[xi], cfg.estimator.eta);
    }
  });

  // Statistic replicates. Stream ids [R, 2R) are disjoint from the reference
  // block and shared across n (common innovations keep the KS trend smooth).
  std::vector<double> presum_by_n(NC, 0.0);
  std::vector<std::vector<Eigen::ArrayXd>> stats(
      NC, std::vector<Eigen::ArrayXd>(grid.size(), Eigen::ArrayXd(R)));
  for (int ni = 0; ni < NC; ++ni) {
    const Eigen::Index n = cfg.n_list[ni];
    const double beta = beta_n(double(n), cfg.beta_exponent);
    Eigen::ArrayXd presums = Eigen::ArrayXd::Zero(R);
    parallel_for(R, cfg.threads, [&](int r) {
      RngStream rng = derive_stream(cfg.master_seed, std::uint64_t(R + r));
      const SamplePath path = normalized_path(cfg.model, cfg.norms, cfg.spec, n, policy, rng);
      for (int fi = 0; fi < grid.fc; ++fi) {
        const Eigen::MatrixXd vals = functional_statistic_batch(path, cfg.f_list[fi], beta,
                                                                cfg.t_list, cfg.x_list, start_k);
        for (int ti = 0; ti < grid.tc; ++ti)
          for (int xi = 0; xi < grid.xc; ++xi)
            stats[ni][grid.idx(fi, ti, xi)][r] = vals(ti, xi);
        if (record_presum)
          for (int xi = 0; xi < grid.xc; ++xi)
            presums[r] = std::max(presums[r], std::abs(functional_presum(
                                                  path, cfg.f_list[fi], beta, cfg.x_list[xi],
                                                  start_k)));
      }
    });
    presum_by_n[ni] = presums.size() ? presums.maxCoeff() : 0.0;
  }

  // Distances and verdict.
  const bool shape = res.comparison == "shape";
  bool trend_ok = true, final_ok = true;
  for (int fi = 0; fi < grid.fc; ++fi)
    for (int ti = 0; ti < grid.tc; ++ti)
      for (int xi = 0; xi < grid.xc; ++xi) {
        const int c = grid.idx(fi, ti, xi);
        double prev_ks = 0.0;
        for (int ni = 0; ni < NC; ++ni) {
          Eigen::ArrayXd a = stats[ni][c];
          Eigen::ArrayXd b = refs[c];
          if (shape) {
            a = mad_rescaled(a);
            b = mad_rescaled(b);
          }
          const Distances d = distances(a, b);
          const auto& f = cfg.f_list[fi];
          res.rows.push_back(
              {double(cfg.n_list[ni]), f.id(), cfg.t_list[ti], cfg.x_list[xi], "ks", d.ks});
          res.rows.push_back(
              {double(cfg.n_list[ni]), f.id(), cfg.t_list[ti], cfg.x_list[xi], "w1", d.w1});
          res.samples.push_back(
              {cfg.n_list[ni], f.id(), cfg.t_list[ti], cfg.x_list[xi], stats[ni][c], refs[c]});
          if (ni > 0 && d.ks > prev_ks + kKsSlack) trend_ok = false;
          if (ni == NC - 1 && d.ks > kKsFinalThreshold) final_ok = false;
          prev_ks = d.ks;
        }
      }
  res.verdict = trend_ok && final_ok;
  res.notes.push_back("comparison=" + res.comparison +
                      (shape ? " (median/MAD rescaled: limit scale unpinned)" : ""));
  res.notes.push_back("reference level convention: statistic argument (v + x) peaks at level -x");
  res.notes.push_back("streams: reference [0," + std::to_string(R) + "), statistic [" +
                      std::to_string(R) + "," + std::to_string(2 * R) + ") shared across n");
  res.notes.push_back(std::string("ks trend ") + (trend_ok ? "non-increasing" : "violated") +
                      " (slack " + num(kKsSlack) + "), final ks " +
                      (final_ok ? "<=" : ">") + " " + num(kKsFinalThreshold));

  if (record_presum) {
    for (int ni = 0; ni < NC; ++ni)
      res.rows.push_back({double(cfg.n_list[ni]), "-", 0.0, 0.0, "presum_max", presum_by_n[ni]});
    res.presum_max = presum_by_n[NC - 1];
    double scale = 0.0;
    for (int c = 0; c < grid.size(); ++c) scale = std::max(scale, stats[NC - 1][c].abs().mean());
    const bool negligible = res.presum_max <= kPresumFraction * std::max(scale, 1e-9);
    res.notes.push_back("discarded head at largest n: " + num(res.presum_max) +
                        (negligible ? " (negligible)" : " (NOT negligible)"));
    res.verdict = res.verdict && negligible;
  }
  res.elapsed_seconds = timer.seconds();
  return res;
}

SamplePath subsample(const SamplePath& p, Eigen::Index stride) {
  SamplePath s;
  s.dt = p.dt * double(stride);
  s.model_id = p.model_id;
  s.stream_id = p.stream_id;
  const Eigen::Index n = p.size() / stride;
  s.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) s.values[k] = p.values[(k + 1) * stride - 1];
  return s;
}

}  // namespace

LfsmSpec reference_spec(const ExperimentConfig& cfg) {
  LfsmSpec s = cfg.lfsm;
  s.alpha = cfg.spec.alpha();
  s.H = cfg.model.hurst();
  s.a = 1.0;
  s.beta = s.alpha < 2.0 ? cfg.spec.beta() : 0.0;
  return s;
}

TruncationPolicy effective_policy(const ExperimentConfig& cfg) {
  const bool auto_mode =
      cfg.truncation.mode == TruncationPolicy::Mode::Truncate && cfg.truncation.m == 0;
  if (auto_mode && cfg.model.regime == CoefficientModel::Regime::C2) {
    const Eigen::Index taps = cfg.model.coeffs.size();
    return taps <= 1 ? TruncationPolicy::exact_finite() : TruncationPolicy::truncate(taps - 1);
  }
  return cfg.truncation;
}

ExperimentResult run_theorem2(const ExperimentConfig& cfg) {
  for (const TestFunction& f : cfg.f_list) require_eq7(f);
  return run_distribution_check(cfg, "t2", 1, false);
}

ExperimentResult run_theorem3(const ExperimentConfig& cfg, int variant) {
  if (variant != 1 && variant != 2)
    throw std::invalid_argument("run_theorem3: variant must be 1 or 2");
  if (variant == 1) {
    if (!cfg.spec.abs_continuous)
      throw PreconditionError("variant 1 requires an absolutely continuous innovation law");
    for (const TestFunction& f : cfg.f_list) {
      if (!f.bounded())
        throw PreconditionError("routing check failed for f=" + f.id() +
                                ": variant 1 requires bounded f");
      if (!std::isfinite(f.integral_abs()))
        throw PreconditionError("routing check failed for f=" + f.id() +
                                ": |f| is not integrable");
    }
    return run_distribution_check(cfg, "t3i", 1, false);
  }
  if (!(cfg.spec.char_integrable_power > 0.0))
    throw PreconditionError("variant 2 requires a declared char_integrable_power");
  for (const TestFunction& f : cfg.f_list)
    if (!std::isfinite(f.integral_abs()) || !std::isfinite(f.integral_sq()))
      throw PreconditionError("routing check failed for f=" + f.id() +
                              ": variant 2 requires f and f^2 integrable");
  const auto n0 = Eigen::Index(std::ceil(cfg.spec.char_integrable_power));
  const double k1 = std::floor(double(cfg.n_list.front()) * cfg.t_list[0] + 1e-9);
  if (k1 < double(n0))
    throw PreconditionError("first (n, t) pair leaves no terms after the shifted start n0=" +
                            std::to_string(n0));
  ExperimentResult res = run_distribution_check(cfg, "t3ii", n0, true);
  res.notes.push_back("sum starts at n0=" + std::to_string(n0) +
                      " (convolution power that bounds the summand density)");
  return res;
}

ExperimentResult run_theorem4_5(const ExperimentConfig& cfg) {
  Timer timer;
  cfg.validate();
  for (const TestFunction& f : cfg.f_list)
    if (!std::isfinite(f.integral_abs()) || !std::isfinite(f.integral_sq()))
      throw PreconditionError("L2 decay run requires f and f^2 integrable; got f=" + f.id());

  const LfsmSpec master = cfg.lfsm;
  master.validate();
  const Eigen::Index N = master.grid_n;
  const int R = cfg.replicates;
  const int NC = int(cfg.n_list.size());
  const CellGrid grid{int(cfg.f_list.size()), int(cfg.t_list.size()), int(cfg.x_list.size())};

  std::vector<Eigen::Index> strides(NC);
  for (int ni = 0; ni < NC; ++ni) {
    const double exact = double(N) / (double(cfg.n_list[ni]) * master.t_max);
    const auto stride = Eigen::Index(std::llround(exact));
    if (stride < 1 || std::abs(double(stride) - exact) > 1e-9)
      throw PreconditionError("grid_n must be an integer multiple of n * t_max for every n; n=" +
                              std::to_string(cfg.n_list[ni]));
    strides[ni] = stride;
  }

  LfsmSampler sampler(master);
  // Slot layout: [cell][ni] gap samples, filled per replicate.
  std::vector<std::vector<Eigen::ArrayXd>> d4(grid.size()), d5(grid.size());
  for (int c = 0; c < grid.size(); ++c) {
    d4[c].assign(NC, Eigen::ArrayXd(R));
    d5[c].assign(NC, Eigen::ArrayXd(R));
  }
  parallel_for(R, cfg.threads, [&](int r) {
    RngStream rng = derive_stream(cfg.master_seed, std::uint64_t(r));
    const SamplePath path = sampler.sample(rng);
    std::vector<SamplePath> subs(NC);
    for (int ni = 0; ni < NC; ++ni) subs[ni] = subsample(path, strides[ni]);
    for (int ti = 0; ti < grid.tc; ++ti)
      for (int xi = 0; xi < grid.xc; ++xi) {
        const double t = cfg.t_list[ti], x = cfg.x_list[xi];
        const double lhat = window_estimate(path, t, x, cfg.estimator.eta);
        for (int fi = 0; fi < grid.fc; ++fi) {
          const TestFunction& f = cfg.f_list[fi];
          const double base = f.integral() * lhat;
          const int c = grid.idx(fi, ti, xi);
          for (int ni = 0; ni < NC; ++ni) {
            const double n = double(cfg.n_list[ni]);
            const double g4 =
                lfsm_functional_discrete(subs[ni], f, beta_n(n, cfg.beta_exponent), t, x) - base;
            const double g5 = lfsm_functional_scaled(path, f, n, master.H, t, x) - base;
            d4[c][ni][r] = g4 * g4;
            d5[c][ni][r] = g5 * g5;
          }
        }
      }
  });

  ExperimentResult res;
  res.verb = "t4_5";
  res.experiment = experiment_id(cfg);
  res.comparison = "-";
  auto column_verdict = [&](std::vector<Eigen::ArrayXd>& col) {
    bool ok = true;
    double prev = 0.0, first = 0.0, last = 0.0;
    for (int ni = 0; ni < NC; ++ni) {
      const double v = col[ni].mean();
      if (ni == 0) first = v;
      if (ni > 0 && v > prev * kGapStepSlack + 1e-15) ok = false;
      prev = v;
      last = v;
    }
    return ok && (NC < 2 || last < first || (first == 0.0 && last == 0.0));
  };
  for (int fi = 0; fi < grid.fc; ++fi)
    for (int ti = 0; ti < grid.tc; ++ti)
      for (int xi = 0; xi < grid.xc; ++xi) {
        const int c = grid.idx(fi, ti, xi);
        const auto& f = cfg.f_list[fi];
        for (int ni = 0; ni < NC; ++ni) {
          res.rows.push_back({double(cfg.n_list[ni]), f.id(), cfg.t_list[ti], cfg.x_list[xi],
                              "t4_gap_sq", d4[c][ni].mean()});
          res.rows.push_back({double(cfg.n_list[ni]), f.id(), cfg.t_list[ti], cfg.x_list[xi],
                              "t5_gap_sq", d5[c][ni].mean()});
        }
        if (!column_verdict(d4[c])) res.verdict_t4 = false;
        if (!column_verdict(d5[c])) res.verdict_t5 = false;
      }
  res.verdict = res.verdict_t4 && res.verdict_t5;
  res.notes.push_back("one master path per replicate (streams [0," + std::to_string(R) +
                      ")), subsampled per n; reference window at level +x, eta=" +
                      num(cfg.estimator.eta));
  res.notes.push_back(std::string("discrete columns ") +
                      (res.verdict_t4 ? "decay" : "do not decay") + ", rescaled columns " +
                      (res.verdict_t5 ? "decay" : "do not decay") + " (step slack x" +
                      num(kGapStepSlack) + ")");
  res.elapsed_seconds = timer.seconds();
  return res;
}

ExperimentResult run_prop6_gap(const ExperimentConfig& cfg) {
  Timer timer;
  cfg.validate();
  require_unit_horizon(cfg);
  for (const TestFunction& f : cfg.f_list) require_eq7(f);

  const int R = cfg.replicates;
  const int NC = int(cfg.n_list.size());
  const int EC = int(cfg.estimator.eps_list.size());
  const CellGrid grid{int(cfg.f_list.size()), int(cfg.t_list.size()), int(cfg.x_list.size())};
  const TruncationPolicy policy = effective_policy(cfg);
  const GaussHermite gh = GaussHermite::compute(cfg.estimator.gh_n);
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);

  ExperimentResult res;
  res.verb = "p6";
  res.experiment = experiment_id(cfg);
  res.comparison = "-";

  // gap_sq[cell][ei][ni] over replicates
  std::vector<std::vector<std::vector<Eigen::ArrayXd>>> gap(
      grid.size(), std::vector<std::vector<Eigen::ArrayXd>>(
                       EC, std::vector<Eigen::ArrayXd>(NC, Eigen::ArrayXd(R))));

  for (int ni = 0; ni < NC; ++ni) {
    const Eigen::Index n = cfg.n_list[ni];
    const double beta = beta_n(double(n), cfg.beta_exponent);
    parallel_for(R, cfg.threads, [&](int r) {
      RngStream rng = derive_stream(cfg.master_seed, std::uint64_t(r));
      const SamplePath path = normalized_path(cfg.model, cfg.norms, cfg.spec, n, policy, rng);
      for (int fi = 0; fi < grid.fc; ++fi)
        for (int xi = 0; xi < grid.xc; ++xi) {
          const double x = cfg.x_list[xi];
          // One pass per (f, x): evaluate the statistic at x and at every
          // quadrature shift x + eps*sqrt(2)*node simultaneously.
          std::vector<double> shift_vals{x};
          for (int ei = 0; ei < EC; ++ei)
            for (Eigen::Index q = 0; q < gh.nodes.size(); ++q)
              shift_vals.push_back(x + cfg.estimator.eps_list[ei] * std::sqrt(2.0) * gh.nodes[q]);
          std::vector<double> uniq = shift_vals;
          std::sort(uniq.begin(), uniq.end());
          uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
          Eigen::ArrayXd x_grid = Eigen::Map<Eigen::ArrayXd>(uniq.data(), Eigen::Index(uniq.size()));
          const Eigen::MatrixXd vals =
              functional_statistic_batch(path, cfg.f_list[fi], beta, cfg.t_list, x_grid, 1);
          auto col = [&](double v) {
            return Eigen::Index(std::lower_bound(uniq.begin(), uniq.end(), v) - uniq.begin());
          };
          for (int ti = 0; ti < grid.tc; ++ti) {
            const double ln = vals(ti, col(x));
            std::size_t s = 1;
            for (int ei = 0; ei < EC; ++ei) {
              CompensatedSum acc;
              for (Eigen::Index q = 0; q < gh.nodes.size(); ++q)
                acc.add(gh.weights[q] * vals(ti, col(shift_vals[s++])));
              const double lne = inv_sqrt_pi * acc.value();
              const double g = ln - lne;
              gap[grid.idx(fi, ti, xi)][ei][ni][r] = g * g;
            }
          }
        }
    });
  }

  // Verdict follows the double-limit structure: the n-limit exists per eps
  // (the columns approach a plateau), and the plateaus must shrink with eps.
  // Column monotonicity in n is reported but not part of the verdict; for
  // fixed eps the gap typically *rises* toward its plateau once the
  // smoothing width clears the statistic's own window 1/beta_n.
  bool columns_ok = true, eps_ok = true;
  for (int fi = 0; fi < grid.fc; ++fi)
    for (int ti = 0; ti < grid.tc; ++ti)
      for (int xi = 0; xi < grid.xc; ++xi) {
        const int c = grid.idx(fi, ti, xi);
        const auto& f = cfg.f_list[fi];
        for (int ei = 0; ei < EC; ++ei) {
          const double eps = cfg.estimator.eps_list[ei];
          double prev = 0.0;
          for (int ni = 0; ni < NC; ++ni) {
            const double v = gap[c][ei][ni].mean();
            res.gaps.push_back(
                {cfg.n_list[ni], f.id(), cfg.t_list[ti], cfg.x_list[xi], eps, v});
            res.rows.push_back({double(cfg.n_list[ni]), f.id(), cfg.t_list[ti], cfg.x_list[xi],
                                "gap_sq[eps=" + num(eps) + "]", v});
            if (ni > 0 && v > prev * kGapStepSlack + 1e-15) columns_ok = false;
            prev = v;
          }
          // Plateau (largest-n) values strictly decreasing in eps.
          if (ei > 0 && !(gap[c][ei][NC - 1].mean() < gap[c][ei - 1][NC - 1].mean()))
            eps_ok = false;
        }
      }
  res.verdict = eps_ok;
  res.notes.push_back("smoothing integral: " + std::to_string(cfg.estimator.gh_n) +
                      "-node quadrature at the pre-scaling level (shift x + eps z)");
  res.notes.push_back(std::string("large-n plateau ") +
                      (eps_ok ? "decreases" : "does not decrease") +
                      " from widest to finest eps; columns over n " +
                      (columns_ok ? "non-increasing" : "not monotone") + " (informational)");
  res.notes.push_back("streams: statistic [0," + std::to_string(R) + ") shared across n");
  res.elapsed_seconds = timer.seconds();
  return res;
}

std::string write_result(const ExperimentConfig& cfg, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const std::string dir = cfg.out_dir + "/" + result.experiment + "-" + result.verb;
  fs::create_directories(dir + "/tables");

  {
    std::ofstream out(dir + "/config.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + dir + "/config.json");
    out << config_to_json(cfg);
  }
  const std::string provenance = "exp=" + result.experiment + " verb=" + result.verb +
                                 " seed=" + std::to_string(cfg.master_seed) +
                                 " replicates=" + std::to_string(cfg.replicates) +
                                 " comparison=" + result.comparison;
  write_result_csv(dir + "/tables/" + result.verb + ".csv", provenance, result.rows);

  nlohmann::ordered_json s;
  s["verb"] = result.verb;
  s["experiment"] = result.experiment;
  s["comparison"] = result.comparison;
  s["verdict"] = result.verdict;
  if (result.verb == "t4_5") {
    s["verdict_t4"] = result.verdict_t4;
    s["verdict_t5"] = result.verdict_t5;
  }
  if (result.verb == "t3ii") s["presum_max"] = result.presum_max;
  s["master_seed"] = cfg.master_seed;
  s["replicates"] = cfg.replicates;
  s["threads"] = cfg.threads;
  s["notes"] = result.notes;
  {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const ResultRow& r : result.rows) {
      nlohmann::ordered_json o;
      o["n"] = r.n;
      o["f"] = r.f_id;
      o["t"] = r.t;
      o["x"] = r.x;
      o["metric"] = r.metric;
      o["value"] = r.value;
      rows.push_back(std::move(o));
    }
    s["rows"] = std::move(rows);
  }
  std::ofstream out(dir + "/summary.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + dir + "/summary.json");
  out << s.dump(2) << "\n";
  return dir;
}

}  // namespace ltlab
