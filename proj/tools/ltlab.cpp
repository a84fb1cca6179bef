#include "ltlab/config.hpp"
#include "ltlab/diagnostics.hpp"
#include "ltlab/harness.hpp"
#include "ltlab/io.hpp"
#include "ltlab/lfsm_sim.hpp"
#include "ltlab/local_time.hpp"
#include "ltlab/stats.hpp"
#include "ltlab/util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace {

using namespace ltlab;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitVerdictFail = 1;
constexpr int kExitUsage = 2;
constexpr double kTailFitR2 = 0.99;

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "experiment config (JSON)");
  cmd->add_option("--seed", o.seed, "override master_seed")->each([&o](const std::string&) {
    o.seed_set = true;
  });
  cmd->add_option("--threads", o.threads, "override worker count");
  cmd->add_option("--out", o.out, "override output directory");
}

ExperimentConfig load_with_overrides(const CommonOpts& o) {
  ExperimentConfig cfg = o.config_path.empty() ? default_config() : load_config(o.config_path);
  if (o.seed_set) cfg.master_seed = o.seed;
  if (o.threads > 0) cfg.threads = o.threads;
  if (!o.out.empty()) cfg.out_dir = o.out;
  cfg.validate();
  return cfg;
}

std::string schema_footer() {
  std::ostringstream os;
  os << "Config keys:\n";
  for (const SchemaEntry& e : config_schema())
    os << "  " << e.key << " (" << e.type << "): " << e.doc << "\n";
  return os.str();
}

int cmd_simulate(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_with_overrides(opts);
  const TruncationPolicy policy = effective_policy(cfg);
  const std::string dir = cfg.out_dir + "/" + experiment_id(cfg) + "-simulate";
  fs::create_directories(dir + "/paths");
  {
    std::ofstream out(dir + "/config.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + dir + "/config.json");
    out << config_to_json(cfg);
  }
  // One normalized partial-sum path per n, streams indexed by position.
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    const Eigen::Index n = cfg.n_list[i];
    RngStream rng = derive_stream(cfg.master_seed, std::uint64_t(i));
    const SamplePath path = normalized_path(cfg.model, cfg.norms, cfg.spec, n, policy, rng);
    const std::string stem = dir + "/paths/path_n" + std::to_string(n);
    write_path_csv(stem + ".csv", path);
    write_path_frame(stem + ".ltpf", path);
  }
  std::cout << "wrote " << cfg.n_list.size() << " path(s) under " << dir << "/paths\n";
  return kExitPass;
}

int cmd_estimate(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_with_overrides(opts);
  const int R = cfg.replicates;
  cfg.lfsm.validate();
  LfsmSampler sampler(cfg.lfsm);

  const int TC = int(cfg.t_list.size()), XC = int(cfg.x_list.size());
  const int EC = int(cfg.estimator.eps_list.size());
  const double occ_a = cfg.x_list.minCoeff() - 0.5, occ_b = cfg.x_list.maxCoeff() + 0.5;
  // Per-replicate slots, reduced in fixed order afterwards.
  Eigen::MatrixXd win(R, TC * XC), chr(R, TC * XC);
  std::vector<Eigen::MatrixXd> smo(EC, Eigen::MatrixXd(R, TC * XC));
  Eigen::MatrixXd occ(R, TC);
  Eigen::ArrayXi unstable = Eigen::ArrayXi::Zero(R);
  parallel_for(R, cfg.threads, [&](int r) {
    RngStream rng = derive_stream(cfg.master_seed, std::uint64_t(r));
    const SamplePath path = sampler.sample(rng);
    for (int ti = 0; ti < TC; ++ti) {
      const double t = cfg.t_list[ti];
      occ(r, ti) = occupation_identity_check(path, t, occ_a, occ_b, cfg.estimator.eta,
                                             cfg.estimator.x_step);
      for (int xi = 0; xi < XC; ++xi) {
        const double x = cfg.x_list[xi];
        const int c = ti * XC + xi;
        win(r, c) = window_estimate(path, t, x, cfg.estimator.eta);
        for (int ei = 0; ei < EC; ++ei)
          smo[ei](r, c) = smoothed_estimate(path, t, x, cfg.estimator.eps_list[ei]);
        const CharRepResult cr =
            charrep_estimate(path, t, x, cfg.estimator.u_max, cfg.estimator.quad_n);
        chr(r, c) = cr.value;
        if (cr.unstable) unstable[r] = 1;
      }
    }
  });

  ExperimentResult res;
  res.verb = "estimate";
  res.experiment = experiment_id(cfg);
  res.comparison = "-";
  for (int ti = 0; ti < TC; ++ti) {
    for (int xi = 0; xi < XC; ++xi) {
      const int c = ti * XC + xi;
      res.rows.push_back({double(cfg.lfsm.grid_n), "-", cfg.t_list[ti], cfg.x_list[xi],
                          "window_mean[eta=" + format_double(cfg.estimator.eta) + "]",
                          win.col(c).mean()});
      for (int ei = 0; ei < EC; ++ei)
        res.rows.push_back(
            {double(cfg.lfsm.grid_n), "-", cfg.t_list[ti], cfg.x_list[xi],
             "smoothed_mean[eps=" + format_double(cfg.estimator.eps_list[ei]) + "]",
             smo[ei].col(c).mean()});
      res.rows.push_back({double(cfg.lfsm.grid_n), "-", cfg.t_list[ti], cfg.x_list[xi],
                          "charrep_mean[u_max=" + format_double(cfg.estimator.u_max) + "]",
                          chr.col(c).mean()});
    }
    res.rows.push_back({double(cfg.lfsm.grid_n), "-", cfg.t_list[ti], 0.0,
                        "occupation_residual_median", median(occ.col(ti).array())});
  }
  const double unstable_frac = double(unstable.sum()) / double(R);
  res.rows.push_back({double(cfg.lfsm.grid_n), "-", 0.0, 0.0, "charrep_unstable_fraction",
                      unstable_frac});
  res.verdict = true;
  res.notes.push_back("process " + cfg.lfsm.id() + ", " + std::to_string(R) +
                      " replicate paths, streams [0," + std::to_string(R) + ")");
  res.notes.push_back("occupation residual over A=[" + format_double(occ_a) + "," +
                      format_double(occ_b) + "]");
  if (unstable_frac > 0.1) {
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.1f", 100.0 * unstable_frac);
    res.notes.push_back(std::string("inversion estimator flagged unstable on ") + pct +
                        "% of paths");
  }
  const std::string dir = write_result(cfg, res);
  std::cout << "estimate tables under " << dir << "\n";
  return kExitPass;
}

ExperimentResult diag_lemma12(const ExperimentConfig& cfg) {
  const CfWindowBoundReport rep =
      cf_window_bound_check(cfg.model, cfg.norms, cfg.spec, cfg.diag.j_list, cfg.diag.lambda,
                            cfg.diag.d, cfg.diag.c, cfg.diag.weights);
  ExperimentResult res;
  res.verb = "lemma12";
  res.experiment = experiment_id(cfg);
  res.comparison = "-";
  for (Eigen::Index i = 0; i < rep.j_list.size(); ++i)
    res.rows.push_back({rep.j_list[i], "-", 0.0, 0.0, "log_ratio_max", rep.log_ratio_max[i]});
  res.rows.push_back({0.0, "-", 0.0, 0.0, "spread", rep.spread});
  res.verdict = rep.uniformly_bounded;
  res.notes.push_back("window [0, lambda b_j], lambda=" + format_double(cfg.diag.lambda) +
                      ", weight exp(" + format_double(cfg.diag.d) + " u^" +
                      format_double(cfg.diag.c) + ")");
  res.notes.push_back(std::string("per-j maxima ") +
                      (rep.uniformly_bounded ? "within" : "exceed") + " a factor 2 (spread " +
                      format_double(rep.spread) + ")");
  return res;
}

ExperimentResult diag_lemma13(const ExperimentConfig& cfg) {
  const CfTailDecayReport rep = cf_tail_decay(cfg.model, cfg.norms, cfg.spec, cfg.diag.j_list,
                                              cfg.diag.d, cfg.diag.cap, cfg.diag.weights);
  ExperimentResult res;
  res.verb = "lemma13";
  res.experiment = experiment_id(cfg);
  res.comparison = "-";
  for (Eigen::Index i = 0; i < rep.j_list.size(); ++i)
    res.rows.push_back({rep.j_list[i], "-", 0.0, 0.0, "log_sup", rep.log_sup[i]});
  res.rows.push_back({0.0, "-", 0.0, 0.0, "rho", rep.rho});
  res.rows.push_back({0.0, "-", 0.0, 0.0, "r_squared", rep.r_squared});
  res.verdict = rep.decays && rep.r_squared > kTailFitR2;
  res.notes.push_back("sup |cf| over [d b_j, cap d b_j], d=" + format_double(cfg.diag.d) +
                      ", cap=" + format_double(cfg.diag.cap));
  res.notes.push_back("fit rho=" + format_double(rep.rho) + ", r2=" +
                      format_double(rep.r_squared) + " (need rho<1, r2>" +
                      format_double(kTailFitR2) + ")");
  return res;
}

ExperimentResult diag_prop1(const ExperimentConfig& cfg) {
  const MarginalCheckReport rep =
      marginal_convergence_check(cfg.model, cfg.norms, cfg.spec, cfg.n_list, cfg.t_list[0],
                                 cfg.replicates, cfg.master_seed, cfg.threads);
  ExperimentResult res;
  res.verb = "prop1";
  res.experiment = experiment_id(cfg);
  res.comparison = rep.exact_reference ? "exact" : "shape";
  for (Eigen::Index i = 0; i < rep.n_list.size(); ++i)
    res.rows.push_back({rep.n_list[i], "-", cfg.t_list[0], 0.0, "ks", rep.ks[i]});
  res.verdict = rep.decreasing;
  res.notes.push_back("marginal at t=" + format_double(cfg.t_list[0]) + ", " +
                      (rep.exact_reference ? "closed-form reference CDF"
                                           : "simulated reference, median/MAD rescaled"));
  return res;
}

int cmd_verify(const CommonOpts& opts, const std::string& theorem) {
  static const std::set<std::string> known{"t2",      "t3i",     "t3ii", "t4", "t5",
                                           "p6",      "lemma12", "lemma13", "prop1"};
  if (!known.count(theorem)) {
    std::cerr << "unknown verification target '" << theorem << "'\n";
    return kExitUsage;
  }
  const ExperimentConfig cfg = load_with_overrides(opts);
  ExperimentResult res;
  bool pass = false;
  if (theorem == "t2") {
    res = run_theorem2(cfg);
    pass = res.verdict;
  } else if (theorem == "t3i") {
    res = run_theorem3(cfg, 1);
    pass = res.verdict;
  } else if (theorem == "t3ii") {
    res = run_theorem3(cfg, 2);
    pass = res.verdict;
  } else if (theorem == "t4" || theorem == "t5") {
    res = run_theorem4_5(cfg);
    pass = theorem == "t4" ? res.verdict_t4 : res.verdict_t5;
  } else if (theorem == "p6") {
    res = run_prop6_gap(cfg);
    pass = res.verdict;
  } else if (theorem == "lemma12") {
    res = diag_lemma12(cfg);
    pass = res.verdict;
  } else if (theorem == "lemma13") {
    res = diag_lemma13(cfg);
    pass = res.verdict;
  } else {
    res = diag_prop1(cfg);
    pass = res.verdict;
  }
  const std::string dir = write_result(cfg, res);
  std::cout << theorem << ": " << (pass ? "PASS" : "FAIL") << "\n";
  for (const std::string& n : res.notes) std::cout << "  " << n << "\n";
  std::cout << "  results: " << dir << "\n";
  if (res.elapsed_seconds > 0.0)
    std::cout << "  elapsed: " << format_double(res.elapsed_seconds) << " s\n";
  return pass ? kExitPass : kExitVerdictFail;
}

int cmd_report(const std::string& results_dir) {
  std::map<std::string, std::vector<std::pair<std::string, nlohmann::json>>> by_verb;
  std::vector<std::string> dirs;
  if (fs::is_directory(results_dir))
    for (const auto& e : fs::directory_iterator(results_dir))
      if (e.is_directory() && fs::exists(e.path() / "summary.json"))
        dirs.push_back(e.path().string());
  std::sort(dirs.begin(), dirs.end());
  for (const std::string& d : dirs) {
    std::ifstream in(d + "/summary.json", std::ios::binary);
    nlohmann::json s = nlohmann::json::parse(in);
    by_verb[s.at("verb").get<std::string>()].emplace_back(d, std::move(s));
  }
  if (by_verb.empty()) {
    std::cerr << "no results under " << results_dir << "\n";
    return kExitUsage;
  }

  const std::string rep_dir = results_dir + "/report";
  fs::create_directories(rep_dir);
  std::ofstream md(rep_dir + "/report.md", std::ios::binary);
  if (!md) throw std::runtime_error("cannot write " + rep_dir + "/report.md");
  md << "# Verification report\n";
  for (const auto& [verb, runs] : by_verb) {
    md << "\n## " << verb << "\n\n";
    std::ofstream csv(rep_dir + "/" + verb + "_series.csv", std::ios::binary);
    csv << "experiment,f,t,x,metric,n,value\n";
    for (const auto& [dir, s] : runs) {
      md << "- `" << s.at("experiment").get<std::string>() << "` — "
         << (s.at("verdict").get<bool>() ? "PASS" : "FAIL") << " (comparison "
         << s.at("comparison").get<std::string>() << ", replicates " << s.at("replicates")
         << ")\n";
      for (const auto& note : s.at("notes")) md << "  - " << note.get<std::string>() << "\n";
      // Convergence series: rows sorted by (f, t, x, metric, n) for plotting.
      auto rows = s.at("rows");
      std::vector<nlohmann::json> sorted(rows.begin(), rows.end());
      std::sort(sorted.begin(), sorted.end(), [](const nlohmann::json& a, const nlohmann::json& b) {
        auto key = [](const nlohmann::json& r) {
          return std::make_tuple(r.at("f").get<std::string>(), r.at("t").get<double>(),
                                 r.at("x").get<double>(), r.at("metric").get<std::string>(),
                                 r.at("n").get<double>());
        };
        return key(a) < key(b);
      });
      for (const auto& r : sorted)
        csv << s.at("experiment").get<std::string>() << "," << r.at("f").get<std::string>() << ","
            << format_double(r.at("t").get<double>()) << ","
            << format_double(r.at("x").get<double>()) << "," << r.at("metric").get<std::string>()
            << "," << format_double(r.at("n").get<double>()) << ","
            << format_double(r.at("value").get<double>()) << "\n";
    }
    md << "\nSeries: `" << verb << "_series.csv`\n";
  }
  std::cout << "report under " << rep_dir << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation lab for heavy-tailed partial-sum functionals and local times"};
  app.require_subcommand(1);
  app.footer(schema_footer());

  CommonOpts sim_opts, est_opts, ver_opts;
  CLI::App* sim = app.add_subcommand("simulate", "write sample paths (CSV + binary frames)");
  add_common(sim, sim_opts);
  CLI::App* est = app.add_subcommand("estimate", "run the local-time estimators on target paths");
  add_common(est, est_opts);
  CLI::App* ver = app.add_subcommand(
      "verify", "run a convergence verification: t2|t3i|t3ii|t4|t5|p6|lemma12|lemma13|prop1");
  std::string theorem;
  ver->add_option("target", theorem, "what to verify")->required();
  add_common(ver, ver_opts);
  CLI::App* rep = app.add_subcommand("report", "consolidate result directories into a report");
  std::string results_dir = "results";
  rep->add_option("dir", results_dir, "results root (default: results)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts);
    if (est->parsed()) return cmd_estimate(est_opts);
    if (ver->parsed()) return cmd_verify(ver_opts, theorem);
    return cmd_report(results_dir);
  } catch (const PreconditionError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
