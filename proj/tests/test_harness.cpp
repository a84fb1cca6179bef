#include "ltlab/harness.hpp"
#include "ltlab/quadrature.hpp"
#include "ltlab/stats.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace ltlab;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg = default_config();  // unit-coefficient model, gaussian innovations
  cfg.n_list = {16, 64};
  cfg.replicates = 8;
  cfg.t_list = (Eigen::ArrayXd(1) << 1.0).finished();
  cfg.x_list = (Eigen::ArrayXd(1) << 0.0).finished();
  cfg.lfsm.grid_n = 256;
  cfg.lfsm.t_max = 1.0;
  return cfg;
}

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

template <class Fn>
std::string precondition_message(Fn&& fn) {
  try {
    fn();
  } catch (const PreconditionError& e) {
    return e.what();
  }
  return {};
}

TestFunction comb_function() {
  // many thin teeth: the oscillation integral plateaus instead of vanishing
  const int teeth = 64;
  Eigen::ArrayXd edges(2 * teeth);
  for (int i = 0; i < teeth; ++i) {
    edges[2 * i] = double(i) * 0.03;
    edges[2 * i + 1] = double(i) * 0.03 + 0.004;
  }
  return TestFunction::indicator_union(edges);
}

}  // namespace

TEST_CASE("sample distances: hand values") {
  Eigen::ArrayXd a(2), b(2);
  a << 0.0, 1.0;
  b << 0.0, 2.0;
  const Distances d = distances(a, b);
  CHECK(d.ks == doctest::Approx(0.5));
  CHECK(d.w1 == doctest::Approx(0.5));

  const Distances same = distances(a, a);
  CHECK(same.ks == 0.0);
  CHECK(same.w1 == 0.0);

  Eigen::ArrayXd s(2);
  s << 0.25, 0.75;
  CHECK(ks_one_sample(s, [](double v) { return std::min(std::max(v, 0.0), 1.0); }) ==
        doctest::Approx(0.25));
}

TEST_CASE("smoothing quadrature equals the Gaussian convolution closed form") {
  const GaussHermite gh = GaussHermite::compute(21);
  REQUIRE(gh.nodes.size() == 21);
  CHECK(gh.weights.sum() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  for (Eigen::Index i = 0; i < gh.nodes.size(); ++i)
    CHECK(gh.nodes[i] == doctest::Approx(-gh.nodes[gh.nodes.size() - 1 - i]).epsilon(1e-12));

  // degree-4 moment is inside the exactness range
  CHECK(gh.gaussian_expectation([](double z) { return z * z * z * z; }) ==
        doctest::Approx(3.0).epsilon(1e-12));

  // E e^{-(x + eps Z)^2/2} = (1 + eps^2)^{-1/2} e^{-x^2/(2(1+eps^2))}
  const double eps = 0.25, x = 0.3;
  const double got = gh.gaussian_expectation(
      [&](double z) { return std::exp(-0.5 * (x + eps * z) * (x + eps * z)); });
  const double want =
      std::exp(-x * x / (2.0 * (1.0 + eps * eps))) / std::sqrt(1.0 + eps * eps);
  CHECK(got == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("reference spec carries the model-implied limit parameters") {
  ExperimentConfig cfg = tiny_config();
  cfg.model = CoefficientModel::c1(0.7, 1.5, SlowlyVarying::constant(1.0));
  cfg.spec = InnovationSpec::shifted_pareto(1.5, 0.8);
  cfg.norms = NormSchedule{1.5, SlowlyVarying::constant(1.0)};
  cfg.lfsm.grid_n = 512;

  const LfsmSpec ref = reference_spec(cfg);
  CHECK(ref.alpha == 1.5);
  CHECK(ref.H == 0.7);
  CHECK(ref.a == 1.0);
  CHECK(ref.beta == doctest::Approx(0.6));  // 2 * tail_balance - 1
  CHECK(ref.grid_n == 512);

  const LfsmSpec gauss = reference_spec(tiny_config());
  CHECK(gauss.alpha == 2.0);
  CHECK(gauss.beta == 0.0);
  CHECK(gauss.H == 0.5);
}

TEST_CASE("effective policy: auto mode drops to the finite memory under C2") {
  ExperimentConfig cfg = tiny_config();  // single unit coefficient, auto truncation
  CHECK(effective_policy(cfg).mode == TruncationPolicy::Mode::ExactFinite);

  cfg.model = CoefficientModel::c2((Eigen::ArrayXd(2) << 1.0, 0.5).finished(), 2.0, 1.0);
  const TruncationPolicy two_tap = effective_policy(cfg);
  CHECK(two_tap.mode == TruncationPolicy::Mode::Truncate);
  CHECK(two_tap.m == 1);

  // explicit policies pass through untouched
  cfg.truncation = TruncationPolicy::truncate(100);
  CHECK(effective_policy(cfg).m == 100);

  ExperimentConfig c1 = tiny_config();
  c1.model = CoefficientModel::c1(0.7, 2.0, SlowlyVarying::constant(1.0));
  const TruncationPolicy kept = effective_policy(c1);
  CHECK(kept.mode == TruncationPolicy::Mode::Truncate);
  CHECK(kept.m == 0);
}

TEST_CASE("distribution check on the zero function: all distances vanish") {
  ExperimentConfig cfg = tiny_config();
  cfg.f_list = {TestFunction::zero()};

  const ExperimentResult res = run_theorem2(cfg);
  CHECK(res.verb == "t2");
  CHECK(res.comparison == "exact");
  CHECK(res.verdict);
  CHECK(res.samples.size() == 2);  // one cell, two n
  CHECK(res.rows.size() == 4);     // ks + w1 per n
  for (const ResultRow& r : res.rows) CHECK(r.value == 0.0);
  for (const SampleCell& c : res.samples) {
    CHECK(c.statistic.size() == cfg.replicates);
    CHECK(c.reference.size() == cfg.replicates);
    CHECK((c.statistic == 0.0).all());
    CHECK((c.reference == 0.0).all());
  }
  CHECK(res.experiment == experiment_id(cfg));
}

TEST_CASE("distribution check is thread-invariant") {
  ExperimentConfig a = tiny_config();
  a.replicates = 32;
  a.threads = 1;
  ExperimentConfig b = a;
  b.threads = 3;

  const ExperimentResult ra = run_theorem2(a);
  const ExperimentResult rb = run_theorem2(b);
  REQUIRE(ra.rows.size() == rb.rows.size());
  for (std::size_t i = 0; i < ra.rows.size(); ++i) {
    CHECK(ra.rows[i].metric == rb.rows[i].metric);
    CHECK(ra.rows[i].value == rb.rows[i].value);
  }
  REQUIRE(ra.samples.size() == rb.samples.size());
  for (std::size_t i = 0; i < ra.samples.size(); ++i) {
    CHECK((ra.samples[i].statistic == rb.samples[i].statistic).all());
    CHECK((ra.samples[i].reference == rb.samples[i].reference).all());
  }
}

TEST_CASE("routing preconditions reject ineligible runs") {
  ExperimentConfig cfg = tiny_config();

  // unbounded f cannot take the plain route
  cfg.f_list = {TestFunction::power_cusp(-0.25, 1.0)};
  CHECK(precondition_message([&] { run_theorem2(cfg); }).find("unbounded") != std::string::npos);
  CHECK(precondition_message([&] { run_theorem3(cfg, 1); }).find("bounded") != std::string::npos);

  // the comb's oscillation integral holds a plateau
  cfg.f_list = {comb_function()};
  CHECK(precondition_message([&] { run_theorem2(cfg); }).find("oscillation") !=
        std::string::npos);

  // t beyond the normalized horizon
  ExperimentConfig far = tiny_config();
  far.lfsm.t_max = 2.0;
  far.t_list = (Eigen::ArrayXd(1) << 1.5).finished();
  CHECK_THROWS_AS(run_theorem2(far), PreconditionError);

  // innovation law without a density
  ExperimentConfig disc = tiny_config();
  disc.spec.abs_continuous = false;
  CHECK(precondition_message([&] { run_theorem3(disc, 1); }).find("absolutely continuous") !=
        std::string::npos);

  CHECK_THROWS_AS(run_theorem3(tiny_config(), 3), std::invalid_argument);

  // shifted start must leave at least one term at the first (n, t)
  ExperimentConfig shifted = tiny_config();
  shifted.spec.with_flags({}, {}, 20.0);
  CHECK(precondition_message([&] { run_theorem3(shifted, 2); }).find("n0=20") !=
        std::string::npos);

  // cusp exponents with non-integrable squares never construct
  CHECK_THROWS_AS(TestFunction::power_cusp(-0.6, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::power_cusp(0.25, 1.0), std::invalid_argument);

  // subsampling needs aligned grids
  ExperimentConfig stride = tiny_config();
  stride.lfsm.grid_n = 64;
  stride.n_list = {48};
  CHECK(precondition_message([&] { run_theorem4_5(stride); }).find("integer multiple") !=
        std::string::npos);
}

TEST_CASE("shifted-start run reports the discarded head exactly") {
  ExperimentConfig cfg = tiny_config();
  cfg.spec.with_flags({}, {}, 3.0);  // start the sum at n0 = 3

  const ExperimentResult res = run_theorem3(cfg, 2);
  CHECK(res.verb == "t3ii");

  // replay the statistic streams and recompute the per-n head mass
  const TruncationPolicy policy = effective_policy(cfg);
  const int R = cfg.replicates;
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    const Eigen::Index n = cfg.n_list[ni];
    const double beta = beta_n(double(n), cfg.beta_exponent);
    double expect = 0.0;
    for (int r = 0; r < R; ++r) {
      RngStream rng = derive_stream(cfg.master_seed, std::uint64_t(R + r));
      const SamplePath path = normalized_path(cfg.model, cfg.norms, cfg.spec, n, policy, rng);
      expect = std::max(expect,
                        std::abs(functional_presum(path, cfg.f_list[0], beta, 0.0, 3)));
    }
    bool found = false;
    for (const ResultRow& row : res.rows)
      if (row.metric == "presum_max" && row.n == double(n)) {
        found = true;
        CHECK(row.value == expect);
      }
    CHECK(found);
  }
  bool head_note = false;
  for (const std::string& s : res.notes)
    if (s.find("n0=3") != std::string::npos) head_note = true;
  CHECK(head_note);
}

TEST_CASE("L2 decay run: gap columns shrink with n") {
  ExperimentConfig cfg = tiny_config();
  cfg.n_list = {16, 256};
  cfg.replicates = 150;
  cfg.lfsm.grid_n = 1024;

  const ExperimentResult res = run_theorem4_5(cfg);
  CHECK(res.verb == "t4_5");
  CHECK(res.comparison == "-");
  CHECK(res.verdict_t4);
  CHECK(res.verdict_t5);
  CHECK(res.verdict);
  CHECK(res.rows.size() == 4);  // two metrics x two n

  double d4_first = -1.0, d4_last = -1.0;
  for (const ResultRow& r : res.rows) {
    CHECK(r.value >= 0.0);
    if (r.metric == "t4_gap_sq" && r.n == 16.0) d4_first = r.value;
    if (r.metric == "t4_gap_sq" && r.n == 256.0) d4_last = r.value;
  }
  CHECK(d4_first > 0.0);
  CHECK(d4_last < d4_first);
}

TEST_CASE("smoothing-gap run: plateaus shrink with the smoothing width") {
  ExperimentConfig cfg = tiny_config();
  cfg.n_list = {64, 256};
  cfg.replicates = 300;
  cfg.estimator.eps_list = (Eigen::ArrayXd(2) << 0.5, 0.125).finished();

  const ExperimentResult res = run_prop6_gap(cfg);
  CHECK(res.verb == "p6");
  CHECK(res.samples.empty());
  CHECK(res.gaps.size() == 4);  // two eps x two n
  CHECK(res.verdict);

  double wide = -1.0, fine = -1.0;
  for (const GapCell& g : res.gaps) {
    CHECK(g.value >= 0.0);
    if (g.n == 256 && g.eps == 0.5) wide = g.value;
    if (g.n == 256 && g.eps == 0.125) fine = g.value;
  }
  CHECK(fine < wide);

  bool plateau_note = false;
  for (const std::string& s : res.notes)
    if (s.find("plateau") != std::string::npos) plateau_note = true;
  CHECK(plateau_note);
}

TEST_CASE("persisted results are byte-stable across reruns") {
  namespace fs = std::filesystem;
  ExperimentConfig cfg = tiny_config();
  cfg.f_list = {TestFunction::zero()};
  cfg.out_dir = (fs::temp_directory_path() / "ltlab_harness_test").string();
  fs::remove_all(cfg.out_dir);

  const ExperimentResult first = run_theorem2(cfg);
  const std::string dir = write_result(cfg, first);
  CHECK(dir == cfg.out_dir + "/" + first.experiment + "-t2");

  const std::string summary1 = slurp(dir + "/summary.json");
  const std::string table1 = slurp(dir + "/tables/t2.csv");
  const std::string config1 = slurp(dir + "/config.json");

  // a second run differs only in wall-clock time, which is never serialized
  const ExperimentResult second = run_theorem2(cfg);
  write_result(cfg, second);
  CHECK(slurp(dir + "/summary.json") == summary1);
  CHECK(slurp(dir + "/tables/t2.csv") == table1);
  CHECK(slurp(dir + "/config.json") == config1);

  CHECK(summary1.find("elapsed") == std::string::npos);
  CHECK(table1.rfind("# exp=", 0) == 0);

  const nlohmann::json parsed = nlohmann::json::parse(summary1);
  CHECK(parsed.at("verb") == "t2");
  CHECK(parsed.at("verdict") == true);
  CHECK(parsed.at("comparison") == "exact");
  CHECK(parsed.at("rows").is_array());

  fs::remove_all(cfg.out_dir);
}

TEST_CASE("config canonical form round-trips") {
  ExperimentConfig cfg;
  cfg.model = CoefficientModel::c1(0.65, 1.7, SlowlyVarying::log_power(0.5));
  cfg.spec = InnovationSpec::exact_stable(1.7, -0.3, 2.0);
  cfg.norms = NormSchedule{1.7, SlowlyVarying::log_power(1.2)};
  cfg.f_list = {TestFunction::gauss_bump(0.5, 2.0), TestFunction::indicator(-0.5, 0.25)};
  cfg.n_list = {8, 32};
  cfg.beta_exponent = 0.55;
  cfg.t_list = (Eigen::ArrayXd(2) << 0.25, 0.75).finished();
  cfg.x_list = (Eigen::ArrayXd(2) << -1.0, 0.5).finished();
  cfg.replicates = 37;
  cfg.master_seed = 99;
  cfg.estimator.eta = 1.0 / 128;
  cfg.estimator.eps_list = (Eigen::ArrayXd(2) << 0.5, 0.125).finished();
  cfg.estimator.u_max = 50.0;
  cfg.estimator.quad_n = 128;
  cfg.estimator.x_step = 0.125;
  cfg.estimator.gh_n = 11;
  cfg.truncation = TruncationPolicy::truncate(77);
  cfg.diag.j_list = {4, 9};
  cfg.diag.lambda = 0.7;
  cfg.diag.d = 0.4;
  cfg.diag.c = 1.5;
  cfg.diag.cap = 100.0;
  cfg.diag.weights = SStarWeights::Exact;
  cfg.threads = 2;
  cfg.out_dir = "zzz";

  const std::string json = config_to_json(cfg);
  const ExperimentConfig parsed = parse_config_text(json, "roundtrip");
  CHECK(config_to_json(parsed) == json);
  CHECK(experiment_id(parsed) == experiment_id(cfg));
  CHECK(experiment_id(cfg).size() == 16);
  CHECK(experiment_id(cfg).find_first_not_of("0123456789abcdef") == std::string::npos);

  // unknown keys are rejected with their dotted path
  nlohmann::json doc = nlohmann::json::parse(config_to_json(default_config()));
  doc["model"]["bogus"] = 1;
  try {
    parse_config_text(doc.dump(), "probe");
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("model.bogus") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config_text("{,", "broken"), std::runtime_error);
}
