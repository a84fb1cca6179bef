#include "ltlab/config.hpp"

#include "ltlab/util.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ltlab {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw std::runtime_error(origin + ": " + msg);
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

// --- schema-driven key checking ------------------------------------------------

struct SchemaIndex {
  std::set<std::string> leaves;
  std::set<std::string> interior;  // prefixes of leaves, including "f_list[]"
};

const SchemaIndex& schema_index() {
  static const SchemaIndex idx = [] {
    SchemaIndex s;
    for (const auto& e : config_schema()) {
      const std::string key = e.key;
      s.leaves.insert(key);
      std::size_t pos = 0;
      while ((pos = key.find('.', pos)) != std::string::npos) {
        s.interior.insert(key.substr(0, pos));
        ++pos;
      }
    }
    return s;
  }();
  return idx;
}

void check_keys(const json& node, const std::string& prefix, const std::string& origin) {
  const SchemaIndex& idx = schema_index();
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (idx.interior.count(path + "[]")) {
      if (!it->is_array()) fail(origin, "'" + path + "' must be an array of objects");
      for (const auto& elem : *it) {
        if (!elem.is_object()) fail(origin, "'" + path + "' entries must be objects");
        check_keys(elem, path + "[]", origin);
      }
      continue;
    }
    if (idx.interior.count(path)) {
      if (!it->is_object()) fail(origin, "'" + path + "' must be an object");
      check_keys(*it, path, origin);
      continue;
    }
    if (idx.leaves.count(path)) {
      if (it->is_object()) fail(origin, "'" + path + "' does not take an object");
      continue;
    }
    fail(origin, "unknown config key '" + path + "'");
  }
}

// --- typed accessors -----------------------------------------------------------

const json* find(const json& o, const char* key) {
  auto it = o.find(key);
  return it == o.end() ? nullptr : &*it;
}

double as_num(const json& v, const std::string& path, const std::string& origin) {
  if (!v.is_number()) fail(origin, "'" + path + "' must be a number");
  return v.get<double>();
}

long long as_int(const json& v, const std::string& path, const std::string& origin) {
  if (!v.is_number_integer()) fail(origin, "'" + path + "' must be an integer");
  return v.get<long long>();
}

std::uint64_t as_u64(const json& v, const std::string& path, const std::string& origin) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    fail(origin, "'" + path + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& path, const std::string& origin) {
  if (!v.is_boolean()) fail(origin, "'" + path + "' must be a boolean");
  return v.get<bool>();
}

std::string as_str(const json& v, const std::string& path, const std::string& origin) {
  if (!v.is_string()) fail(origin, "'" + path + "' must be a string");
  return v.get<std::string>();
}

Eigen::ArrayXd as_num_array(const json& v, const std::string& path, const std::string& origin) {
  if (!v.is_array()) fail(origin, "'" + path + "' must be an array of numbers");
  Eigen::ArrayXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& elem : v) {
    if (!elem.is_number()) fail(origin, "'" + path + "' must contain only numbers");
    out[i++] = elem.get<double>();
  }
  return out;
}

std::vector<Eigen::Index> as_index_array(const json& v, const std::string& path,
                                         const std::string& origin) {
  if (!v.is_array()) fail(origin, "'" + path + "' must be an array of integers");
  std::vector<Eigen::Index> out;
  out.reserve(v.size());
  for (const auto& elem : v) {
    if (!elem.is_number_integer()) fail(origin, "'" + path + "' must contain only integers");
    out.push_back(static_cast<Eigen::Index>(elem.get<long long>()));
  }
  return out;
}

void require_only(const json& o, std::initializer_list<const char*> keys, const std::string& path,
                  const std::string& origin) {
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool ok = false;
    for (const char* k : keys)
      if (it.key() == k) ok = true;
    if (!ok) fail(origin, "key '" + it.key() + "' is not valid for " + path);
  }
}

// --- section parsers -----------------------------------------------------------

SlowlyVarying parse_sv(const json& o, const std::string& path, const std::string& origin,
                       SlowlyVarying fallback) {
  std::string kind = fallback.kind == SlowlyVarying::Kind::Constant ? "constant" : "log_power";
  double value = fallback.value;
  if (const json* v = find(o, "kind")) kind = as_str(*v, path + ".kind", origin);
  if (const json* v = find(o, "value")) value = as_num(*v, path + ".value", origin);
  if (kind == "constant") return SlowlyVarying::constant(value);
  if (kind == "log_power") return SlowlyVarying::log_power(value);
  fail(origin, "'" + path + ".kind' must be \"constant\" or \"log_power\"");
}

CoefficientModel parse_model(const json& o, const std::string& origin,
                             const CoefficientModel& fallback) {
  std::string regime = fallback.regime == CoefficientModel::Regime::C1 ? "c1" : "c2";
  if (const json* v = find(o, "regime")) regime = as_str(*v, "model.regime", origin);

  double alpha = fallback.alpha;
  if (const json* v = find(o, "alpha")) alpha = as_num(*v, "model.alpha", origin);

  if (regime == "c1") {
    double H = fallback.regime == CoefficientModel::Regime::C1 ? fallback.H : 0.5;
    SlowlyVarying R = fallback.R;
    bool zero_sum = fallback.zero_sum;
    if (const json* v = find(o, "H")) H = as_num(*v, "model.H", origin);
    if (const json* v = find(o, "R")) R = parse_sv(*v, "model.R", origin, R);
    if (const json* v = find(o, "zero_sum")) zero_sum = as_bool(*v, "model.zero_sum", origin);
    if (find(o, "coeffs") || find(o, "tau") || find(o, "farima_d"))
      fail(origin, "model.coeffs/tau/farima_d apply only to regime \"c2\"");
    return CoefficientModel::c1(H, alpha, R, zero_sum);
  }
  if (regime == "c2") {
    if (find(o, "H") || find(o, "R") || find(o, "zero_sum"))
      fail(origin, "model.H/R/zero_sum apply only to regime \"c1\"");
    double tau = fallback.regime == CoefficientModel::Regime::C2 ? fallback.tau : 1.0;
    if (const json* v = find(o, "tau")) tau = as_num(*v, "model.tau", origin);
    if (const json* v = find(o, "farima_d")) {
      if (find(o, "coeffs")) fail(origin, "model.coeffs and model.farima_d are exclusive");
      return CoefficientModel::c2_farima(as_num(*v, "model.farima_d", origin), alpha, tau);
    }
    Eigen::ArrayXd coeffs = fallback.coeffs;
    if (const json* v = find(o, "coeffs")) coeffs = as_num_array(*v, "model.coeffs", origin);
    return CoefficientModel::c2(std::move(coeffs), alpha, tau);
  }
  fail(origin, "'model.regime' must be \"c1\" or \"c2\"");
}

InnovationSpec parse_innovation(const json& o, const std::string& origin,
                                const InnovationSpec& fallback) {
  std::string kind = "stable";
  if (fallback.kind == LawKind::ShiftedPareto) kind = "pareto";
  if (fallback.kind == LawKind::GaussianMixture) kind = "mixture";
  if (const json* v = find(o, "kind")) kind = as_str(*v, "innovation.kind", origin);

  InnovationSpec spec;
  if (kind == "stable") {
    double alpha = fallback.kind == LawKind::ExactStable ? fallback.stable.alpha : 2.0;
    double beta = fallback.kind == LawKind::ExactStable ? fallback.stable.beta : 0.0;
    double gscale = fallback.kind == LawKind::ExactStable ? fallback.stable.gscale : 1.0;
    if (const json* v = find(o, "alpha")) alpha = as_num(*v, "innovation.alpha", origin);
    if (const json* v = find(o, "beta")) beta = as_num(*v, "innovation.beta", origin);
    if (const json* v = find(o, "gscale")) gscale = as_num(*v, "innovation.gscale", origin);
    if (find(o, "tail_balance") || find(o, "weights") || find(o, "means") || find(o, "sds"))
      fail(origin, "innovation keys do not match kind \"stable\"");
    spec = InnovationSpec::exact_stable(alpha, beta, gscale);
  } else if (kind == "pareto") {
    double alpha = fallback.kind == LawKind::ShiftedPareto ? fallback.pareto.alpha : 1.5;
    double bal = fallback.kind == LawKind::ShiftedPareto ? fallback.pareto.tail_balance : 0.5;
    if (const json* v = find(o, "alpha")) alpha = as_num(*v, "innovation.alpha", origin);
    if (const json* v = find(o, "tail_balance")) bal = as_num(*v, "innovation.tail_balance", origin);
    if (find(o, "beta") || find(o, "gscale") || find(o, "weights") || find(o, "means") ||
        find(o, "sds"))
      fail(origin, "innovation keys do not match kind \"pareto\"");
    spec = InnovationSpec::shifted_pareto(alpha, bal);
  } else if (kind == "mixture") {
    const json* w = find(o, "weights");
    const json* mu = find(o, "means");
    const json* sd = find(o, "sds");
    if (!w || !mu || !sd) fail(origin, "innovation kind \"mixture\" requires weights/means/sds");
    if (find(o, "alpha") || find(o, "beta") || find(o, "gscale") || find(o, "tail_balance"))
      fail(origin, "innovation keys do not match kind \"mixture\"");
    spec = InnovationSpec::gaussian_mixture(as_num_array(*w, "innovation.weights", origin),
                                            as_num_array(*mu, "innovation.means", origin),
                                            as_num_array(*sd, "innovation.sds", origin));
  } else {
    fail(origin, "'innovation.kind' must be \"stable\", \"pareto\" or \"mixture\"");
  }

  std::optional<bool> cramer, abs_cont;
  std::optional<double> char_power;
  if (const json* v = find(o, "cramer")) cramer = as_bool(*v, "innovation.cramer", origin);
  if (const json* v = find(o, "abs_continuous"))
    abs_cont = as_bool(*v, "innovation.abs_continuous", origin);
  if (const json* v = find(o, "char_integrable_power"))
    char_power = as_num(*v, "innovation.char_integrable_power", origin);
  spec.with_flags(cramer, abs_cont, char_power);
  return spec;
}

TestFunction parse_f(const json& o, const std::string& path, const std::string& origin) {
  const json* kv = find(o, "kind");
  if (!kv) fail(origin, "'" + path + "' needs a \"kind\"");
  const std::string kind = as_str(*kv, path + ".kind", origin);

  auto num = [&](const char* key, double fallback) {
    const json* v = find(o, key);
    return v ? as_num(*v, path + "." + key, origin) : fallback;
  };
  auto arr = [&](const char* key) -> Eigen::ArrayXd {
    const json* v = find(o, key);
    if (!v) fail(origin, "'" + path + "' kind \"" + kind + "\" requires \"" + key + "\"");
    return as_num_array(*v, path + "." + key, origin);
  };

  if (kind == "indicator") {
    require_only(o, {"kind", "c", "d"}, path, origin);
    return TestFunction::indicator(num("c", -1.0), num("d", 1.0));
  }
  if (kind == "indicator_union") {
    require_only(o, {"kind", "edges"}, path, origin);
    return TestFunction::indicator_union(arr("edges"));
  }
  if (kind == "gauss") {
    require_only(o, {"kind", "center", "width"}, path, origin);
    return TestFunction::gauss_bump(num("center", 0.0), num("width", 1.0));
  }
  if (kind == "triangle") {
    require_only(o, {"kind", "center", "halfwidth"}, path, origin);
    return TestFunction::triangle(num("center", 0.0), num("halfwidth", 1.0));
  }
  if (kind == "signed_hat") {
    require_only(o, {"kind", "halfwidth"}, path, origin);
    return TestFunction::signed_hat(num("halfwidth", 1.0));
  }
  if (kind == "power_cusp") {
    require_only(o, {"kind", "tau", "radius"}, path, origin);
    return TestFunction::power_cusp(num("tau", -0.25), num("radius", 1.0));
  }
  if (kind == "custom_grid") {
    require_only(o, {"kind", "lo", "step", "values"}, path, origin);
    return TestFunction::custom_grid(num("lo", 0.0), num("step", 1.0), arr("values"));
  }
  if (kind == "zero") {
    require_only(o, {"kind"}, path, origin);
    return TestFunction::zero();
  }
  fail(origin, "'" + path + ".kind' is not a known test function kind: \"" + kind + "\"");
}

TruncationPolicy parse_truncation(const json& o, const std::string& origin) {
  std::string mode = "auto";
  if (const json* v = find(o, "mode")) mode = as_str(*v, "truncation.mode", origin);
  if (mode == "auto") {
    if (find(o, "m")) fail(origin, "truncation.m applies only to mode \"fixed\"");
    return TruncationPolicy::truncate(0);
  }
  if (mode == "exact") {
    if (find(o, "m")) fail(origin, "truncation.m applies only to mode \"fixed\"");
    return TruncationPolicy::exact_finite();
  }
  if (mode == "fixed") {
    const json* v = find(o, "m");
    if (!v) fail(origin, "truncation mode \"fixed\" requires m");
    long long m = as_int(*v, "truncation.m", origin);
    if (m < 1) fail(origin, "'truncation.m' must be >= 1");
    return TruncationPolicy::truncate(static_cast<Eigen::Index>(m));
  }
  fail(origin, "'truncation.mode' must be \"auto\", \"exact\" or \"fixed\"");
}

// --- serialization -------------------------------------------------------------

const char* sv_kind_name(const SlowlyVarying& R) {
  return R.kind == SlowlyVarying::Kind::Constant ? "constant" : "log_power";
}

ordered_json sv_json(const SlowlyVarying& R) {
  return ordered_json{{"kind", sv_kind_name(R)}, {"value", R.value}};
}

ordered_json arr_json(const Eigen::ArrayXd& a) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < a.size(); ++i) out.push_back(a[i]);
  return out;
}

ordered_json arr_json(const std::vector<Eigen::Index>& a) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index v : a) out.push_back(static_cast<long long>(v));
  return out;
}

ordered_json model_json(const CoefficientModel& m) {
  ordered_json j;
  if (m.regime == CoefficientModel::Regime::C1) {
    j["regime"] = "c1";
    j["alpha"] = m.alpha;
    j["H"] = m.H;
    j["R"] = sv_json(m.R);
    j["zero_sum"] = m.zero_sum;
  } else {
    j["regime"] = "c2";
    j["alpha"] = m.alpha;
    j["coeffs"] = arr_json(m.coeffs);
    j["tau"] = m.tau;
  }
  return j;
}

ordered_json innovation_json(const InnovationSpec& s) {
  ordered_json j;
  switch (s.kind) {
    case LawKind::ExactStable:
      j["kind"] = "stable";
      j["alpha"] = s.stable.alpha;
      j["beta"] = s.stable.beta;
      j["gscale"] = s.stable.gscale;
      break;
    case LawKind::ShiftedPareto:
      j["kind"] = "pareto";
      j["alpha"] = s.pareto.alpha;
      j["tail_balance"] = s.pareto.tail_balance;
      break;
    case LawKind::GaussianMixture:
      j["kind"] = "mixture";
      j["weights"] = arr_json(s.mixture.weights);
      j["means"] = arr_json(s.mixture.means);
      j["sds"] = arr_json(s.mixture.sds);
      break;
  }
  j["cramer"] = s.cramer;
  j["abs_continuous"] = s.abs_continuous;
  j["char_integrable_power"] = s.char_integrable_power;
  return j;
}

ordered_json f_json(const TestFunction& f) {
  ordered_json j;
  switch (f.kind) {
    case TestFunction::Kind::Indicator:
      j["kind"] = "indicator";
      j["c"] = f.p1;
      j["d"] = f.p2;
      break;
    case TestFunction::Kind::IndicatorUnion:
      j["kind"] = "indicator_union";
      j["edges"] = arr_json(f.knots);
      break;
    case TestFunction::Kind::GaussBump:
      j["kind"] = "gauss";
      j["center"] = f.p1;
      j["width"] = f.p2;
      break;
    case TestFunction::Kind::Triangle:
      j["kind"] = "triangle";
      j["center"] = f.p1;
      j["halfwidth"] = f.p2;
      break;
    case TestFunction::Kind::SignedHat:
      j["kind"] = "signed_hat";
      j["halfwidth"] = f.p1;
      break;
    case TestFunction::Kind::PowerCusp:
      j["kind"] = "power_cusp";
      j["tau"] = f.p1;
      j["radius"] = f.p2;
      break;
    case TestFunction::Kind::CustomGrid:
      j["kind"] = "custom_grid";
      j["lo"] = f.p1;
      j["step"] = f.p2;
      j["values"] = arr_json(f.knots);
      break;
    case TestFunction::Kind::Zero:
      j["kind"] = "zero";
      break;
  }
  return j;
}

ordered_json truncation_json(const TruncationPolicy& p) {
  ordered_json j;
  if (p.mode == TruncationPolicy::Mode::ExactFinite) {
    j["mode"] = "exact";
  } else if (p.m == 0) {
    j["mode"] = "auto";
  } else {
    j["mode"] = "fixed";
    j["m"] = static_cast<long long>(p.m);
  }
  return j;
}

}  // namespace

// --- public API ------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (model.alpha != spec.alpha())
    throw std::invalid_argument("config: model.alpha must equal the innovation tail index");
  if (norms.alpha != spec.alpha())
    throw std::invalid_argument("config: norming alpha must equal the innovation tail index");
  if (f_list.empty()) throw std::invalid_argument("config: f_list must not be empty");
  if (n_list.empty()) throw std::invalid_argument("config: n_list must not be empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw std::invalid_argument("config: n_list entries must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("config: n_list must be strictly increasing");
  }
  if (!(beta_exponent > 0.0 && beta_exponent < 1.0))
    throw std::invalid_argument("config: beta_exponent must lie in (0, 1)");
  if (t_list.size() == 0) throw std::invalid_argument("config: t_list must not be empty");
  for (Eigen::Index i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0)) throw std::invalid_argument("config: t_list entries must be > 0");
    if (i > 0 && !(t_list[i] > t_list[i - 1]))
      throw std::invalid_argument("config: t_list must be strictly increasing");
  }
  if (x_list.size() == 0) throw std::invalid_argument("config: x_list must not be empty");
  if (!x_list.isFinite().all()) throw std::invalid_argument("config: x_list must be finite");
  if (replicates < 2) throw std::invalid_argument("config: replicates must be >= 2");
  if (!(t_list.maxCoeff() <= lfsm.t_max))
    throw std::invalid_argument("config: t_list must stay within the lfsm horizon t_max");
  if (!(estimator.eta > 0.0)) throw std::invalid_argument("config: estimator.eta must be > 0");
  if (estimator.eps_list.size() == 0 || !(estimator.eps_list > 0.0).all())
    throw std::invalid_argument("config: estimator.eps_list must be positive and non-empty");
  if (!(estimator.u_max > 0.0)) throw std::invalid_argument("config: estimator.u_max must be > 0");
  if (estimator.quad_n < 8) throw std::invalid_argument("config: estimator.quad_n must be >= 8");
  if (!(estimator.x_step > 0.0)) throw std::invalid_argument("config: estimator.x_step must be > 0");
  if (estimator.gh_n < 3) throw std::invalid_argument("config: estimator.gh_n must be >= 3");
  if (diag.j_list.empty()) throw std::invalid_argument("config: diagnostics.j_list must not be empty");
  for (std::size_t i = 0; i < diag.j_list.size(); ++i) {
    if (diag.j_list[i] < 1)
      throw std::invalid_argument("config: diagnostics.j_list entries must be >= 1");
    if (i > 0 && diag.j_list[i] <= diag.j_list[i - 1])
      throw std::invalid_argument("config: diagnostics.j_list must be strictly increasing");
  }
  if (!(diag.lambda >= 0.0)) throw std::invalid_argument("config: diagnostics.lambda must be >= 0");
  if (!(diag.d > 0.0)) throw std::invalid_argument("config: diagnostics.d must be > 0");
  if (!(diag.c > 0.0)) throw std::invalid_argument("config: diagnostics.c must be > 0");
  if (!(diag.cap > 1.0)) throw std::invalid_argument("config: diagnostics.cap must be > 1");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  if (out_dir.empty()) throw std::invalid_argument("config: out_dir must not be empty");
  lfsm.validate();
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.f_list = {TestFunction::indicator(-1.0, 1.0)};
  cfg.n_list = {1 << 10, 1 << 12, 1 << 14};
  cfg.t_list = (Eigen::ArrayXd(1) << 1.0).finished();
  cfg.x_list = (Eigen::ArrayXd(1) << 0.0).finished();
  cfg.estimator.eps_list = (Eigen::ArrayXd(3) << 0.5, 0.25, 0.0625).finished();
  cfg.diag.j_list = {1 << 8, 1 << 10, 1 << 12, 1 << 14};
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string detail = e.what();
    if (auto p = detail.find("] "); p != std::string::npos) detail = detail.substr(p + 2);
    if (detail.rfind("parse error", 0) == 0)
      if (auto p = detail.find(": "); p != std::string::npos) detail = detail.substr(p + 2);
    fail(origin, "parse error at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + detail);
  }
  if (!doc.is_object()) fail(origin, "top level must be a JSON object");
  check_keys(doc, "", origin);

  ExperimentConfig cfg = default_config();
  if (const json* v = find(doc, "innovation")) cfg.spec = parse_innovation(*v, origin, cfg.spec);
  if (const json* v = find(doc, "model")) cfg.model = parse_model(*v, origin, cfg.model);
  {
    SlowlyVarying G = cfg.norms.G;
    if (const json* v = find(doc, "norm_g")) G = parse_sv(*v, "norm_g", origin, G);
    cfg.norms = NormSchedule(cfg.spec.alpha(), G);
  }
  if (const json* v = find(doc, "lfsm")) {
    const json& o = *v;
    if (const json* w = find(o, "alpha")) cfg.lfsm.alpha = as_num(*w, "lfsm.alpha", origin);
    if (const json* w = find(o, "H")) cfg.lfsm.H = as_num(*w, "lfsm.H", origin);
    if (const json* w = find(o, "a")) cfg.lfsm.a = as_num(*w, "lfsm.a", origin);
    if (const json* w = find(o, "beta")) cfg.lfsm.beta = as_num(*w, "lfsm.beta", origin);
    if (const json* w = find(o, "grid_n"))
      cfg.lfsm.grid_n = static_cast<Eigen::Index>(as_int(*w, "lfsm.grid_n", origin));
    if (const json* w = find(o, "t_max")) cfg.lfsm.t_max = as_num(*w, "lfsm.t_max", origin);
    if (const json* w = find(o, "refine"))
      cfg.lfsm.refine = static_cast<int>(as_int(*w, "lfsm.refine", origin));
    if (const json* w = find(o, "t_past_factor"))
      cfg.lfsm.t_past_factor = as_num(*w, "lfsm.t_past_factor", origin);
  }
  if (const json* v = find(doc, "f_list")) {
    if (!v->is_array() || v->empty()) fail(origin, "'f_list' must be a non-empty array");
    cfg.f_list.clear();
    int i = 0;
    for (const auto& elem : *v)
      cfg.f_list.push_back(parse_f(elem, "f_list[" + std::to_string(i++) + "]", origin));
  }
  if (const json* v = find(doc, "n_list")) cfg.n_list = as_index_array(*v, "n_list", origin);
  if (const json* v = find(doc, "beta_exponent"))
    cfg.beta_exponent = as_num(*v, "beta_exponent", origin);
  if (const json* v = find(doc, "t_list")) cfg.t_list = as_num_array(*v, "t_list", origin);
  if (const json* v = find(doc, "x_list")) cfg.x_list = as_num_array(*v, "x_list", origin);
  if (const json* v = find(doc, "replicates"))
    cfg.replicates = static_cast<int>(as_int(*v, "replicates", origin));
  if (const json* v = find(doc, "master_seed")) cfg.master_seed = as_u64(*v, "master_seed", origin);
  if (const json* v = find(doc, "estimator")) {
    const json& o = *v;
    if (const json* w = find(o, "eta")) cfg.estimator.eta = as_num(*w, "estimator.eta", origin);
    if (const json* w = find(o, "eps_list"))
      cfg.estimator.eps_list = as_num_array(*w, "estimator.eps_list", origin);
    if (const json* w = find(o, "u_max"))
      cfg.estimator.u_max = as_num(*w, "estimator.u_max", origin);
    if (const json* w = find(o, "quad_n"))
      cfg.estimator.quad_n = static_cast<int>(as_int(*w, "estimator.quad_n", origin));
    if (const json* w = find(o, "x_step"))
      cfg.estimator.x_step = as_num(*w, "estimator.x_step", origin);
    if (const json* w = find(o, "gh_n"))
      cfg.estimator.gh_n = static_cast<int>(as_int(*w, "estimator.gh_n", origin));
  }
  if (const json* v = find(doc, "truncation")) cfg.truncation = parse_truncation(*v, origin);
  if (const json* v = find(doc, "diagnostics")) {
    const json& o = *v;
    if (const json* w = find(o, "j_list"))
      cfg.diag.j_list = as_index_array(*w, "diagnostics.j_list", origin);
    if (const json* w = find(o, "lambda")) cfg.diag.lambda = as_num(*w, "diagnostics.lambda", origin);
    if (const json* w = find(o, "d")) cfg.diag.d = as_num(*w, "diagnostics.d", origin);
    if (const json* w = find(o, "c")) cfg.diag.c = as_num(*w, "diagnostics.c", origin);
    if (const json* w = find(o, "cap")) cfg.diag.cap = as_num(*w, "diagnostics.cap", origin);
    if (const json* w = find(o, "weights")) {
      std::string s = as_str(*w, "diagnostics.weights", origin);
      if (s == "simplified")
        cfg.diag.weights = SStarWeights::Simplified;
      else if (s == "exact")
        cfg.diag.weights = SStarWeights::Exact;
      else
        fail(origin, "'diagnostics.weights' must be \"simplified\" or \"exact\"");
    }
  }
  if (const json* v = find(doc, "threads"))
    cfg.threads = static_cast<int>(as_int(*v, "threads", origin));
  if (const json* v = find(doc, "out_dir")) cfg.out_dir = as_str(*v, "out_dir", origin);

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    fail(origin, e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), file);
}

std::string config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["model"] = model_json(cfg.model);
  j["innovation"] = innovation_json(cfg.spec);
  j["norm_g"] = sv_json(cfg.norms.G);
  {
    ordered_json l;
    l["alpha"] = cfg.lfsm.alpha;
    l["H"] = cfg.lfsm.H;
    l["a"] = cfg.lfsm.a;
    l["beta"] = cfg.lfsm.beta;
    l["grid_n"] = static_cast<long long>(cfg.lfsm.grid_n);
    l["t_max"] = cfg.lfsm.t_max;
    l["refine"] = cfg.lfsm.refine;
    l["t_past_factor"] = cfg.lfsm.t_past_factor;
    j["lfsm"] = std::move(l);
  }
  {
    ordered_json fl = ordered_json::array();
    for (const TestFunction& f : cfg.f_list) fl.push_back(f_json(f));
    j["f_list"] = std::move(fl);
  }
  j["n_list"] = arr_json(cfg.n_list);
  j["beta_exponent"] = cfg.beta_exponent;
  j["t_list"] = arr_json(cfg.t_list);
  j["x_list"] = arr_json(cfg.x_list);
  j["replicates"] = cfg.replicates;
  j["master_seed"] = cfg.master_seed;
  {
    ordered_json e;
    e["eta"] = cfg.estimator.eta;
    e["eps_list"] = arr_json(cfg.estimator.eps_list);
    e["u_max"] = cfg.estimator.u_max;
    e["quad_n"] = cfg.estimator.quad_n;
    e["x_step"] = cfg.estimator.x_step;
    e["gh_n"] = cfg.estimator.gh_n;
    j["estimator"] = std::move(e);
  }
  j["truncation"] = truncation_json(cfg.truncation);
  {
    ordered_json d;
    d["j_list"] = arr_json(cfg.diag.j_list);
    d["lambda"] = cfg.diag.lambda;
    d["d"] = cfg.diag.d;
    d["c"] = cfg.diag.c;
    d["cap"] = cfg.diag.cap;
    d["weights"] = cfg.diag.weights == SStarWeights::Simplified ? "simplified" : "exact";
    j["diagnostics"] = std::move(d);
  }
  j["threads"] = cfg.threads;
  j["out_dir"] = cfg.out_dir;
  return j.dump(2) + "\n";
}

std::string experiment_id(const ExperimentConfig& cfg) {
  const std::uint64_t h = fnv1a64(config_to_json(cfg));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

const std::vector<SchemaEntry>& config_schema() {
  static const std::vector<SchemaEntry> schema = {
      {"model.regime", "string", "coefficient regime: \"c1\" (power-law memory) or \"c2\" (summable)"},
      {"model.alpha", "number", "tail index the coefficients are paired with; must equal the innovation's"},
      {"model.H", "number", "c1 only: memory exponent in (0,1), H != 1/alpha"},
      {"model.R.kind", "string", "c1 slowly varying factor: \"constant\" or \"log_power\""},
      {"model.R.value", "number", "constant level, or the log exponent"},
      {"model.zero_sum", "bool", "c1 only: use the zero-sum fractional-differencing coefficients"},
      {"model.coeffs", "array", "c2 only: explicit coefficients, first entry is lag 0"},
      {"model.tau", "number", "c2 only: summability certificate exponent in (0, min(alpha,1)]"},
      {"model.farima_d", "number", "c2 only: request the d<0 differencing generator (always rejected: its coefficient sum is 0)"},
      {"innovation.kind", "string", "\"stable\", \"pareto\" or \"mixture\""},
      {"innovation.alpha", "number", "stable/pareto tail index in (0,2]"},
      {"innovation.beta", "number", "stable skewness in [-1,1]"},
      {"innovation.gscale", "number", "stable scale: the |u|^alpha multiplier in the exponent"},
      {"innovation.tail_balance", "number", "pareto: weight of the positive tail in [0,1]"},
      {"innovation.weights", "array", "mixture component weights (positive, sum 1)"},
      {"innovation.means", "array", "mixture component means (weighted sum 0)"},
      {"innovation.sds", "array", "mixture component standard deviations (> 0)"},
      {"innovation.cramer", "bool", "asserted Cramer condition; false is rejected for the shipped laws"},
      {"innovation.abs_continuous", "bool", "asserted density existence; false is rejected"},
      {"innovation.char_integrable_power", "number", "a p with integrable |char fn|^p; pareto needs p > 1"},
      {"norm_g.kind", "string", "slowly varying G of the norming b_n: \"constant\" or \"log_power\""},
      {"norm_g.value", "number", "constant level, or the log exponent"},
      {"lfsm.alpha", "number", "target process tail index in (0,2]"},
      {"lfsm.H", "number", "target self-similarity exponent in (0,1)"},
      {"lfsm.a", "number", "kernel scale factor"},
      {"lfsm.beta", "number", "driving stable skewness in [-1,1]"},
      {"lfsm.grid_n", "integer", "samples on (0, t_max]"},
      {"lfsm.t_max", "number", "simulation horizon"},
      {"lfsm.refine", "integer", "kernel sub-steps per grid step"},
      {"lfsm.t_past_factor", "number", "past truncation at -t_past_factor * t_max"},
      {"f_list", "array", "test functions; entries use the f_list[].* keys"},
      {"f_list[].kind", "string", "\"indicator\", \"indicator_union\", \"gauss\", \"triangle\", \"signed_hat\", \"power_cusp\", \"custom_grid\" or \"zero\""},
      {"f_list[].c", "number", "indicator: lower edge"},
      {"f_list[].d", "number", "indicator: upper edge"},
      {"f_list[].edges", "array", "indicator_union: interval edges c1,d1,c2,d2,... strictly increasing"},
      {"f_list[].center", "number", "gauss/triangle: center"},
      {"f_list[].width", "number", "gauss: standard deviation"},
      {"f_list[].halfwidth", "number", "triangle/signed_hat: half-width of the support"},
      {"f_list[].tau", "number", "power_cusp: exponent in (-1/2, 0)"},
      {"f_list[].radius", "number", "power_cusp: support radius"},
      {"f_list[].lo", "number", "custom_grid: first abscissa"},
      {"f_list[].step", "number", "custom_grid: abscissa spacing (> 0)"},
      {"f_list[].values", "array", "custom_grid: samples (linear interpolation, 0 outside)"},
      {"n_list", "array", "sample sizes, strictly increasing"},
      {"beta_exponent", "number", "kappa in (0,1): the spatial scale grows as n^kappa"},
      {"t_list", "array", "statistic evaluation times, strictly increasing, > 0"},
      {"x_list", "array", "spatial offsets"},
      {"replicates", "integer", "independent paths per table cell"},
      {"master_seed", "integer", "seed of the counter-based generator; streams derive from it"},
      {"estimator.eta", "number", "occupation window width"},
      {"estimator.eps_list", "array", "smoothing widths, positive, ordered widest to finest"},
      {"estimator.u_max", "number", "frequency cap of the inversion estimator"},
      {"estimator.quad_n", "integer", "inversion quadrature panel count (>= 8)"},
      {"estimator.x_step", "number", "spatial grid step of the occupation identity check"},
      {"estimator.gh_n", "integer", "node count of the Gaussian smoothing integral (>= 3)"},
      {"truncation.mode", "string", "\"auto\" (size-based tap count), \"exact\" (finite model) or \"fixed\""},
      {"truncation.m", "integer", "fixed mode: moving-average tap count"},
      {"diagnostics.j_list", "array", "weighted-sum sizes, strictly increasing"},
      {"diagnostics.lambda", "number", "window bound: frequency window is [0, lambda * b_j]"},
      {"diagnostics.d", "number", "window bound / tail decay: exponent weight (> 0)"},
      {"diagnostics.c", "number", "window bound: exponent power (> 0)"},
      {"diagnostics.cap", "number", "tail decay: frequency cap factor (> 1)"},
      {"diagnostics.weights", "string", "\"simplified\" or \"exact\" weighted-sum convention"},
      {"threads", "integer", "worker count; results are identical for any value"},
      {"out_dir", "string", "results root; tables land in <out_dir>/<experiment id>/"},
  };
  return schema;
}

}  // namespace ltlab
