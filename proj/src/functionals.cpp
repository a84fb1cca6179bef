#include "ltlab/functionals.hpp"

#include "ltlab/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ltlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double tri_val(double y, double c, double hw) {
  return std::max(0.0, 1.0 - std::abs(y - c) / hw);
}

// ∫_{-inf}^y of the unit-peak triangle at (c, hw); total mass hw.
double tri_prim(double y, double c, double hw) {
  const double z = y - c;
  if (z <= -hw) return 0.0;
  if (z >= hw) return hw;
  if (z <= 0.0) {
    const double w = z + hw;
    return 0.5 * w * w / hw;
  }
  const double w = hw - z;
  return hw - 0.5 * w * w / hw;
}

double sgn(double y) { return (y > 0.0) - (y < 0.0); }

// Oriented overlap of (lo(y), hi(y)) with (c, d) where the first interval is
// (0, y) for y > 0 or (y, 0) for y < 0.
double oriented_overlap(double y, double c, double d) {
  const double lo = std::min(0.0, y);
  const double hi = std::max(0.0, y);
  return sgn(y) * std::max(0.0, std::min(hi, d) - std::max(lo, c));
}

double interval_tail(double c, double d, double a) {
  return (d - c) - std::max(0.0, std::min(d, a) - std::max(c, -a));
}

// --- piecewise-linear grid helpers ------------------------------------------

double lin_int(double a, double b, double s, double t) {  // ∫_0^t of a+(b-a)u/s
  return a * t + 0.5 * (b - a) * t * t / s;
}

double lin_int_sq(double a, double b, double s, double t) {
  const double c = (b - a) / s;
  return a * a * t + a * c * t * t + c * c * t * t * t / 3.0;
}

double lin_int_abs(double a, double b, double s, double t) {
  if (a * b >= 0.0) return std::abs(lin_int(a, b, s, t));
  const double zeta = -a * s / (b - a);
  if (t <= zeta) return std::abs(lin_int(a, b, s, t));
  const double v = a + (b - a) * t / s;
  return 0.5 * std::abs(a) * zeta + 0.5 * std::abs(v) * (t - zeta);
}

enum class GridMode { Plain, Abs, Square };

// ∫_{lo}^{min(upto, hi)} of the interpolant (or |.|, or square).
double grid_walk(const Eigen::ArrayXd& ys, double lo, double step, double upto, GridMode mode) {
  const Eigen::Index segs = ys.size() - 1;
  const double hi = lo + static_cast<double>(segs) * step;
  upto = std::min(upto, hi);
  if (upto <= lo) return 0.0;
  CompensatedSum acc;
  for (Eigen::Index i = 0; i < segs; ++i) {
    const double x0 = lo + static_cast<double>(i) * step;
    if (x0 >= upto) break;
    const double t = std::min(step, upto - x0);
    const double a = ys[i];
    const double b = ys[i + 1];
    switch (mode) {
      case GridMode::Plain: acc.add(lin_int(a, b, step, t)); break;
      case GridMode::Abs: acc.add(lin_int_abs(a, b, step, t)); break;
      case GridMode::Square: acc.add(lin_int_sq(a, b, step, t)); break;
    }
  }
  return acc.value();
}

}  // namespace

// --- factories ---------------------------------------------------------------

TestFunction TestFunction::indicator(double c, double d) {
  if (!(c < d)) throw std::invalid_argument("indicator: requires c < d");
  TestFunction f;
  f.kind = Kind::Indicator;
  f.p1 = c;
  f.p2 = d;
  return f;
}

TestFunction TestFunction::indicator_union(Eigen::ArrayXd edges) {
  if (edges.size() < 2 || edges.size() % 2 != 0)
    throw std::invalid_argument("indicator_union: needs an even number of edges");
  for (Eigen::Index i = 1; i < edges.size(); ++i)
    if (!(edges[i - 1] < edges[i]))
      throw std::invalid_argument("indicator_union: edges must be strictly increasing");
  TestFunction f;
  f.kind = Kind::IndicatorUnion;
  f.knots = std::move(edges);
  return f;
}

TestFunction TestFunction::gauss_bump(double center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("gauss_bump: width must be > 0");
  TestFunction f;
  f.kind = Kind::GaussBump;
  f.p1 = center;
  f.p2 = width;
  return f;
}

TestFunction TestFunction::triangle(double center, double halfwidth) {
  if (!(halfwidth > 0.0)) throw std::invalid_argument("triangle: halfwidth must be > 0");
  TestFunction f;
  f.kind = Kind::Triangle;
  f.p1 = center;
  f.p2 = halfwidth;
  return f;
}

TestFunction TestFunction::signed_hat(double halfwidth) {
  if (!(halfwidth > 0.0)) throw std::invalid_argument("signed_hat: halfwidth must be > 0");
  TestFunction f;
  f.kind = Kind::SignedHat;
  f.p1 = halfwidth;
  return f;
}

TestFunction TestFunction::power_cusp(double tau, double radius) {
  if (!(tau > -0.5 && tau < 0.0))
    throw std::invalid_argument("power_cusp: exponent must lie in (-1/2, 0)");
  if (!(radius > 0.0)) throw std::invalid_argument("power_cusp: radius must be > 0");
  TestFunction f;
  f.kind = Kind::PowerCusp;
  f.p1 = tau;
  f.p2 = radius;
  return f;
}

TestFunction TestFunction::custom_grid(double lo, double step, Eigen::ArrayXd ys) {
  if (ys.size() < 2) throw std::invalid_argument("custom_grid: needs at least 2 samples");
  if (!(step > 0.0)) throw std::invalid_argument("custom_grid: step must be > 0");
  if (!ys.isFinite().all()) throw std::invalid_argument("custom_grid: samples must be finite");
  TestFunction f;
  f.kind = Kind::CustomGrid;
  f.p1 = lo;
  f.p2 = step;
  f.knots = std::move(ys);
  return f;
}

TestFunction TestFunction::zero() { return TestFunction{}; }

// --- evaluation ---------------------------------------------------------------

double TestFunction::operator()(double y) const {
  switch (kind) {
    case Kind::Indicator:
      return (y > p1 && y < p2) ? 1.0 : 0.0;
    case Kind::IndicatorUnion: {
      const double* b = knots.data();
      const double* e = b + knots.size();
      const auto idx = std::upper_bound(b, e, y) - b;
      return (idx % 2 == 1 && y != knots[idx - 1]) ? 1.0 : 0.0;
    }
    case Kind::GaussBump:
      return normal_pdf((y - p1) / p2) / p2;
    case Kind::Triangle:
      return tri_val(y, p1, p2);
    case Kind::SignedHat:
      return tri_val(y, -0.5 * p1, 0.5 * p1) - tri_val(y, 0.5 * p1, 0.5 * p1);
    case Kind::PowerCusp:
      return std::abs(y) <= p2 ? std::pow(std::abs(y), p1) : 0.0;
    case Kind::CustomGrid: {
      const double hi = p1 + static_cast<double>(knots.size() - 1) * p2;
      if (y < p1 || y > hi) return 0.0;
      const double u = (y - p1) / p2;
      const auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), knots.size() - 2);
      const double frac = u - static_cast<double>(i);
      return knots[i] + (knots[i + 1] - knots[i]) * frac;
    }
    case Kind::Zero:
      return 0.0;
  }
  return 0.0;
}

double TestFunction::integral() const {
  switch (kind) {
    case Kind::Indicator: return p2 - p1;
    case Kind::IndicatorUnion: {
      CompensatedSum s;
      for (Eigen::Index i = 0; i < knots.size(); i += 2) s.add(knots[i + 1] - knots[i]);
      return s.value();
    }
    case Kind::GaussBump: return 1.0;
    case Kind::Triangle: return p2;
    case Kind::SignedHat: return 0.0;
    case Kind::PowerCusp: return 2.0 * std::pow(p2, p1 + 1.0) / (p1 + 1.0);
    case Kind::CustomGrid: return grid_walk(knots, p1, p2, kInf, GridMode::Plain);
    case Kind::Zero: return 0.0;
  }
  return 0.0;
}

double TestFunction::integral_sq() const {
  switch (kind) {
    case Kind::Indicator: return p2 - p1;
    case Kind::IndicatorUnion: return integral();
    case Kind::GaussBump: return 1.0 / (2.0 * p2 * std::sqrt(M_PI));
    case Kind::Triangle: return 2.0 * p2 / 3.0;
    case Kind::SignedHat: return 2.0 * p1 / 3.0;
    case Kind::PowerCusp: return 2.0 * std::pow(p2, 2.0 * p1 + 1.0) / (2.0 * p1 + 1.0);
    case Kind::CustomGrid: return grid_walk(knots, p1, p2, kInf, GridMode::Square);
    case Kind::Zero: return 0.0;
  }
  return 0.0;
}

double TestFunction::integral_abs() const {
  switch (kind) {
    case Kind::Indicator:
    case Kind::IndicatorUnion: return integral();
    case Kind::GaussBump: return 1.0;
    case Kind::Triangle: return p2;
    case Kind::SignedHat: return p1;
    case Kind::PowerCusp: return integral();
    case Kind::CustomGrid: return grid_walk(knots, p1, p2, kInf, GridMode::Abs);
    case Kind::Zero: return 0.0;
  }
  return 0.0;
}

double TestFunction::integral_from_zero(double y) const {
  switch (kind) {
    case Kind::Indicator:
      return oriented_overlap(y, p1, p2);
    case Kind::IndicatorUnion: {
      CompensatedSum s;
      for (Eigen::Index i = 0; i < knots.size(); i += 2) s.add(oriented_overlap(y, knots[i], knots[i + 1]));
      return s.value();
    }
    case Kind::GaussBump:
      return normal_cdf((y - p1) / p2) - normal_cdf(-p1 / p2);
    case Kind::Triangle:
      return tri_prim(y, p1, p2) - tri_prim(0.0, p1, p2);
    case Kind::SignedHat: {
      const double hw = 0.5 * p1;
      const double up = tri_prim(y, -hw, hw) - tri_prim(0.0, -hw, hw);
      const double dn = tri_prim(y, hw, hw) - tri_prim(0.0, hw, hw);
      return up - dn;
    }
    case Kind::PowerCusp:
      return sgn(y) * std::pow(std::min(std::abs(y), p2), p1 + 1.0) / (p1 + 1.0);
    case Kind::CustomGrid: {
      const double py = grid_walk(knots, p1, p2, y, GridMode::Plain);
      const double p0 = grid_walk(knots, p1, p2, 0.0, GridMode::Plain);
      return py - p0;
    }
    case Kind::Zero:
      return 0.0;
  }
  return 0.0;
}

double TestFunction::tail_abs(double a) const {
  a = std::max(a, 0.0);
  switch (kind) {
    case Kind::Indicator:
      return interval_tail(p1, p2, a);
    case Kind::IndicatorUnion: {
      CompensatedSum s;
      for (Eigen::Index i = 0; i < knots.size(); i += 2) s.add(interval_tail(knots[i], knots[i + 1], a));
      return s.value();
    }
    case Kind::GaussBump:
      return 0.5 * std::erfc((a - p1) / (p2 * std::sqrt(2.0))) +
             0.5 * std::erfc((a + p1) / (p2 * std::sqrt(2.0)));
    case Kind::Triangle:
      return p2 - (tri_prim(a, p1, p2) - tri_prim(-a, p1, p2));
    case Kind::SignedHat: {
      const double hw = 0.5 * p1;
      return 2.0 * (hw - tri_prim(a, hw, hw));
    }
    case Kind::PowerCusp:
      if (a >= p2) return 0.0;
      return 2.0 * (std::pow(p2, p1 + 1.0) - std::pow(a, p1 + 1.0)) / (p1 + 1.0);
    case Kind::CustomGrid: {
      const double inner = grid_walk(knots, p1, p2, a, GridMode::Abs) -
                           grid_walk(knots, p1, p2, -a, GridMode::Abs);
      return integral_abs() - inner;
    }
    case Kind::Zero:
      return 0.0;
  }
  return 0.0;
}

bool TestFunction::bounded() const { return kind != Kind::PowerCusp; }

bool TestFunction::compact_support() const { return kind != Kind::GaussBump; }

double TestFunction::support_radius() const {
  switch (kind) {
    case Kind::Indicator: return std::max(std::abs(p1), std::abs(p2));
    case Kind::IndicatorUnion: return std::max(std::abs(knots[0]), std::abs(knots[knots.size() - 1]));
    case Kind::GaussBump: return kInf;
    case Kind::Triangle: return std::abs(p1) + p2;
    case Kind::SignedHat: return p1;
    case Kind::PowerCusp: return p2;
    case Kind::CustomGrid:
      return std::max(std::abs(p1), std::abs(p1 + static_cast<double>(knots.size() - 1) * p2));
    case Kind::Zero: return 0.0;
  }
  return 0.0;
}

std::string TestFunction::id() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Indicator: os << "ind(" << format_double(p1) << "," << format_double(p2) << ")"; break;
    case Kind::IndicatorUnion: os << "union" << knots.size() / 2; break;
    case Kind::GaussBump: os << "gauss(" << format_double(p1) << "," << format_double(p2) << ")"; break;
    case Kind::Triangle: os << "tri(" << format_double(p1) << "," << format_double(p2) << ")"; break;
    case Kind::SignedHat: os << "shat(" << format_double(p1) << ")"; break;
    case Kind::PowerCusp: os << "cusp(" << format_double(p1) << "," << format_double(p2) << ")"; break;
    case Kind::CustomGrid: os << "grid" << knots.size(); break;
    case Kind::Zero: os << "zero"; break;
  }
  return os.str();
}

// --- envelopes ----------------------------------------------------------------

namespace {

// Exact sliding sup/inf of a piecewise-linear function: extremes occur at the
// window ends or at knots inside the window; 0 joins the candidates whenever
// the window leaves the support.
struct KnotScan {
  Eigen::ArrayXd xs;
  Eigen::ArrayXd vs;
  double lo = 0.0, hi = 0.0;

  static KnotScan build(const TestFunction& f) {
    KnotScan k;
    if (f.kind == TestFunction::Kind::SignedHat) {
      const double h = f.p1;
      k.xs.resize(5);
      k.vs.resize(5);
      k.xs << -h, -0.5 * h, 0.0, 0.5 * h, h;
      k.vs << 0.0, 1.0, 0.0, -1.0, 0.0;
    } else {
      k.xs = Eigen::ArrayXd::LinSpaced(f.knots.size(), f.p1,
                                       f.p1 + static_cast<double>(f.knots.size() - 1) * f.p2);
      k.vs = f.knots;
    }
    k.lo = k.xs[0];
    k.hi = k.xs[k.xs.size() - 1];
    return k;
  }

  void minmax(const TestFunction& f, double y, double eta, double& mout, double& Mout) const {
    const double a = y - eta;
    const double b = y + eta;
    double mx = std::max(f(a), f(b));
    double mn = std::min(f(a), f(b));
    if (a < lo || b > hi) {
      mx = std::max(mx, 0.0);
      mn = std::min(mn, 0.0);
    }
    const double step = xs[1] - xs[0];
    auto i0 = static_cast<Eigen::Index>(std::ceil((a - lo) / step - 1e-12));
    auto i1 = static_cast<Eigen::Index>(std::floor((b - lo) / step + 1e-12));
    i0 = std::max<Eigen::Index>(i0, 0);
    i1 = std::min<Eigen::Index>(i1, xs.size() - 1);
    for (Eigen::Index i = i0; i <= i1; ++i) {
      mx = std::max(mx, vs[i]);
      mn = std::min(mn, vs[i]);
    }
    Mout = mx;
    mout = mn;
  }
};

bool needs_knot_scan(const TestFunction& f) {
  return f.kind == TestFunction::Kind::SignedHat || f.kind == TestFunction::Kind::CustomGrid;
}

double envelope_upper(const TestFunction& f, double eta, double y) {
  using K = TestFunction::Kind;
  switch (f.kind) {
    case K::Indicator:
      return (y > f.p1 - eta && y < f.p2 + eta) ? 1.0 : 0.0;
    case K::IndicatorUnion: {
      for (Eigen::Index i = 0; i < f.knots.size(); i += 2)
        if (y > f.knots[i] - eta && y < f.knots[i + 1] + eta) return 1.0;
      return 0.0;
    }
    case K::GaussBump:
      return normal_pdf(std::max(0.0, std::abs(y - f.p1) - eta) / f.p2) / f.p2;
    case K::Triangle:
      return tri_val(f.p1 + std::max(0.0, std::abs(y - f.p1) - eta), f.p1, f.p2);
    case K::PowerCusp: {
      const double t = std::abs(y) - eta;
      if (t <= 0.0) return kInf;
      return t <= f.p2 ? std::pow(t, f.p1) : 0.0;
    }
    case K::Zero:
      return 0.0;
    default:
      break;
  }
  const KnotScan k = KnotScan::build(f);
  double m, M;
  k.minmax(f, y, eta, m, M);
  return M;
}

double envelope_lower(const TestFunction& f, double eta, double y) {
  using K = TestFunction::Kind;
  switch (f.kind) {
    case K::Indicator:
      return (f.p2 - f.p1 > 2.0 * eta && y > f.p1 + eta && y < f.p2 - eta) ? 1.0 : 0.0;
    case K::IndicatorUnion: {
      for (Eigen::Index i = 0; i < f.knots.size(); i += 2)
        if (f.knots[i + 1] - f.knots[i] > 2.0 * eta && y > f.knots[i] + eta &&
            y < f.knots[i + 1] - eta)
          return 1.0;
      return 0.0;
    }
    case K::GaussBump:
      return normal_pdf((std::abs(y - f.p1) + eta) / f.p2) / f.p2;
    case K::Triangle:
      return tri_val(f.p1 + std::abs(y - f.p1) + eta, f.p1, f.p2);
    case K::PowerCusp: {
      const double t = std::abs(y) + eta;
      return t <= f.p2 ? std::pow(t, f.p1) : 0.0;
    }
    case K::Zero:
      return 0.0;
    default:
      break;
  }
  const KnotScan k = KnotScan::build(f);
  double m, M;
  k.minmax(f, y, eta, m, M);
  return m;
}

// Merged total length of the eta-widened support intervals (indicator kinds).
double widened_union_measure(const Eigen::ArrayXd& edges, double eta) {
  CompensatedSum total;
  double cur_lo = edges[0] - eta;
  double cur_hi = edges[1] + eta;
  for (Eigen::Index i = 2; i < edges.size(); i += 2) {
    const double lo = edges[i] - eta;
    const double hi = edges[i + 1] + eta;
    if (lo <= cur_hi) {
      cur_hi = std::max(cur_hi, hi);
    } else {
      total.add(cur_hi - cur_lo);
      cur_lo = lo;
      cur_hi = hi;
    }
  }
  total.add(cur_hi - cur_lo);
  return total.value();
}

enum class EnvInt { Oscillation, AbsUpper };

double numeric_envelope_integral(const TestFunction& f, double eta, EnvInt which) {
  const KnotScan k = KnotScan::build(f);
  const double lo = k.lo - eta;
  const double hi = k.hi + eta;
  const Eigen::Index panels = 1 << 15;
  const double step = (hi - lo) / static_cast<double>(panels);
  CompensatedSum acc;
  for (Eigen::Index i = 0; i <= panels; ++i) {
    const double y = lo + step * static_cast<double>(i);
    double m, M;
    k.minmax(f, y, eta, m, M);
    const double g = which == EnvInt::Oscillation ? (M - m) : std::max(M, -m);
    acc.add((i == 0 || i == panels) ? 0.5 * g : g);
  }
  return acc.value() * step;
}

double oscillation_integral(const TestFunction& f, double eta) {
  using K = TestFunction::Kind;
  switch (f.kind) {
    case K::Indicator: {
      const double len = f.p2 - f.p1;
      return (len + 2.0 * eta) - std::max(0.0, len - 2.0 * eta);
    }
    case K::IndicatorUnion: {
      CompensatedSum shrunk;
      for (Eigen::Index i = 0; i < f.knots.size(); i += 2)
        shrunk.add(std::max(0.0, f.knots[i + 1] - f.knots[i] - 2.0 * eta));
      return widened_union_measure(f.knots, eta) - shrunk.value();
    }
    case K::GaussBump:
      return std::erf(eta / (f.p2 * std::sqrt(2.0))) + 2.0 * eta * normal_pdf(0.0) / f.p2;
    case K::Triangle: {
      const double h = f.p2;
      if (eta >= h) return 2.0 * eta + h;
      return 4.0 * eta - eta * eta / h;
    }
    case K::PowerCusp:
      return kInf;
    case K::Zero:
      return 0.0;
    default:
      return numeric_envelope_integral(f, eta, EnvInt::Oscillation);
  }
}

}  // namespace

EnvelopePair envelopes(const TestFunction& f, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("envelopes: eta must be > 0");
  EnvelopePair pair;
  pair.eta = eta;
  if (needs_knot_scan(f)) {
    const KnotScan k = KnotScan::build(f);
    pair.upper = [f, eta, k](double y) {
      double m, M;
      k.minmax(f, y, eta, m, M);
      return M;
    };
    pair.lower = [f, eta, k](double y) {
      double m, M;
      k.minmax(f, y, eta, m, M);
      return m;
    };
  } else {
    pair.upper = [f, eta](double y) { return envelope_upper(f, eta, y); };
    pair.lower = [f, eta](double y) { return envelope_lower(f, eta, y); };
  }
  return pair;
}

OscillationReport oscillation_condition(const TestFunction& f, const Eigen::ArrayXd& deltas) {
  if (deltas.size() == 0) throw std::invalid_argument("oscillation_condition: empty delta list");
  for (Eigen::Index i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw std::invalid_argument("oscillation_condition: deltas must be > 0");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      throw std::invalid_argument("oscillation_condition: deltas must be strictly decreasing");
  }
  OscillationReport rep;
  rep.deltas = deltas;
  rep.values.resize(deltas.size());
  for (Eigen::Index i = 0; i < deltas.size(); ++i) rep.values[i] = oscillation_integral(f, deltas[i]);

  const double first = rep.values[0];
  const double last = rep.values[rep.values.size() - 1];
  bool monotone = rep.values.isFinite().all();
  for (Eigen::Index i = 1; i < rep.values.size() && monotone; ++i)
    monotone = rep.values[i] <= rep.values[i - 1] + 1e-12;
  if (first == 0.0) {
    rep.vanishes = monotone && last == 0.0;
  } else {
    rep.vanishes = monotone && last < 0.1 * first;
  }
  return rep;
}

double envelope_abs_integral(const TestFunction& f, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("envelope_abs_integral: eta must be > 0");
  using K = TestFunction::Kind;
  switch (f.kind) {
    case K::Indicator: return f.p2 - f.p1 + 2.0 * eta;
    case K::IndicatorUnion: return widened_union_measure(f.knots, eta);
    case K::GaussBump: return 1.0 + 2.0 * eta * normal_pdf(0.0) / f.p2;
    case K::Triangle: return f.p2 + 2.0 * eta;
    case K::PowerCusp: return kInf;
    case K::Zero: return 0.0;
    default: return numeric_envelope_integral(f, eta, EnvInt::AbsUpper);
  }
}

// --- scaled-family conditions --------------------------------------------------

Remark4Report scaled_family_conditions(const TestFunction& f, const Eigen::ArrayXd& n_list,
                                       double kappa_exponent) {
  if (n_list.size() == 0) throw std::invalid_argument("scaled_family_conditions: empty n list");
  for (Eigen::Index i = 0; i < n_list.size(); ++i) {
    if (!(n_list[i] >= 2.0))
      throw std::invalid_argument("scaled_family_conditions: n must be >= 2");
    if (i > 0 && !(n_list[i] > n_list[i - 1]))
      throw std::invalid_argument("scaled_family_conditions: n list must be strictly increasing");
  }
  if (!(kappa_exponent > 0.0 && kappa_exponent < 1.0))
    throw std::invalid_argument("scaled_family_conditions: bandwidth exponent must lie in (0,1)");

  Remark4Report rep;
  const double abs_mass = f.integral_abs();
  const double sq_mass = f.integral_sq();
  rep.abs_integrable = std::isfinite(abs_mass);

  rep.sq_values.resize(n_list.size());
  for (Eigen::Index i = 0; i < n_list.size(); ++i)
    rep.sq_values[i] = std::pow(n_list[i], kappa_exponent - 1.0) * sq_mass;
  bool sq_mono = rep.sq_values.isFinite().all();
  for (Eigen::Index i = 1; i < rep.sq_values.size() && sq_mono; ++i)
    sq_mono = rep.sq_values[i] <= rep.sq_values[i - 1] + 1e-15;
  const double sq_last = rep.sq_values[rep.sq_values.size() - 1];
  rep.sq_vanishes = sq_mono && (sq_last < rep.sq_values[0] || sq_last == 0.0);

  const Eigen::ArrayXd a_grid = (Eigen::ArrayXd(5) << 1.0, 2.0, 4.0, 8.0, 16.0).finished();
  rep.tail_values.resize(a_grid.size());
  for (Eigen::Index j = 0; j < a_grid.size(); ++j) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n_list.size(); ++i)
      worst = std::max(worst, f.tail_abs(std::pow(n_list[i], kappa_exponent) * a_grid[j]));
    rep.tail_values[j] = worst;
  }
  rep.tails_vanish = rep.tail_values[rep.tail_values.size() - 1] <=
                     std::max(1e-9, 1e-6 * std::max(1.0, abs_mass));

  const double beta_last = std::pow(n_list[n_list.size() - 1], kappa_exponent);
  const double f_pos = f.integral_from_zero(kInf);
  const double f_neg = f.integral_from_zero(-kInf);
  double worst = 0.0;
  for (double y : {0.25, 0.5, 1.0}) {
    worst = std::max(worst, std::abs(f.integral_from_zero(beta_last * y) - f_pos));
    worst = std::max(worst, std::abs(f.integral_from_zero(-beta_last * y) - f_neg));
  }
  rep.cumulative_worst = worst;
  rep.cumulative_converges = worst <= 1e-6 * std::max(1.0, abs_mass);
  return rep;
}

// --- functional statistics ------------------------------------------------------

namespace {

// Shared core: factor * Σ_{k=start..K} f(scale*(v_k + shift)) with K = [n t].
double statistic_sum(const SamplePath& path, const TestFunction& f, double scale, double shift,
                     double t, Eigen::Index start_k, double factor) {
  if (!(t > 0.0) || t > path.horizon() + 1e-9)
    throw std::invalid_argument("functional statistic: t must lie in (0, horizon]");
  if (start_k < 1) throw std::invalid_argument("functional statistic: start index must be >= 1");
  const auto K =
      std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(t / path.dt + 1e-9)), path.values.size());
  CompensatedSum acc;
  for (Eigen::Index k = start_k; k <= K; ++k) acc.add(f(scale * (path.values[k - 1] + shift)));
  return factor * acc.value();
}

}  // namespace

double functional_statistic(const SamplePath& path, const TestFunction& f, double beta, double t,
                            double x, Eigen::Index start_k) {
  if (!(beta > 0.0)) throw std::invalid_argument("functional_statistic: beta must be > 0");
  return statistic_sum(path, f, beta, x, t, start_k, beta * path.dt);
}

Eigen::MatrixXd functional_statistic_batch(const SamplePath& path, const TestFunction& f,
                                           double beta, const Eigen::ArrayXd& t_list,
                                           const Eigen::ArrayXd& x_list, Eigen::Index start_k) {
  if (!(beta > 0.0)) throw std::invalid_argument("functional_statistic_batch: beta must be > 0");
  if (t_list.size() == 0 || x_list.size() == 0)
    throw std::invalid_argument("functional_statistic_batch: empty t or x list");
  for (Eigen::Index i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0) || t_list[i] > path.horizon() + 1e-9)
      throw std::invalid_argument("functional_statistic_batch: t must lie in (0, horizon]");
    if (i > 0 && !(t_list[i] > t_list[i - 1]))
      throw std::invalid_argument("functional_statistic_batch: t list must be strictly increasing");
  }
  if (start_k < 1) throw std::invalid_argument("functional_statistic_batch: start index must be >= 1");

  Eigen::MatrixXd out(t_list.size(), x_list.size());
  const double factor = beta * path.dt;
  for (Eigen::Index xi = 0; xi < x_list.size(); ++xi) {
    CompensatedSum acc;
    Eigen::Index k = start_k;
    for (Eigen::Index ti = 0; ti < t_list.size(); ++ti) {
      const auto K = std::min<Eigen::Index>(
          static_cast<Eigen::Index>(std::floor(t_list[ti] / path.dt + 1e-9)), path.values.size());
      for (; k <= K; ++k) acc.add(f(beta * (path.values[k - 1] + x_list[xi])));
      out(ti, xi) = factor * acc.value();
    }
  }
  return out;
}

double functional_presum(const SamplePath& path, const TestFunction& f, double beta, double x,
                         Eigen::Index start_k) {
  if (!(beta > 0.0)) throw std::invalid_argument("functional_presum: beta must be > 0");
  if (start_k < 1) throw std::invalid_argument("functional_presum: start index must be >= 1");
  CompensatedSum acc;
  const auto lim = std::min<Eigen::Index>(start_k - 1, path.values.size());
  for (Eigen::Index k = 1; k <= lim; ++k) acc.add(f(beta * (path.values[k - 1] + x)));
  return beta * path.dt * acc.value();
}

double lfsm_functional_discrete(const SamplePath& path, const TestFunction& f, double beta,
                                double t, double x) {
  if (!(beta > 0.0)) throw std::invalid_argument("lfsm_functional_discrete: beta must be > 0");
  return statistic_sum(path, f, beta, -x, t, 1, beta * path.dt);
}

double lfsm_functional_scaled(const SamplePath& path, const TestFunction& f, double kappa_c,
                              double hurst, double t, double x) {
  if (!(kappa_c > 0.0)) throw std::invalid_argument("lfsm_functional_scaled: kappa must be > 0");
  if (!(hurst > 0.0 && hurst < 1.0))
    throw std::invalid_argument("lfsm_functional_scaled: hurst must lie in (0,1)");
  const double b = std::pow(kappa_c, hurst);
  return statistic_sum(path, f, b, -x, t, 1, b * path.dt);
}

}  // namespace ltlab
