#include "specdisc/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "specdisc/errors.hpp"
#include "specdisc/log_scalar.hpp"

namespace specdisc {

namespace {

constexpr std::size_t K = GaussRule::kOrder;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double d1(const ScalarFunction& f, double x) {
  const double s = 1e-3 * std::max(1.0, std::fabs(x));
  return (-f(x + 2 * s) + 8 * f(x + s) - 8 * f(x - s) + f(x - 2 * s)) / (12 * s);
}

double d2(const ScalarFunction& f, double x) {
  const double s = 1e-3 * std::max(1.0, std::fabs(x));
  return (-f(x + 2 * s) + 16 * f(x + s) - 30 * f(x) + 16 * f(x - s) - f(x - 2 * s)) / (12 * s * s);
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

ScalarFunction::ScalarFunction() : ScalarFunction(Expr::constant(0.0, "x")) {}

ScalarFunction::ScalarFunction(const Expr& e) : f_([e](double x) { return e(x); }), text_(e.to_string()) {
  if (e.is_constant()) constant_ = e(0.0);
}

ScalarFunction::ScalarFunction(std::function<double(double)> f, std::string text)
    : f_(std::move(f)), text_(std::move(text)) {}

ScalarFunction ScalarFunction::parse(std::string_view text) { return ScalarFunction(Expr::parse(text, "x")); }

ScalarFunction ScalarFunction::constant(double v) { return ScalarFunction(Expr::constant(v, "x")); }

std::vector<std::string> validate_diffusion(const DiffusionModel& m, double lo, double hi,
                                            std::size_t probes) {
  std::vector<std::string> issues;
  bool a_bad = false, b_bad = false, c_bad = false;
  for (std::size_t i = 0; i < probes; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(probes - 1);
    const double a = m.a(x), b = m.b(x), c = m.c(x);
    if (!a_bad && !(a > 0 && std::isfinite(a))) {
      issues.push_back("a must be positive and finite; a(" + num(x) + ") = " + num(a));
      a_bad = true;
    }
    if (!b_bad && !std::isfinite(b)) {
      issues.push_back("b must be finite; b(" + num(x) + ") = " + num(b));
      b_bad = true;
    }
    if (!c_bad && !(c >= 0 && std::isfinite(c))) {
      issues.push_back("c must be nonnegative and finite; c(" + num(x) + ") = " + num(c));
      c_bad = true;
    }
  }
  return issues;
}

MeasurePoint C_and_measures(const DiffusionModel& m, double x) {
  const double C = adaptive_integral([&](double t) { return m.b(t) / m.a(t); }, m.theta, x);
  return {C, std::exp(C) / m.a(x), std::exp(-C)};
}

DriftIntegral::DriftIntegral(const DiffusionModel& m, const CellGrid& grid)
    : ratio_([a = m.a, b = m.b](double t) { return b(t) / a(t); }), grid_(grid) {
  GridValues r;
  r.node.resize(grid_.cells() * K);
  for (std::size_t k = 0; k < grid_.cells(); ++k)
    for (std::size_t j = 0; j < K; ++j) r.at(k, j) = ratio_(grid_.node(k, j));
  C_ = integrate_from_theta(grid_, r);
}

double DriftIntegral::operator()(double x) const {
  std::size_t k = grid_.locate(x);
  if (x >= grid_.hi()) k = grid_.cells();
  return C_.edge[k] + adaptive_integral(ratio_, grid_.edge(k), x);
}

namespace {

struct PicardSetup {
  std::shared_ptr<const CellGrid> grid;
  GridValues g12;  // e^-C
  GridValues g21;  // c e^C / a
};

PicardSetup make_setup(const DiffusionModel& m, const PicardOptions& o) {
  if (!(o.lo <= m.theta && m.theta <= o.hi && o.lo < o.hi))
    throw InputError("Picard interval must contain theta");
  if (!(o.tol > 0)) throw InputError("tolerance must be positive");
  const double wmax = o.max_cell_width;
  auto width = [&](double x) {
    const double g = std::sqrt(std::fabs(m.c(x) / m.a(x)));
    return wmax / (1.0 + (std::isfinite(g) ? g : 0.0));
  };
  PicardSetup s;
  s.grid = std::make_shared<const CellGrid>(make_grid(o.lo, o.hi, m.theta, width));
  const DriftIntegral C(m, *s.grid);
  const auto& cv = C.values();
  s.g12.node.resize(cv.node.size());
  s.g21.node.resize(cv.node.size());
  for (std::size_t k = 0; k < s.grid->cells(); ++k) {
    for (std::size_t j = 0; j < K; ++j) {
      const double x = s.grid->node(k, j);
      const double Cx = cv.at(k, j);
      s.g12.at(k, j) = std::exp(-Cx);
      s.g21.at(k, j) = m.c(x) * std::exp(Cx) / m.a(x);
    }
  }
  for (double v : s.g12.node)
    if (!std::isfinite(v)) throw ConsistencyError("e^-C overflows on the Picard interval");
  for (double v : s.g21.node)
    if (!std::isfinite(v)) throw ConsistencyError("c e^C / a overflows on the Picard interval");
  return s;
}

GridValues times(const GridValues& g, const GridValues& f) {
  GridValues out;
  out.node.resize(g.node.size());
  for (std::size_t i = 0; i < g.node.size(); ++i) out.node[i] = g.node[i] * f.node[i];
  return out;
}

GridPair apply(const PicardSetup& s, const GridPair& F) {
  return {integrate_from_theta(*s.grid, times(s.g12, F.flux)),
          integrate_from_theta(*s.grid, times(s.g21, F.f))};
}

GridPair constant_pair(const CellGrid& g, double v0, double v1) {
  GridPair p;
  p.f.edge.assign(g.cells() + 1, v0);
  p.f.node.assign(g.cells() * K, v0);
  p.flux.edge.assign(g.cells() + 1, v1);
  p.flux.node.assign(g.cells() * K, v1);
  return p;
}

void add_constant(GridValues& v, double c) {
  for (double& x : v.edge) x += c;
  for (double& x : v.node) x += c;
}

double max_abs(const GridValues& v) {
  double m = 0.0;
  for (double x : v.edge) m = std::max(m, std::fabs(x));
  for (double x : v.node) m = std::max(m, std::fabs(x));
  return m;
}

/// Component-wise relative difference, with a floor of 1e-12 of the
/// component's size so that exact zeros at theta do not divide by zero.
double relative_gap(const GridValues& now, const GridValues& before) {
  const double floor = 1e-12 * max_abs(now) + std::numeric_limits<double>::min();
  double g = 0.0;
  auto upd = [&](double a, double b) {
    g = std::max(g, std::fabs(a - b) / std::max(std::fabs(a), floor));
  };
  for (std::size_t i = 0; i < now.edge.size(); ++i) upd(now.edge[i], before.edge[i]);
  for (std::size_t i = 0; i < now.node.size(); ++i) upd(now.node[i], before.node[i]);
  return g;
}

bool nondecreasing_right(const CellGrid& g, const GridValues& now, const GridValues& before) {
  constexpr double slack = 4 * std::numeric_limits<double>::epsilon();
  for (std::size_t k = g.theta_edge(); k <= g.cells(); ++k)
    if (now.edge[k] < before.edge[k] - slack * std::fabs(before.edge[k])) return false;
  for (std::size_t k = g.theta_edge(); k < g.cells(); ++k)
    for (std::size_t j = 0; j < K; ++j)
      if (now.at(k, j) < before.at(k, j) - slack * std::fabs(before.at(k, j))) return false;
  return true;
}

}  // namespace

PicardSolution picard_solve(const DiffusionModel& m, const PicardOptions& o) {
  const PicardSetup s = make_setup(m, o);
  PicardSolution sol;
  sol.grid = s.grid;
  GridPair F = constant_pair(*s.grid, o.gamma0, o.gamma1);
  if (o.keep_iterates) sol.iterates.push_back(F);
  for (std::size_t it = 1; it <= o.max_iter; ++it) {
    GridPair next = apply(s, F);
    add_constant(next.f, o.gamma0);
    add_constant(next.flux, o.gamma1);
    const double gap = std::max(relative_gap(next.f, F.f), relative_gap(next.flux, F.flux));
    if (!nondecreasing_right(*s.grid, next.f, F.f) || !nondecreasing_right(*s.grid, next.flux, F.flux))
      sol.monotone = false;
    F = std::move(next);
    if (o.keep_iterates) sol.iterates.push_back(F);
    sol.iterations = it;
    sol.sup_norm_gap = gap;
    if (!std::isfinite(gap)) throw ConsistencyError("Picard iterates overflow");
    if (gap < o.tol) {
      sol.converged = true;
      break;
    }
  }
  GridPair check = apply(s, F);
  add_constant(check.f, o.gamma0);
  add_constant(check.flux, o.gamma1);
  sol.residual = std::max(relative_gap(check.f, F.f), relative_gap(check.flux, F.flux));
  sol.F = std::move(F);

  std::vector<double> seq;
  for (std::size_t k = 0; k < s.grid->cells(); ++k) {
    seq.push_back(sol.F.f.edge[k]);
    for (std::size_t j = 0; j < K; ++j) seq.push_back(sol.F.f.at(k, j));
  }
  seq.push_back(sol.F.f.edge.back());
  int last = 0;
  for (double v : seq) {
    const int sg = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (sg != 0) {
      if (last != 0 && sg != last) ++sol.sign_changes;
      last = sg;
    }
  }
  return sol;
}

PeanoBakerTerms peano_baker_terms(const DiffusionModel& m, const PicardOptions& o, std::size_t n_terms) {
  const PicardSetup s = make_setup(m, o);
  PeanoBakerTerms pb;
  pb.grid = s.grid;
  if (n_terms == 0) return pb;
  pb.terms.push_back(constant_pair(*s.grid, o.gamma0, o.gamma1));
  while (pb.terms.size() < n_terms) pb.terms.push_back(apply(s, pb.terms.back()));
  return pb;
}

double harmonic_residual(const DiffusionModel& m, const ScalarFunction& psi, double lo, double hi,
                         std::size_t grid_n, int order) {
  if (grid_n < 8) throw InputError("harmonic_residual needs at least 8 grid intervals");
  if (order < 2 || order % 2) throw InputError("stencil order must be even and at least 2");
  const double h = (hi - lo) / static_cast<double>(grid_n);
  std::vector<double> xs(grid_n + 1), vs(grid_n + 1);
  for (std::size_t i = 0; i <= grid_n; ++i) {
    xs[i] = lo + h * static_cast<double>(i);
    vs[i] = psi(xs[i]);
  }
  const auto half = static_cast<std::size_t>(order / 2);
  const auto one_sided = static_cast<std::size_t>(order + 2);
  double worst = 0.0;
  for (std::size_t i = 0; i <= grid_n; ++i) {
    std::size_t first, count;
    if (i >= half && i + half <= grid_n) {
      first = i - half;
      count = 2 * half + 1;
    } else {
      count = one_sided;
      first = i < half ? 0 : grid_n + 1 - count;
    }
    std::vector<double> pts(count);
    for (std::size_t j = 0; j < count; ++j) pts[j] = static_cast<double>(first + j) - static_cast<double>(i);
    const auto w1 = fd_weights(0.0, pts, 1);
    const auto w2 = fd_weights(0.0, pts, 2);
    double p1 = 0.0, p2 = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      p1 += w1[j] * vs[first + j];
      p2 += w2[j] * vs[first + j];
    }
    p1 /= h;
    p2 /= h * h;
    const double x = xs[i];
    const double a = m.a(x);
    const double r = p2 + p1 * p1 + m.b(x) / a * p1 - m.c(x) / a;
    worst = std::max(worst, std::fabs(r));
  }
  return worst;
}

namespace {

TransformResult finish_transform(DiffusionModel out, double lo, double hi) {
  TransformResult r;
  r.min_killing = std::numeric_limits<double>::infinity();
  constexpr std::size_t probes = 200;
  for (std::size_t i = 0; i < probes; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(probes - 1);
    r.min_killing = std::min(r.min_killing, out.c(x));
  }
  r.negative_killing = r.min_killing < 0;
  r.model = std::move(out);
  return r;
}

}  // namespace

TransformResult h_transform(const DiffusionModel& tilde, const ScalarFunction& psi, double lo, double hi) {
  DiffusionModel out = tilde;
  const auto a = tilde.a, b = tilde.b;
  out.name = tilde.name + " transformed by psi = " + psi.text();
  out.b = ScalarFunction([a, b, psi](double x) { return b(x) - 2.0 * a(x) * d1(psi, x); },
                         "(" + b.text() + ") - 2(" + a.text() + ") psi'");
  out.c = ScalarFunction(
      [a, b, psi](double x) {
        const double p1 = d1(psi, x);
        return a(x) * d2(psi, x) + b(x) * p1 - a(x) * p1 * p1;
      },
      "a psi'' + b psi' - a psi'^2 with psi = " + psi.text());
  return finish_transform(std::move(out), lo, hi);
}

TransformResult h_transform_to_drift(const DiffusionModel& tilde, const ScalarFunction& target, double lo,
                                     double hi) {
  DiffusionModel out = tilde;
  const auto a = tilde.a, bt = tilde.b;
  out.name = tilde.name + " with drift " + target.text();
  out.b = target;
  const ScalarFunction q([a, bt, target](double x) { return (bt(x) - target(x)) / a(x); }, "(b~ - b)/a~");
  out.c = ScalarFunction(
      [a, bt, target, q](double x) {
        const double bx = target(x), btx = bt(x), ax = a(x);
        return -0.5 * ((bx * bx - btx * btx) / (2.0 * ax) - ax * d1(q, x));
      },
      "-(1/2)[(b^2 - b~^2)/(2a~) - a~((b~ - b)/a~)']");
  return finish_transform(std::move(out), lo, hi);
}

DiffusionModel killing_free_part(const DiffusionModel& m, const ScalarFunction& psi) {
  DiffusionModel out = m;
  const auto a = m.a, b = m.b;
  out.name = m.name + " without killing";
  out.b = ScalarFunction([a, b, psi](double x) { return b(x) + 2.0 * a(x) * d1(psi, x); },
                         "(" + b.text() + ") + 2(" + a.text() + ") psi'");
  out.c = ScalarFunction::constant(0.0);
  return out;
}

DiffusionModel mirror(const DiffusionModel& m) {
  DiffusionModel out;
  out.name = m.name + " (left half mirrored)";
  out.a = mirror(m.a);
  const auto b = m.b;
  out.b = ScalarFunction([b](double x) { return -b(-x); }, "-(" + b.text() + ") at -x");
  out.c = mirror(m.c);
  out.domain = Domain::HalfLine;
  out.theta = -m.theta;
  return out;
}

ScalarFunction mirror(const ScalarFunction& f) {
  return ScalarFunction([f](double x) { return f(-x); }, "(" + f.text() + ") at -x");
}

ScalarFunction log_abs(const PicardSolution& s) {
  auto grid = s.grid;
  auto values = std::make_shared<const GridValues>(s.F.f);
  const double span = grid->hi() - grid->lo();
  return ScalarFunction(
      [grid, values, span](double x) {
        if (x < grid->lo() - 1e-9 * span || x > grid->hi() + 1e-9 * span)
          throw InputError("Picard harmonic function evaluated outside its interval");
        const double v = interpolate(*grid, *values, x);
        if (v == 0.0) throw ConsistencyError("Picard harmonic function vanishes at x = " + num(x));
        return std::log(std::fabs(v));
      },
      "log|h| from successive approximation");
}

namespace {

double cell_log_integral(const CellGrid& g, std::size_t k, const GridValues& logf) {
  const GaussRule& r = gauss_rule();
  double acc = kNegInf;
  for (std::size_t m = 0; m < K; ++m) acc = log_add(acc, logf.at(k, m) + std::log(r.weights[m]));
  return acc + std::log(0.5 * g.width(k));
}

double spread(const GridValues& v, std::size_t k) {
  double lo = std::min(v.edge[k], v.edge[k + 1]), hi = std::max(v.edge[k], v.edge[k + 1]);
  for (std::size_t j = 0; j < K; ++j) {
    lo = std::min(lo, v.at(k, j));
    hi = std::max(hi, v.at(k, j));
  }
  return hi - lo;
}

}  // namespace

HalfLineIntegrals::HalfLineIntegrals(const DiffusionModel& m, const ScalarFunction& psi,
                                     const ContinuousOptions& o,
                                     const std::vector<double>& extra_points) {
  if (!(o.x_max > 0)) throw InputError("x_max must be positive");
  X_ = o.horizon > 0 ? o.horizon : 4.0 * o.x_max;
  if (!(X_ > o.x_max)) throw InputError("horizon must exceed x_max");
  const double lo_sample = o.x_max / o.sample_span;
  for (double x = o.x_max; x >= lo_sample; x /= o.sample_ratio) samples_.push_back(x);
  std::reverse(samples_.begin(), samples_.end());
  std::vector<double> forced = samples_;
  for (double x : extra_points) {
    if (!(x > 0 && x < X_)) throw InputError("extra evaluation points must lie in (0, horizon)");
    forced.push_back(x);
  }
  const double theta = m.theta;
  if (!(theta >= 0 && theta < X_)) throw InputError("theta must lie in [0, horizon)");

  auto log_a_term = [&](double x, double C) { return 2.0 * psi(x) + C - std::log(m.a(x)); };
  auto log_b_term = [&](double x, double C) { return -2.0 * psi(x) - C; };

  std::vector<double> edges =
      make_grid(0.0, X_, theta, [](double x) { return 0.05 * (1.0 + std::fabs(x)); }, forced).edges();
  GridValues la, lb;
  constexpr std::size_t kMaxPasses = 40;
  constexpr std::size_t kMaxCells = 2000000;
  for (std::size_t pass = 0;; ++pass) {
    grid_ = CellGrid(edges, theta);
    const DriftIntegral C(m, grid_);
    const auto& cv = C.values();
    la.edge.resize(grid_.cells() + 1);
    lb.edge.resize(grid_.cells() + 1);
    la.node.resize(grid_.cells() * K);
    lb.node.resize(grid_.cells() * K);
    for (std::size_t k = 0; k <= grid_.cells(); ++k) {
      la.edge[k] = log_a_term(grid_.edge(k), cv.edge[k]);
      lb.edge[k] = log_b_term(grid_.edge(k), cv.edge[k]);
    }
    for (std::size_t k = 0; k < grid_.cells(); ++k) {
      for (std::size_t j = 0; j < K; ++j) {
        la.at(k, j) = log_a_term(grid_.node(k, j), cv.at(k, j));
        lb.at(k, j) = log_b_term(grid_.node(k, j), cv.at(k, j));
      }
    }
    std::vector<double> refined{edges.front()};
    bool split = false;
    for (std::size_t k = 0; k < grid_.cells(); ++k) {
      if (spread(la, k) > o.max_spread || spread(lb, k) > o.max_spread) {
        refined.push_back(0.5 * (edges[k] + edges[k + 1]));
        split = true;
      }
      refined.push_back(edges[k + 1]);
    }
    if (!split || pass + 1 == kMaxPasses || refined.size() > kMaxCells) break;
    edges = std::move(refined);
  }

  const std::size_t n = grid_.cells();
  prefix_A_.assign(n + 1, kNegInf);
  prefix_B_.assign(n + 1, kNegInf);
  suffix_A_.assign(n + 1, kNegInf);
  suffix_B_.assign(n + 1, kNegInf);
  std::vector<double> IA(n), IB(n);
  for (std::size_t k = 0; k < n; ++k) {
    IA[k] = cell_log_integral(grid_, k, la);
    IB[k] = cell_log_integral(grid_, k, lb);
  }
  for (std::size_t k = 0; k < n; ++k) {
    prefix_A_[k + 1] = log_add(prefix_A_[k], IA[k]);
    prefix_B_[k + 1] = log_add(prefix_B_[k], IB[k]);
  }
  for (std::size_t k = n; k-- > 0;) {
    suffix_A_[k] = log_add(suffix_A_[k + 1], IA[k]);
    suffix_B_[k] = log_add(suffix_B_[k + 1], IB[k]);
  }

  const DriftIntegral C(m, grid_);
  cert_A_ = certify_integral([&](double x) { return log_a_term(x, C(x)); }, X_, o.tail);
  cert_B_ = certify_integral([&](double x) { return log_b_term(x, C(x)); }, X_, o.tail);
}

std::size_t HalfLineIntegrals::edge_index(double x) const {
  const auto& e = grid_.edges();
  auto it = std::lower_bound(e.begin(), e.end(), x);
  if (it == e.end() || *it != x) throw InputError("evaluation point " + num(x) + " is not a grid edge");
  return static_cast<std::size_t>(it - e.begin());
}

double HalfLineIntegrals::log_prefix_A(double x) const { return prefix_A_[edge_index(x)]; }
double HalfLineIntegrals::log_prefix_B(double x) const { return prefix_B_[edge_index(x)]; }

double HalfLineIntegrals::log_tail_A(double x) const {
  if (cert_A_.status != SeriesStatus::Converges) throw InputError("mu(h^2) tail is not certified convergent");
  return log_add(suffix_A_[edge_index(x)], cert_A_.log_remainder);
}

double HalfLineIntegrals::log_tail_B(double x) const {
  if (cert_B_.status != SeriesStatus::Converges)
    throw InputError("nu_hat(h^-2) tail is not certified convergent");
  return log_add(suffix_B_[edge_index(x)], cert_B_.log_remainder);
}

namespace {

std::vector<TracePoint> half_trace(const HalfLineIntegrals& I, Branch b) {
  std::vector<TracePoint> t;
  for (double x : I.samples())
    t.push_back({x, b == Branch::Min ? I.log_product_min(x) : I.log_product_max(x)});
  return t;
}

CriterionReport half_report(const HalfLineIntegrals& I, const ContinuousOptions& o) {
  return decide_verdict(
      I.A_certificate(), I.B_certificate(), o.mode, [&](Branch b) { return half_trace(I, b); },
      o.x_max / 10.0, o.delta, o.log_level_floor);
}

}  // namespace

ContinuousReport criteria_halfline(const DiffusionModel& m, const ScalarFunction& psi,
                                   const ContinuousOptions& o) {
  const HalfLineIntegrals I(m, psi, o);
  ContinuousReport rep;
  rep.x_max = o.x_max;
  rep.horizon = I.horizon();
  rep.result = half_report(I, o);
  return rep;
}

ContinuousReport criteria_wholeline(const DiffusionModel& m, const ScalarFunction& psi,
                                    const ContinuousOptions& o) {
  if (m.domain != Domain::WholeLine) throw InputError("criteria_wholeline needs a whole-line model");
  if (m.theta != 0.0) throw InputError("the whole-line criterion uses theta = 0");
  DiffusionModel right = m;
  right.domain = Domain::HalfLine;
  const HalfLineIntegrals R(right, psi, o);
  const HalfLineIntegrals L(mirror(m), mirror(psi), o);
  auto certified = [](SeriesStatus s) { return s != SeriesStatus::Unknown; };
  const SeriesStatus ra = R.A_certificate().status, rb = R.B_certificate().status;
  const SeriesStatus la = L.A_certificate().status, lb = L.B_certificate().status;
  if (certified(ra) && certified(rb) && certified(la) && certified(lb) && (ra != la || rb != lb))
    throw InputError(std::string("finiteness pattern (right: ") + to_string(ra) + "/" + to_string(rb) +
                     ", left: " + to_string(la) + "/" + to_string(lb) +
                     ") is outside the implemented symmetric case");
  ContinuousReport rep;
  rep.x_max = o.x_max;
  rep.horizon = R.horizon();
  rep.right = half_report(R, o);
  rep.left = half_report(L, o);
  // Pattern agreement lets one side's certificates stand for both.
  const SeriesCertificate& A = ra == SeriesStatus::Unknown ? R.A_certificate() : L.A_certificate();
  const SeriesCertificate& B = rb == SeriesStatus::Unknown ? R.B_certificate() : L.B_certificate();
  rep.result = decide_verdict(
      A, B, o.mode,
      [&](Branch b) {
        auto r = half_trace(R, b);
        const auto l = half_trace(L, b);
        for (std::size_t i = 0; i < r.size(); ++i) r[i].log_S = log_add(r[i].log_S, l[i].log_S);
        return r;
      },
      o.x_max / 10.0, o.delta, o.log_level_floor);
  rep.result.notes.push_back("two-sided sums of the half-line products");
  return rep;
}

MolchanovCheck molchanov_check(const DiffusionModel& m, double x_max, double delta) {
  MolchanovCheck out;
  constexpr std::size_t probes = 200;
  bool unit_a = true, zero_b = true;
  double c_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probes; ++i) {
    const double x = x_max * static_cast<double>(i) / static_cast<double>(probes - 1);
    unit_a = unit_a && std::fabs(m.a(x) - 1.0) < 1e-14;
    zero_b = zero_b && std::fabs(m.b(x)) < 1e-14;
    c_min = std::min(c_min, m.c(x));
  }
  out.applicable = unit_a && zero_b && std::isfinite(c_min);
  if (!out.applicable) {
    out.conclusion = "undecided";
    return out;
  }
  std::vector<double> lx, ly;
  bool positive = true;
  for (double x : std::vector<double>{0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
    const double X = x * x_max;
    const double w = adaptive_integral([&](double t) { return m.c(t); }, X, X + 1.0);
    if (!(w > 0)) {
      positive = false;
      break;
    }
    lx.push_back(std::log(X));
    ly.push_back(std::log(w));
  }
  if (!positive) {
    out.conclusion = "not discrete";
    return out;
  }
  const LineFit f = fit_line(lx, ly);
  out.slope = f.slope;
  if (f.slope - 2.0 * f.se > delta) {
    out.conclusion = "discrete";
  } else if (std::fabs(f.slope) + 2.0 * f.se <= delta) {
    out.conclusion = "not discrete";
  } else {
    out.conclusion = "undecided";
  }
  return out;
}

}  // namespace specdisc
