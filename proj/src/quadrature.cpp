#include "specdisc/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "specdisc/errors.hpp"

namespace specdisc {

namespace {

constexpr std::size_t K = GaussRule::kOrder;

double lagrange(const std::array<double, K>& t, std::size_t m, double x) {
  double p = 1.0;
  for (std::size_t i = 0; i < K; ++i)
    if (i != m) p *= (x - t[i]) / (t[m] - t[i]);
  return p;
}

GaussRule build_rule() {
  using Rule = boost::math::quadrature::gauss<double, K>;
  GaussRule r;
  // Boost stores the nonnegative half of the symmetric rule.
  const auto& ab = Rule::abscissa();
  const auto& w = Rule::weights();
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < ab.size(); ++i) {
    pts.emplace_back(ab[i], w[i]);
    if (ab[i] != 0.0) pts.emplace_back(-ab[i], w[i]);
  }
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 0; i < K; ++i) {
    r.nodes[i] = pts[i].first;
    r.weights[i] = pts[i].second;
  }
  // Each Lagrange basis polynomial has degree 7, so the same rule mapped to
  // [-1, t_j] integrates it exactly.
  for (std::size_t j = 0; j < K; ++j) {
    const double half = 0.5 * (r.nodes[j] + 1.0);
    for (std::size_t m = 0; m < K; ++m) {
      double s = 0.0;
      for (std::size_t q = 0; q < K; ++q) {
        const double x = -1.0 + half * (r.nodes[q] + 1.0);
        s += r.weights[q] * lagrange(r.nodes, m, x);
      }
      r.partial[j][m] = half * s;
    }
  }
  std::array<double, K + 2> t{};
  t[0] = -1.0;
  for (std::size_t i = 0; i < K; ++i) t[i + 1] = r.nodes[i];
  t[K + 1] = 1.0;
  for (std::size_t i = 0; i < K + 2; ++i) {
    double p = 1.0;
    for (std::size_t j = 0; j < K + 2; ++j)
      if (j != i) p *= t[i] - t[j];
    r.bary[i] = 1.0 / p;
  }
  return r;
}

}  // namespace

const GaussRule& gauss_rule() {
  static const GaussRule rule = build_rule();
  return rule;
}

CellGrid::CellGrid(std::vector<double> edges, double theta) : edges_(std::move(edges)), theta_(theta) {
  if (edges_.size() < 2) throw InputError("grid needs at least one cell");
  for (std::size_t k = 0; k + 1 < edges_.size(); ++k)
    if (!(edges_[k + 1] > edges_[k])) throw InputError("grid edges must increase strictly");
  auto it = std::find(edges_.begin(), edges_.end(), theta);
  if (it == edges_.end()) throw InputError("theta must be a grid edge");
  theta_edge_ = static_cast<std::size_t>(it - edges_.begin());
}

double CellGrid::node(std::size_t k, std::size_t j) const {
  return edges_[k] + 0.5 * width(k) * (gauss_rule().nodes[j] + 1.0);
}

std::size_t CellGrid::locate(double x) const {
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  if (it == edges_.begin()) return 0;
  const auto k = static_cast<std::size_t>(it - edges_.begin()) - 1;
  return std::min(k, cells() - 1);
}

CellGrid make_grid(double lo, double hi, double theta, const std::function<double(double)>& max_width,
                   const std::vector<double>& forced) {
  if (!(lo <= theta && theta <= hi && lo < hi)) throw InputError("grid needs lo <= theta <= hi, lo < hi");
  std::vector<double> anchors{lo, theta, hi};
  for (double f : forced)
    if (f > lo && f < hi) anchors.push_back(f);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  std::vector<double> edges{anchors.front()};
  for (std::size_t i = 0; i + 1 < anchors.size(); ++i) {
    const double end = anchors[i + 1];
    double x = anchors[i];
    while (x < end) {
      double w = max_width(x);
      if (!(w > 0) || !std::isfinite(w)) throw InputError("grid width must be positive");
      // Avoid a sliver in front of the next anchor.
      double next = x + w >= end || end - (x + w) < 0.1 * w ? end : x + w;
      edges.push_back(next);
      x = next;
    }
  }
  return CellGrid(std::move(edges), theta);
}

GridValues GridValues::sample(const CellGrid& g, const std::function<double(double)>& f) {
  GridValues v;
  v.edge.resize(g.cells() + 1);
  v.node.resize(g.cells() * K);
  for (std::size_t k = 0; k <= g.cells(); ++k) v.edge[k] = f(g.edge(k));
  for (std::size_t k = 0; k < g.cells(); ++k)
    for (std::size_t j = 0; j < K; ++j) v.at(k, j) = f(g.node(k, j));
  return v;
}

std::vector<double> cell_integrals(const CellGrid& g, const GridValues& integrand) {
  const GaussRule& r = gauss_rule();
  std::vector<double> out(g.cells());
  for (std::size_t k = 0; k < g.cells(); ++k) {
    double s = 0.0;
    for (std::size_t m = 0; m < K; ++m) s += r.weights[m] * integrand.at(k, m);
    out[k] = 0.5 * g.width(k) * s;
  }
  return out;
}

GridValues integrate_from_theta(const CellGrid& g, const GridValues& integrand) {
  const GaussRule& r = gauss_rule();
  GridValues out;
  out.edge.assign(g.cells() + 1, 0.0);
  out.node.assign(g.cells() * K, 0.0);
  const std::size_t t = g.theta_edge();
  for (std::size_t k = t; k < g.cells(); ++k) {
    const double h = 0.5 * g.width(k);
    double total = 0.0;
    for (std::size_t m = 0; m < K; ++m) total += r.weights[m] * integrand.at(k, m);
    for (std::size_t j = 0; j < K; ++j) {
      double s = 0.0;
      for (std::size_t m = 0; m < K; ++m) s += r.partial[j][m] * integrand.at(k, m);
      out.at(k, j) = out.edge[k] + h * s;
    }
    out.edge[k + 1] = out.edge[k] + h * total;
  }
  for (std::size_t k = t; k-- > 0;) {
    const double h = 0.5 * g.width(k);
    double total = 0.0;
    for (std::size_t m = 0; m < K; ++m) total += r.weights[m] * integrand.at(k, m);
    for (std::size_t j = 0; j < K; ++j) {
      double s = 0.0;
      for (std::size_t m = 0; m < K; ++m) s += (r.weights[m] - r.partial[j][m]) * integrand.at(k, m);
      out.at(k, j) = out.edge[k + 1] - h * s;
    }
    out.edge[k] = out.edge[k + 1] - h * total;
  }
  return out;
}

double interpolate(const CellGrid& g, const GridValues& v, double x) {
  const GaussRule& r = gauss_rule();
  const std::size_t k = g.locate(x);
  const double t = 2.0 * (x - g.edge(k)) / g.width(k) - 1.0;
  std::array<double, K + 2> pts{}, vals{};
  pts[0] = -1.0;
  vals[0] = v.edge[k];
  for (std::size_t j = 0; j < K; ++j) {
    pts[j + 1] = r.nodes[j];
    vals[j + 1] = v.at(k, j);
  }
  pts[K + 1] = 1.0;
  vals[K + 1] = v.edge[k + 1];
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < K + 2; ++i) {
    const double d = t - pts[i];
    if (d == 0.0) return vals[i];
    const double c = r.bary[i] / d;
    num += c * vals[i];
    den += c;
  }
  return num / den;
}

double adaptive_integral(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (lo == hi) return 0.0;
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, tol, &err);
  if (!std::isfinite(v) || err > 1e-6 * std::max(1.0, std::fabs(v)))
    throw InputError("integral over [" + std::to_string(lo) + ", " + std::to_string(hi) +
                     "] did not settle (error estimate " + std::to_string(err) +
                     "); the coefficient ratio is not locally integrable there");
  return v;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int deriv) {
  const auto n = x.size();
  const auto M = static_cast<std::size_t>(deriv);
  std::vector<std::vector<std::vector<double>>> d(
      M + 1, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  d[0][0][0] = 1.0;
  double c1 = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    double c2 = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      for (std::size_t m = 0; m <= std::min(i, M); ++m) {
        const double prev = m ? d[m - 1][i - 1][j] : 0.0;
        d[m][i][j] = ((x[i] - x0) * d[m][i - 1][j] - static_cast<double>(m) * prev) / c3;
      }
    }
    for (std::size_t m = 0; m <= std::min(i, M); ++m) {
      const double prev = m ? d[m - 1][i - 1][i - 1] : 0.0;
      d[m][i][i] = c1 / c2 * (static_cast<double>(m) * prev - (x[i - 1] - x0) * d[m][i - 1][i - 1]);
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = d[M][n - 1][j];
  return w;
}

}  // namespace specdisc
