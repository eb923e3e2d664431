#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace specdisc {

/// Eight-point Gauss-Legendre rule on [-1, 1], plus partial[j][m], the
/// integral of the m-th Lagrange basis polynomial over [-1, nodes[j]].
struct GaussRule {
  static constexpr std::size_t kOrder = 8;
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};
  std::array<std::array<double, kOrder>, kOrder> partial{};
  /// Barycentric weights for the ten interpolation points -1, nodes..., 1.
  std::array<double, kOrder + 2> bary{};
};

const GaussRule& gauss_rule();

/// Partition of [lo, hi] into cells with the reference point theta as an edge.
class CellGrid {
 public:
  CellGrid() = default;
  /// Edges must be strictly increasing and contain theta.
  CellGrid(std::vector<double> edges, double theta);

  std::size_t cells() const { return edges_.size() - 1; }
  double lo() const { return edges_.front(); }
  double hi() const { return edges_.back(); }
  double theta() const { return theta_; }
  std::size_t theta_edge() const { return theta_edge_; }
  double edge(std::size_t k) const { return edges_[k]; }
  const std::vector<double>& edges() const { return edges_; }
  double width(std::size_t k) const { return edges_[k + 1] - edges_[k]; }
  double node(std::size_t k, std::size_t j) const;
  /// Cell containing x (clamped to the grid).
  std::size_t locate(double x) const;

 private:
  std::vector<double> edges_;
  double theta_ = 0.0;
  std::size_t theta_edge_ = 0;
};

/// Grid with cells no wider than max_width(x) at their left end, theta and
/// every point of `forced` as edges.
CellGrid make_grid(double lo, double hi, double theta, const std::function<double(double)>& max_width,
                   const std::vector<double>& forced = {});

/// A function sampled at the edges and Gauss nodes of a grid.
struct GridValues {
  std::vector<double> edge;
  std::vector<double> node;  // cell-major, GaussRule::kOrder per cell

  static GridValues sample(const CellGrid& g, const std::function<double(double)>& f);
  double& at(std::size_t cell, std::size_t j) { return node[cell * GaussRule::kOrder + j]; }
  double at(std::size_t cell, std::size_t j) const { return node[cell * GaussRule::kOrder + j]; }
};

/// x -> integral from theta to x of the integrand, with signed orientation
/// left of theta, at every edge and node. Only integrand.node is read.
GridValues integrate_from_theta(const CellGrid& g, const GridValues& integrand);

/// Integral of the integrand over each cell.
std::vector<double> cell_integrals(const CellGrid& g, const GridValues& integrand);

/// Barycentric interpolation inside the cell containing x.
double interpolate(const CellGrid& g, const GridValues& v, double x);

/// Adaptive Gauss-Kronrod integral over [lo, hi] (hi < lo gives the signed
/// result). Throws InputError when the integral does not settle or is not finite.
double adaptive_integral(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-12);

/// Finite-difference weights for the derivative of order `deriv` at x0 from
/// the given points (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& points, int deriv);

}  // namespace specdisc
