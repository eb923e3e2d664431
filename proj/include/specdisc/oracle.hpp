#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "specdisc/continuous.hpp"
#include "specdisc/model.hpp"

namespace specdisc {

/// Truncation boundary: Dirichlet approximates the minimal domain (f_k = 0
/// for k >= N), Free the maximal one (the outgoing rate b_{N-1} is dropped).
enum class Boundary { Dirichlet, Free };

const char* to_string(Boundary b);

/// Symmetric tridiagonal matrix: diag[0..N-1], off[0..N-2].
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;
  Boundary boundary = Boundary::Dirichlet;

  std::size_t size() const { return diag.size(); }
};

/// d_k = a_k + b_k + c_k, o_k = -sqrt(a_{k+1} b_k), k < N.
SymTridiag truncate_symmetric(const DiscreteModel& model, std::size_t N, Boundary boundary);

/// Number of eigenvalues strictly below x, from the signs of the LDL^T pivots.
std::size_t sturm_count(const SymTridiag& m, double x);

/// Interval containing the whole spectrum.
std::pair<double, double> gershgorin(const SymTridiag& m);

/// Lowest `count` eigenvalues in increasing order by bisection on the Sturm
/// count, each to 1e-10 max(1, |lambda|).
std::vector<double> low_eigs(const SymTridiag& m, std::size_t count);

struct Lambda0Point {
  std::size_t N = 0;
  double lambda0 = 0.0;
};

std::vector<Lambda0Point> lambda0_trace(const DiscreteModel& model, const std::vector<std::size_t>& Ns,
                                        Boundary boundary);

struct CountGrowth {
  std::vector<std::pair<std::size_t, std::size_t>> counts;  // (N, eigenvalues below Lambda)
  bool stabilized = false;
  std::string label;  // heuristic reading, never a verdict
};

/// Counts eigenvalues below Lambda per truncation. Equal counts over the
/// last two truncations read as consistent with discrete spectrum below
/// Lambda; growth reads as consistent with essential spectrum.
CountGrowth eig_count_growth(const DiscreteModel& model, double Lambda, const std::vector<std::size_t>& Ns,
                             Boundary boundary);

/// Second-order finite differences for f -> -(1/mu)(nu f')' + c f on
/// [lo, hi] with Dirichlet ends and N interior points, with nu = e^C and
/// mu = e^C / a, symmetrized by the mu weights.
SymTridiag fd_discretize(const DiffusionModel& model, double lo, double hi, std::size_t N);

}  // namespace specdisc
