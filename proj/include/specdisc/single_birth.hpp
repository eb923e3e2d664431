#pragma once

#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "specdisc/model.hpp"

namespace specdisc {

/// Single-birth (lower-triangular plus one upward step) rate matrix on
/// {0, ..., size()-1}: q_{i,i+1} > 0, q_{ij} >= 0 for j < i, and a signed
/// killing term c_i. Each row keeps its downward entries sorted by column
/// together with running sums, so partial row sums cost a binary search.
class LowerTriModel {
 public:
  struct Entry {
    std::size_t i;
    std::size_t j;
    double q;
  };

  /// q_up[i] = q_{i,i+1} and c[i] for i < q_up.size(); entries with i beyond
  /// that range are rejected. Repeated (i, j) pairs are summed.
  LowerTriModel(std::vector<double> q_up, const std::vector<Entry>& q_low, std::vector<double> c);

  std::size_t size() const { return q_up_.size(); }
  double up(std::size_t n) const { return q_up_.at(n); }
  double kill(std::size_t n) const { return c_.at(n); }
  double entry(std::size_t n, std::size_t j) const;
  /// sum_{j <= k} q_{nj}
  double row_prefix(std::size_t n, std::size_t k) const;
  double row_total(std::size_t n) const;
  const std::vector<std::pair<std::size_t, double>>& row(std::size_t n) const { return rows_.at(n); }

 private:
  std::vector<double> q_up_;
  std::vector<double> c_;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
  std::vector<std::vector<double>> prefix_;
};

/// Rows 0..n-1 of a birth-death model: q_{i,i+1} = b_i, q_{i,i-1} = a_i.
LowerTriModel from_tridiagonal(const DiscreteModel& model, std::size_t n);

/// q~_n^{(k)} = sum_{j<=k} q_{nj} + c_n for 0 <= k < n.
double tilde_q(const LowerTriModel& m, std::size_t n, std::size_t k);

/// u_l^{(s)} = q~_{s+l}^{(s)} / q_{s+l,s+l+1}, l >= 1.
double u_coeff(const LowerTriModel& m, std::size_t s, std::size_t l);

/// Reference O((n-i)^2) evaluation of F~_n^{(i)}, with F~_i^{(i)} = 1.
double f_tilde_direct(const LowerTriModel& m, std::size_t n, std::size_t i);

/// All of F~_{i}^{(i)}, ..., F~_{n}^{(i)} from the direct recursion.
std::vector<double> f_tilde_direct_all(const LowerTriModel& m, std::size_t n, std::size_t i);

struct GTable {
  std::size_t base = 0;
  std::vector<double> diag;  // diag[k] = G_{k,k}, diag[0] = 1
  /// columns[k][l] = G_{l,k} for 1 <= k <= l; filled only with keep_columns.
  std::vector<std::vector<double>> columns;
};

/// Column-by-column recursion G_{l,k} = G_{l,k-1} + u_{l-k+1}^{(i+k-1)} G_{k-1,k-1}
/// with G_{l,1} = u_l^{(i)}. Only one column is live unless keep_columns is set.
/// Requires i + m_max < size(). Throws ConsistencyError on overflow.
GTable g_table(const LowerTriModel& m, std::size_t i, std::size_t m_max, bool keep_columns = false);

/// Solution of sum_{j<n} q_{nj}(g_j - g_n) + q_{n,n+1}(g_{n+1} - g_n) - c_n g_n = f_n
/// for n = 0..n_max-1, returned as g_0..g_{n_max}. Requires n_max < size() and
/// f.size() >= n_max. Throws ConsistencyError if the residual check fails.
std::vector<double> poisson_solve(const LowerTriModel& m, const std::vector<double>& f, double g0,
                                  std::size_t n_max);

/// max over n < n_max of |(Omega g)_n - f_n| relative to the sum of the
/// magnitudes entering row n.
double poisson_residual(const LowerTriModel& m, const std::vector<double>& f,
                        const std::vector<double>& g, std::size_t n_max);

}  // namespace specdisc
