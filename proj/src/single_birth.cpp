#include "specdisc/single_birth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specdisc/errors.hpp"

namespace specdisc {

LowerTriModel::LowerTriModel(std::vector<double> q_up, const std::vector<Entry>& q_low,
                             std::vector<double> c)
    : q_up_(std::move(q_up)), c_(std::move(c)) {
  const std::size_t n = q_up_.size();
  if (c_.size() != n) throw InputError("q_up and c must have the same length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(q_up_[i] > 0) || !std::isfinite(q_up_[i]))
      throw InputError("q_{i,i+1} must be positive and finite at i = " + std::to_string(i));
    if (!std::isfinite(c_[i])) throw InputError("c must be finite at i = " + std::to_string(i));
  }
  rows_.resize(n);
  for (const Entry& e : q_low) {
    if (e.j >= e.i) throw InputError("q_low entries need j < i");
    if (e.i >= n) throw InputError("q_low row " + std::to_string(e.i) + " beyond model size");
    if (!(e.q >= 0) || !std::isfinite(e.q)) throw InputError("q_low entries must be nonnegative");
    rows_[e.i].emplace_back(e.j, e.q);
  }
  prefix_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = rows_[i];
    std::sort(r.begin(), r.end());
    std::vector<std::pair<std::size_t, double>> merged;
    for (const auto& p : r) {
      if (!merged.empty() && merged.back().first == p.first) {
        merged.back().second += p.second;
      } else {
        merged.push_back(p);
      }
    }
    r = std::move(merged);
    double s = 0.0;
    prefix_[i].reserve(r.size());
    for (const auto& p : r) prefix_[i].push_back(s += p.second);
  }
}

double LowerTriModel::entry(std::size_t n, std::size_t j) const {
  const auto& r = rows_.at(n);
  auto it = std::lower_bound(r.begin(), r.end(), std::make_pair(j, -1.0));
  return it != r.end() && it->first == j ? it->second : 0.0;
}

double LowerTriModel::row_prefix(std::size_t n, std::size_t k) const {
  const auto& r = rows_.at(n);
  auto it = std::upper_bound(r.begin(), r.end(), k,
                             [](std::size_t key, const auto& p) { return key < p.first; });
  const auto count = static_cast<std::size_t>(it - r.begin());
  return count ? prefix_[n][count - 1] : 0.0;
}

double LowerTriModel::row_total(std::size_t n) const {
  const auto& p = prefix_.at(n);
  return p.empty() ? 0.0 : p.back();
}

LowerTriModel from_tridiagonal(const DiscreteModel& model, std::size_t n) {
  std::vector<double> up(n), c(n);
  std::vector<LowerTriModel::Entry> low;
  for (std::size_t i = 0; i < n; ++i) {
    up[i] = model.birth(i);
    c[i] = model.kill(i);
    if (i > 0) low.push_back({i, i - 1, model.death(i)});
  }
  return LowerTriModel(std::move(up), low, std::move(c));
}

double tilde_q(const LowerTriModel& m, std::size_t n, std::size_t k) {
  if (k >= n) throw InputError("tilde_q needs k < n");
  return m.row_prefix(n, k) + m.kill(n);
}

double u_coeff(const LowerTriModel& m, std::size_t s, std::size_t l) {
  const std::size_t n = s + l;
  return tilde_q(m, n, s) / m.up(n);
}

std::vector<double> f_tilde_direct_all(const LowerTriModel& m, std::size_t n, std::size_t i) {
  if (n < i) throw InputError("f_tilde_direct needs n >= i");
  if (n >= m.size()) throw InputError("f_tilde_direct index beyond model size");
  std::vector<double> F(n - i + 1);
  F[0] = 1.0;
  for (std::size_t p = i + 1; p <= n; ++p) {
    double s = 0.0;
    for (std::size_t k = i; k < p; ++k) s += tilde_q(m, p, k) * F[k - i];
    F[p - i] = s / m.up(p);
  }
  return F;
}

double f_tilde_direct(const LowerTriModel& m, std::size_t n, std::size_t i) {
  return f_tilde_direct_all(m, n, i).back();
}

GTable g_table(const LowerTriModel& m, std::size_t i, std::size_t m_max, bool keep_columns) {
  if (i + m_max >= m.size()) throw InputError("g_table range beyond model size");
  GTable t;
  t.base = i;
  t.diag.assign(m_max + 1, 0.0);
  t.diag[0] = 1.0;
  if (m_max == 0) return t;
  std::vector<double> col(m_max + 1, 0.0);
  for (std::size_t l = 1; l <= m_max; ++l) col[l] = u_coeff(m, i, l);
  t.diag[1] = col[1];
  if (keep_columns) {
    t.columns.assign(m_max + 1, {});
    t.columns[1] = col;
  }
  for (std::size_t k = 2; k <= m_max; ++k) {
    const double prev = t.diag[k - 1];
    for (std::size_t l = k; l <= m_max; ++l) col[l] += u_coeff(m, i + k - 1, l - k + 1) * prev;
    t.diag[k] = col[k];
    if (!std::isfinite(col[k]))
      throw ConsistencyError("overflow in G table at base " + std::to_string(i) + ", column " +
                             std::to_string(k));
    if (keep_columns) t.columns[k] = col;
  }
  return t;
}

double poisson_residual(const LowerTriModel& m, const std::vector<double>& f,
                        const std::vector<double>& g, std::size_t n_max) {
  double worst = 0.0;
  for (std::size_t n = 0; n < n_max; ++n) {
    double lhs = m.up(n) * (g[n + 1] - g[n]) - m.kill(n) * g[n];
    double scale = m.up(n) * (std::fabs(g[n + 1]) + std::fabs(g[n])) + std::fabs(m.kill(n) * g[n]);
    for (const auto& [j, q] : m.row(n)) {
      lhs += q * (g[j] - g[n]);
      scale += q * (std::fabs(g[j]) + std::fabs(g[n]));
    }
    scale += std::fabs(f[n]);
    const double err = std::fabs(lhs - f[n]);
    worst = std::max(worst, scale > 0 ? err / scale : err);
  }
  return worst;
}

std::vector<double> poisson_solve(const LowerTriModel& m, const std::vector<double>& f, double g0,
                                  std::size_t n_max) {
  if (n_max >= m.size()) throw InputError("poisson_solve needs n_max < model size");
  if (f.size() < n_max) throw InputError("f must have at least n_max entries");
  // Column j of the double sum: v_j times the running sum of G^{(j)} diagonals.
  std::vector<double> g(n_max + 1, g0);
  for (std::size_t j = 0; j < n_max; ++j) {
    const double v = (f[j] + m.kill(j) * g0) / m.up(j);
    const GTable t = g_table(m, j, n_max - j - 1);
    double run = 0.0;
    for (std::size_t n = j + 1; n <= n_max; ++n) {
      run += t.diag[n - j - 1];
      g[n] += v * run;
    }
  }
  for (double x : g)
    if (!std::isfinite(x)) throw ConsistencyError("overflow in Poisson solution");
  const double res = poisson_residual(m, f, g, n_max);
  if (!(res < 1e-9))
    throw ConsistencyError("Poisson residual " + std::to_string(res) + " exceeds 1e-9");
  return g;
}

}  // namespace specdisc
