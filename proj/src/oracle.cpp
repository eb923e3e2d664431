#include "specdisc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specdisc/errors.hpp"

namespace specdisc {

const char* to_string(Boundary b) { return b == Boundary::Dirichlet ? "min" : "max"; }

SymTridiag truncate_symmetric(const DiscreteModel& model, std::size_t N, Boundary boundary) {
  if (N == 0) throw InputError("truncation size must be positive");
  SymTridiag m;
  m.boundary = boundary;
  m.diag.resize(N);
  m.off.resize(N - 1);
  for (std::size_t k = 0; k < N; ++k) {
    m.diag[k] = model.death(k) + model.birth(k) + model.kill(k);
    if (k + 1 < N) m.off[k] = -std::sqrt(model.death(k + 1) * model.birth(k));
  }
  if (boundary == Boundary::Free) m.diag[N - 1] -= model.birth(N - 1);
  return m;
}

std::size_t sturm_count(const SymTridiag& m, double x) {
  std::size_t neg = 0;
  double p = 1.0;
  constexpr double tiny = std::numeric_limits<double>::min() * 1e10;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double o2 = k ? m.off[k - 1] * m.off[k - 1] : 0.0;
    p = m.diag[k] - x - (k ? o2 / p : 0.0);
    if (p == 0.0) p = -tiny;
    if (p < 0) ++neg;
  }
  return neg;
}

std::pair<double, double> gershgorin(const SymTridiag& m) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < m.size(); ++k) {
    double r = 0.0;
    if (k) r += std::fabs(m.off[k - 1]);
    if (k + 1 < m.size()) r += std::fabs(m.off[k]);
    lo = std::min(lo, m.diag[k] - r);
    hi = std::max(hi, m.diag[k] + r);
  }
  return {lo, hi};
}

std::vector<double> low_eigs(const SymTridiag& m, std::size_t count) {
  if (count > m.size()) throw InputError("cannot request more eigenvalues than the matrix size");
  const auto [glo, ghi] = gershgorin(m);
  const double pad = 1e-12 * std::max({1.0, std::fabs(glo), std::fabs(ghi)});
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    double lo = k ? std::max(glo - pad, out[k - 1] - pad) : glo - pad;
    double hi = ghi + pad;
    while (hi - lo > 5e-11 * std::max(1.0, std::fabs(0.5 * (lo + hi)))) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (sturm_count(m, mid) > k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out[k] = 0.5 * (lo + hi);
  }
  return out;
}

std::vector<Lambda0Point> lambda0_trace(const DiscreteModel& model, const std::vector<std::size_t>& Ns,
                                        Boundary boundary) {
  std::vector<Lambda0Point> out;
  for (std::size_t N : Ns) out.push_back({N, low_eigs(truncate_symmetric(model, N, boundary), 1)[0]});
  return out;
}

CountGrowth eig_count_growth(const DiscreteModel& model, double Lambda, const std::vector<std::size_t>& Ns,
                             Boundary boundary) {
  if (!(Lambda > 0)) throw InputError("Lambda must be positive");
  CountGrowth g;
  for (std::size_t N : Ns) g.counts.emplace_back(N, sturm_count(truncate_symmetric(model, N, boundary), Lambda));
  g.stabilized = g.counts.size() >= 2 && g.counts.back().second == g.counts[g.counts.size() - 2].second;
  g.label = g.stabilized ? "heuristic: counts stable, consistent with discrete spectrum below Lambda"
                         : "heuristic: counts grow with N, consistent with essential spectrum below Lambda";
  return g;
}

SymTridiag fd_discretize(const DiffusionModel& model, double lo, double hi, std::size_t N) {
  if (N < 50) throw InputError("fd_discretize needs N >= 50");
  if (!(hi > lo)) throw InputError("fd_discretize needs a nonempty interval");
  const double dx = (hi - lo) / static_cast<double>(N + 1);
  const double mid = 0.5 * (lo + hi);
  auto ratio = [&](double t) { return model.b(t) / model.a(t); };
  // C relative to the midpoint keeps the weights near 1 in the middle.
  std::vector<double> C(2 * N + 3);
  std::vector<double> xs(2 * N + 3);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = lo + 0.5 * dx * static_cast<double>(i);
  const auto mid_idx = static_cast<std::size_t>(std::lround((mid - lo) / (0.5 * dx)));
  C[mid_idx] = adaptive_integral(ratio, mid, xs[mid_idx]);
  for (std::size_t i = mid_idx + 1; i < xs.size(); ++i) C[i] = C[i - 1] + adaptive_integral(ratio, xs[i - 1], xs[i]);
  for (std::size_t i = mid_idx; i-- > 0;) C[i] = C[i + 1] - adaptive_integral(ratio, xs[i], xs[i + 1]);

  SymTridiag m;
  m.boundary = Boundary::Dirichlet;
  m.diag.resize(N);
  m.off.resize(N - 1);
  const double h2 = dx * dx;
  for (std::size_t i = 0; i < N; ++i) {
    // Interior point i sits at half-index 2(i+1); its cell faces at 2i+1 and 2i+3.
    const std::size_t c = 2 * (i + 1);
    const double x = xs[c];
    const double nu_l = std::exp(C[c - 1]), nu_r = std::exp(C[c + 1]);
    const double mu_i = std::exp(C[c]) / model.a(x);
    m.diag[i] = (nu_l + nu_r) / (h2 * mu_i) + model.c(x);
    if (i + 1 < N) {
      const double mu_n = std::exp(C[c + 2]) / model.a(xs[c + 2]);
      m.off[i] = -nu_r / (h2 * std::sqrt(mu_i * mu_n));
    }
  }
  return m;
}

}  // namespace specdisc
