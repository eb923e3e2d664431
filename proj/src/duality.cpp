#include "specdisc/duality.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "specdisc/errors.hpp"
#include "specdisc/log_scalar.hpp"
#include "specdisc/oracle.hpp"

namespace specdisc {

namespace {

constexpr std::size_t kKillingProbe = 1000;

void require_killing_free(const DiscreteModel& m) {
  if (m.c.is_identically_zero()) return;
  for (std::size_t n = 0; n <= kKillingProbe; ++n)
    if (m.kill(n) != 0.0)
      throw InputError("dual chain needs c = 0 (nonzero at n = " + std::to_string(n) +
                       "); apply the h-transform first");
}

std::vector<double> prefix_logs(const std::vector<double>& terms) {
  std::vector<double> out(terms.size());
  LogSum s;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    s.add_log(terms[k]);
    out[k] = s.log_value();
  }
  return out;
}

std::vector<double> suffix_logs(const std::vector<double>& terms) {
  std::vector<double> out(terms.size() + 1, -std::numeric_limits<double>::infinity());
  LogSum s;
  for (std::size_t k = terms.size(); k-- > 0;) {
    s.add_log(terms[k]);
    out[k] = s.log_value();
  }
  return out;
}

}  // namespace

DiscreteModel dual_model(const DiscreteModel& model) {
  require_killing_free(model);
  DiscreteModel d;
  d.name = model.name.empty() ? "dual" : "dual of " + model.name;
  d.b = model.a.shifted(1);
  d.a = model.b;
  d.c = RateSequence::constant(0.0);
  return d;
}

DualPair make_dual_pair(const DiscreteModel& model) {
  DualPair p;
  p.primal = model;
  p.dual = dual_model(model);
  p.a_star0 = p.dual.a(0);
  return p;
}

double DualityReport::max_error() const {
  double e = std::max({nu_mu_error, mu_nu_error, bracket_finite_error});
  if (bracket_full_error) e = std::max(e, *bracket_full_error);
  return e;
}

DualBracket::DualBracket(const DualPair& pair, std::size_t N) {
  if (N < 40) throw InputError("bracket horizon must be at least 40");
  MeasureCache pm(pair.primal), dm(pair.dual);
  pm.extend(N + 1);
  dm.extend(N + 1);
  std::vector<double> nu(N + 1), mu(N + 1), mu_star(N), nu_star(N);
  for (std::size_t k = 0; k <= N; ++k) {
    nu[k] = pm.log_nu_hat(k);
    mu[k] = pm.log_mu(k);
  }
  for (std::size_t k = 0; k < N; ++k) {
    mu_star[k] = dm.log_mu(k);
    nu_star[k] = dm.log_nu_hat(k);
  }
  prefix_nu_ = prefix_logs(nu);
  suffix_mu_ = suffix_logs(mu);
  prefix_mu_star_ = prefix_logs(mu_star);
  suffix_nu_star_ = suffix_logs(nu_star);
  cert_mu_ = certify_sum(mu);
  cert_nu_star_ = certify_sum(nu_star);
  ok_ = cert_mu_.status == SeriesStatus::Converges &&
        cert_nu_star_.status == SeriesStatus::Converges;
  if (ok_) {
    for (auto& x : suffix_mu_) x = log_add(x, cert_mu_.log_remainder);
    for (auto& x : suffix_nu_star_) x = log_add(x, cert_nu_star_.log_remainder);
  }
}

double DualBracket::log_primal(std::size_t n) const {
  if (!ok_) throw InputError("bracket tails are not certified convergent");
  return prefix_nu_.at(n) + suffix_mu_.at(n + 1);
}

double DualBracket::log_dual(std::size_t n) const {
  if (!ok_) throw InputError("bracket tails are not certified convergent");
  return prefix_mu_star_.at(n) + suffix_nu_star_.at(n);
}

DualityReport duality_identities_check(const DualPair& pair, std::size_t n_max,
                                       std::size_t horizon) {
  DualityReport rep;
  rep.n_max = n_max;
  const std::size_t N = horizon ? horizon : 4 * n_max;
  if (N <= n_max + 1) throw InputError("horizon must exceed n_max + 1");
  rep.horizon = N;
  MeasureCache pm(pair.primal), dm(pair.dual);
  pm.extend(N + 1);
  dm.extend(N + 1);
  const double la0 = std::log(pair.a_star0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    rep.nu_mu_error = std::max(rep.nu_mu_error, std::fabs(pm.log_nu_hat(n) + la0 - dm.log_mu(n)));
    if (n >= 1)
      rep.mu_nu_error =
          std::max(rep.mu_nu_error, std::fabs(pm.log_mu(n) - la0 - dm.log_nu_hat(n - 1)));
  }

  // Finite window: nu_hat[0,n] mu[n+1,N] against mu*[0,n] nu_hat*[n,N-1].
  std::vector<double> nu(N + 1), mu(N + 1), mu_star(N), nu_star(N);
  for (std::size_t k = 0; k <= N; ++k) {
    nu[k] = pm.log_nu_hat(k);
    mu[k] = pm.log_mu(k);
  }
  for (std::size_t k = 0; k < N; ++k) {
    mu_star[k] = dm.log_mu(k);
    nu_star[k] = dm.log_nu_hat(k);
  }
  const auto pnu = prefix_logs(nu), smu = suffix_logs(mu);
  const auto pms = prefix_logs(mu_star), sns = suffix_logs(nu_star);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double lhs = pnu[n] + smu[n + 1];
    const double rhs = pms[n] + sns[n];
    rep.bracket_finite_error = std::max(rep.bracket_finite_error, std::fabs(lhs - rhs));
  }

  DualBracket br(pair, N);
  rep.primal_mu_tail = br.primal_certificate().status;
  rep.dual_nu_tail = br.dual_certificate().status;
  if (br.available()) {
    double e = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n)
      e = std::max(e, std::fabs(br.log_primal(n) - br.log_dual(n)));
    rep.bracket_full_error = e;
  } else {
    rep.note = "tails not both certified convergent; bracket compared on the finite window only";
  }
  if (rep.primal_mu_tail != rep.dual_nu_tail)
    rep.note += std::string(rep.note.empty() ? "" : "; ") + "tail certifications disagree (" +
                to_string(rep.primal_mu_tail) + " vs " + to_string(rep.dual_nu_tail) + ")";
  return rep;
}

namespace {

Eigen::MatrixXd generator(const DiscreteModel& m, double a0, std::size_t N) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t i = 0; i < N; ++i) {
    const double ai = i == 0 ? a0 : m.death(i);
    Q(i, i) = -(ai + m.birth(i) + m.kill(i));
    if (i + 1 < N) Q(i, i + 1) = m.birth(i);
    if (i > 0) Q(i, i - 1) = ai;
  }
  return Q;
}

struct Conjugated {
  Eigen::MatrixXd L, Linv, U, Uinv;
  double scale;
};

Conjugated build(const DualPair& pair, std::size_t N) {
  if (N < 2 || N > 500) throw InputError("similarity check needs 2 <= N <= 500");
  MeasureCache pm(pair.primal);
  pm.extend(N);
  Conjugated c;
  c.L = Eigen::MatrixXd::Zero(N, N);
  c.Linv = Eigen::MatrixXd::Zero(N, N);
  c.U = Eigen::MatrixXd::Zero(N, N);
  c.Uinv = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t i = 0; i < N; ++i) {
    const double mi = pm.mu(i).value();
    for (std::size_t j = 0; j <= i; ++j) c.L(i, j) = pm.mu(j).value();
    for (std::size_t j = i; j < N; ++j) c.U(i, j) = pm.mu(j).value();
    c.Linv(i, i) = 1.0 / mi;
    if (i > 0) c.Linv(i, i - 1) = -1.0 / mi;
    c.Uinv(i, i) = 1.0 / mi;
    if (i + 1 < N) c.Uinv(i, i + 1) = -1.0 / mi;
  }
  c.scale = 1.0;
  for (std::size_t i = 0; i <= N; ++i)
    c.scale = std::max({c.scale, pair.primal.birth(i), i ? pair.primal.death(i) : 0.0});
  return c;
}

}  // namespace

SimilarityReport similarity_check(const DualPair& pair, std::size_t N) {
  const Conjugated c = build(pair, N);
  const Eigen::MatrixXd Q = generator(pair.primal, 0.0, N);
  const Eigen::MatrixXd Qs = generator(pair.dual, pair.a_star0, N);
  const auto n1 = static_cast<Eigen::Index>(N - 1);
  SimilarityReport r;
  r.N = N;
  const Eigen::MatrixXd lower = c.L * Q * c.Linv - Qs;
  r.interior_deviation = lower.topLeftCorner(n1, n1).cwiseAbs().maxCoeff() / c.scale;
  const Eigen::MatrixXd upper = c.U * Q * c.Uinv - Qs;
  r.upper_deviation = upper.topLeftCorner(n1, n1).cwiseAbs().maxCoeff() / c.scale;
  r.inverse_deviation =
      (c.L * c.Linv - Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N)))
          .cwiseAbs()
          .maxCoeff();
  return r;
}

double similarity_spectrum_check(const DualPair& pair, std::size_t N) {
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const Conjugated c = build(pair, N);
  const MatL Q = generator(pair.primal, 0.0, N).cast<long double>();
  MatL S = -(c.L.cast<long double>() * Q * c.Linv.cast<long double>());
  // Diagonal balancing symmetrizes the tridiagonal band; rates up to ~1e9 leave
  // too little precision in double for the small eigenvalues.
  std::vector<long double> d(N, 1.0L);
  for (std::size_t i = 1; i < N; ++i) {
    const long double up = S(i - 1, i), down = S(i, i - 1);
    d[i] = up * down > 0 ? d[i - 1] * std::sqrt(down / up) : d[i - 1];
  }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) S(i, j) *= d[j] / d[i];
  Eigen::EigenSolver<MatL> es(S, false);
  if (es.info() != Eigen::Success) throw ConsistencyError("dense eigensolver failed");
  std::vector<double> dense;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) dense.push_back(static_cast<double>(es.eigenvalues()[i].real()));
  std::sort(dense.begin(), dense.end());
  const auto sturm = low_eigs(truncate_symmetric(pair.primal, N, Boundary::Dirichlet), N);
  double worst = 0.0;
  for (std::size_t k = 0; k < N; ++k)
    worst = std::max(worst, std::fabs(dense[k] - sturm[k]) / std::max(1.0, std::fabs(sturm[k])));
  return worst;
}

}  // namespace specdisc
