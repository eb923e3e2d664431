#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "specdisc/model.hpp"
#include "specdisc/tail.hpp"

namespace specdisc {

/// Killing-free model and its dual b*_i = a_{i+1}, a*_i = b_i. The dual's
/// a-sequence keeps a*_0 = b_0, which DiscreteModel::death ignores; it is
/// exposed separately as a_star0.
struct DualPair {
  DiscreteModel primal;
  DiscreteModel dual;
  double a_star0 = 0.0;
};

/// Throws InputError when the killing rates are not identically zero.
DiscreteModel dual_model(const DiscreteModel& model);
DualPair make_dual_pair(const DiscreteModel& model);

struct DualityReport {
  double nu_mu_error = 0.0;      // max |log(nu_hat_n a*_0) - log mu*_n|
  double mu_nu_error = 0.0;      // max |log mu_n - log(a*_0 nu_hat*_{n-1})|
  double bracket_finite_error = 0.0;
  std::optional<double> bracket_full_error;  // only when both tails converge
  SeriesStatus primal_mu_tail = SeriesStatus::Unknown;
  SeriesStatus dual_nu_tail = SeriesStatus::Unknown;
  std::size_t n_max = 0;
  std::size_t horizon = 0;
  std::string note;

  double max_error() const;
};

/// Checks nu_hat_n a*_0 = mu*_n, mu_n = a*_0 nu_hat*_{n-1}, and
/// nu_hat[0,n] mu[n+1,inf) = mu*[0,n] nu_hat*[n,inf) for n <= n_max. The
/// bracket is compared on the finite window up to the horizon (default 4 n_max),
/// and with certified tails when both converge. Errors are in the log domain.
DualityReport duality_identities_check(const DualPair& pair, std::size_t n_max,
                                       std::size_t horizon = 0);

/// Both sides of the bracket identity with certified tails: the primal side
/// sums mu up to the horizon N, the dual side sums nu_hat* up to N - 1.
class DualBracket {
 public:
  DualBracket(const DualPair& pair, std::size_t horizon);

  bool available() const { return ok_; }
  const SeriesCertificate& primal_certificate() const { return cert_mu_; }
  const SeriesCertificate& dual_certificate() const { return cert_nu_star_; }
  /// log nu_hat[0,n] + log mu[n+1,inf)
  double log_primal(std::size_t n) const;
  /// log mu*[0,n] + log nu_hat*[n,inf)
  double log_dual(std::size_t n) const;

 private:
  bool ok_ = false;
  std::vector<double> prefix_nu_, suffix_mu_, prefix_mu_star_, suffix_nu_star_;
  SeriesCertificate cert_mu_, cert_nu_star_;
};

struct SimilarityReport {
  std::size_t N = 0;
  double interior_deviation = 0.0;  // L Q L^{-1} - Q* on the leading (N-1)x(N-1) block
  double upper_deviation = 0.0;     // same with the upper-triangular tail matrix, for reference
  double inverse_deviation = 0.0;   // max |L L^{-1} - I|
};

/// Dense N x N check of the similarity between the truncated generators. L
/// is lower triangular with L_ij = mu_j (j <= i); its inverse is bidiagonal.
/// Entries are scaled by the largest rate in the window.
SimilarityReport similarity_check(const DualPair& pair, std::size_t N);

/// Largest difference, relative to max(1, |lambda|), between the eigenvalues
/// of -(L Q_N L^{-1}) from a dense nonsymmetric solver (long double, after
/// diagonal balancing) and the Sturm eigenvalues of the Dirichlet truncation.
double similarity_spectrum_check(const DualPair& pair, std::size_t N);

}  // namespace specdisc
