#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "specdisc/harmonic.hpp"
#include "specdisc/log_scalar.hpp"
#include "specdisc/model.hpp"
#include "specdisc/tail.hpp"

namespace specdisc {

enum class Verdict { DiscreteMin, DiscreteMax, BothDiscrete, NotDiscrete, Inconclusive };
enum class PartOutcome { Discrete, NotDiscrete, Inconclusive };
enum class Mode { Min, Max, Both };
enum class Branch { Min, Max };

const char* to_string(Verdict v);
const char* to_string(PartOutcome p);
bool is_discrete_min(Verdict v);
bool is_discrete_max(Verdict v);

struct CriteriaOptions {
  std::size_t n_max = 10000;
  std::size_t horizon = 0;  // 0 selects 4 * n_max
  double delta = 0.05;
  double sample_ratio = 1.25;
  double log_level_floor = std::log(1e-8);
  TailThresholds tail;
};

struct TracePoint {
  double n = 0.0;
  double log_S = 0.0;
};

/// One side of the criterion: the min-domain product (inner tail sum from k = n)
/// or the max-domain product (outer tail sum from j = n + 1).
struct PartReport {
  bool evaluated = false;
  PartOutcome outcome = PartOutcome::Inconclusive;
  std::string reason;
  std::vector<TracePoint> trace;
  LineFit fit;
};

struct CriterionReport {
  Verdict verdict = Verdict::Inconclusive;
  std::string branch;
  SeriesCertificate series_A;  // sum mu_j h_j^2
  SeriesCertificate series_B;  // sum 1/(h_k h_{k+1} mu_k b_k)
  PartReport min_part;
  PartReport max_part;
  std::size_t n_max = 0;
  std::size_t horizon = 0;
  double delta = 0.0;
  std::vector<std::string> notes;
};

/// Term sequences, window sums and tail certificates of a discrete model up
/// to a horizon N, shared by every criterion evaluated on that model.
class CriteriaContext {
 public:
  CriteriaContext(const DiscreteModel& model, const CriteriaOptions& opts);

  const DiscreteModel& model() const { return model_; }
  const CriteriaOptions& options() const { return opts_; }
  std::size_t n_max() const { return opts_.n_max; }
  std::size_t horizon() const { return N_; }
  const HarmonicSeq& harmonic() const { return seq_; }

  double log_mu(std::size_t n) const { return log_mu_.at(n); }
  double log_b(std::size_t n) const { return log_b_.at(n); }
  double log_a(std::size_t n) const { return log_a_.at(n); }
  double log_h(std::size_t n) const { return seq_.log_h.at(n); }
  double log_A_term(std::size_t j) const { return log_A_terms_.at(j); }
  double log_B_term(std::size_t k) const { return log_B_terms_.at(k); }
  const std::vector<double>& log_A_terms() const { return log_A_terms_; }
  const std::vector<double>& log_B_terms() const { return log_B_terms_; }

  const SeriesCertificate& A_certificate() const { return cert_A_; }
  const SeriesCertificate& B_certificate() const { return cert_B_; }

  /// A_n = sum_{j=0}^n mu_j h_j^2.
  LogScalar series_A(std::size_t n) const;
  /// sum_{k=0}^n 1/(h_k h_{k+1} mu_k b_k).
  LogScalar prefix_B(std::size_t n) const;
  /// B_n = sum_{k>=n} 1/(h_k h_{k+1} mu_k b_k); empty unless certified convergent.
  std::optional<LogScalar> series_B(std::size_t n) const;
  /// sum_{j>=n} mu_j h_j^2; empty unless certified convergent.
  std::optional<LogScalar> tail_A(std::size_t n) const;
  /// Window sums over [n, N] without any remainder.
  double log_window_A(std::size_t n) const { return log_suffix_A_.at(n); }
  double log_window_B(std::size_t n) const { return log_suffix_B_.at(n); }

  /// A_n * B_n (inner sum from k = n).
  std::optional<LogScalar> product_min(std::size_t n) const;
  /// (sum_{j>=n+1} mu_j h_j^2) * (sum_{k<=n} terms).
  std::optional<LogScalar> product_max(std::size_t n) const;

 private:
  DiscreteModel model_;
  CriteriaOptions opts_;
  std::size_t N_;
  HarmonicSeq seq_;
  std::vector<double> log_mu_, log_b_, log_a_;
  std::vector<double> log_A_terms_, log_B_terms_;
  std::vector<double> log_prefix_A_, log_prefix_B_, log_suffix_A_, log_suffix_B_;
  SeriesCertificate cert_A_, cert_B_;
};

/// Three-way criterion: certifies both series, dispatches to the min part,
/// the max part, or the both-divergent case, and reads each product trace
/// by a log-log slope fit over [n_max/10, n_max].
CriterionReport classify(const CriteriaContext& ctx, Mode mode = Mode::Both);
CriterionReport classify(const DiscreteModel& model, const CriteriaOptions& opts,
                         Mode mode = Mode::Both);

/// Verdict logic shared by the discrete and continuous criteria. trace(branch)
/// is requested only for a part whose tail series converges; the slope fit
/// uses trace points at or beyond fit_from. Fills everything except the
/// sizes (n_max, horizon).
CriterionReport decide_verdict(const SeriesCertificate& A, const SeriesCertificate& B, Mode mode,
                               const std::function<std::vector<TracePoint>(Branch)>& trace,
                               double fit_from, double delta, double log_level_floor);

enum class StolzMode { Increasing, Decreasing };

struct StolzBound {
  bool ok = false;
  double lo = 0.0;
  double hi = 0.0;
  std::optional<std::size_t> violation;  // first index where q is not strictly monotone
};

/// Bounds on lim p_n/q_n from the extreme difference ratios over n >= n0.
StolzBound stolz_limit(const std::vector<double>& p, const std::vector<double>& q, StolzMode mode,
                       std::size_t n0 = 0);

struct SufficientTest {
  std::string name;
  bool precondition_met = false;
  std::string conclusion;  // "empty", "nonempty" or "none"
  std::string evidence;
};

struct SufficientReport {
  std::vector<SufficientTest> tests;
  LineFit W_fit;      // log(h^2 mu sqrt(a) B) against log n
  LineFit V_fit;      // log(h^2 mu B) against log n
  LineFit stat_fit;   // log of the ratio statistic against log n
  double stat_coefficient = 0.0;  // statistic / sqrt(n) at n_max
};

/// b_n/sqrt(a_n) - r_n^2 sqrt(a_{n+1}), n >= 1.
double ratio_statistic(const CriteriaContext& ctx, std::size_t n);

/// Evaluates the sufficient conditions built on h^2 mu sqrt(a) B, h^2 mu B
/// and the ratio statistic, each with its precondition and evidence.
SufficientReport sufficient_tests(const CriteriaContext& ctx);

/// Log of the asymptotic stand-in for the product: n^2 r_n/b_n and
/// n^2/(a_{n+1} r_n) for algebraic tails, r_n/b_n and 1/(a_{n+1} r_n) for
/// exponential tails. Throws InputError for an unknown tail.
double log_tail_shortcut(const CriteriaContext& ctx, TailKind kind, Branch branch, std::size_t n);

/// Tail kind shared by both term series, or Unknown when they differ.
TailKind common_tail_kind(const CriteriaContext& ctx);

}  // namespace specdisc
