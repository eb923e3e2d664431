#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specdisc/expr.hpp"
#include "specdisc/log_scalar.hpp"

namespace specdisc {

/// A rate sequence indexed by n >= 0: a formula in n, a finite table with
/// a declared extension, or an opaque callable. Finite-prefix overrides
/// replace individual entries.
class RateSequence {
 public:
  enum class Kind { Formula, Table, Function };

  RateSequence();  // the constant 0

  static RateSequence formula(const Expr& e);
  static RateSequence formula(std::string_view text);
  static RateSequence constant(double v);
  /// A table; past its end the extension formula is used, or an InputError
  /// is raised when there is none.
  static RateSequence table(std::vector<double> values, std::optional<Expr> extension = {});
  static RateSequence function(std::function<double(std::size_t)> f, std::string label);

  double operator()(std::size_t n) const;

  RateSequence with_override(std::size_t n, double value) const;
  /// The sequence n -> this(n + k).
  RateSequence shifted(std::size_t k) const;

  Kind kind() const;
  const std::map<std::size_t, double>& overrides() const { return overrides_; }
  /// True when every entry past the overrides is the constant zero formula.
  bool is_identically_zero() const;
  std::string describe() const;
  /// Expression text (with any shift applied) for formula sequences.
  std::optional<std::string> formula_text() const;

  struct Base;

 private:
  std::shared_ptr<const Base> base_;
  std::size_t offset_ = 0;
  std::map<std::size_t, double> overrides_;
};

/// Birth-death operator with killing on {0, 1, 2, ...}. The death rate at 0
/// is fixed to zero regardless of what the a-sequence holds there.
struct DiscreteModel {
  std::string name;
  RateSequence a;  // death rates, used for n >= 1
  RateSequence b;  // birth rates
  RateSequence c;  // killing rates

  double death(std::size_t n) const { return n == 0 ? 0.0 : a(n); }
  double birth(std::size_t n) const { return b(n); }
  double kill(std::size_t n) const { return c(n); }
};

struct ValidationIssue {
  std::size_t n;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

/// Probes n = 0..n_probe for b_n > 0, a_n > 0 (n >= 1), c_n >= 0 and finite values.
/// Reports at most one issue per rate sequence (its first violation).
ValidationReport validate_model(const DiscreteModel& model, std::size_t n_probe);

/// Replaces every entry with index below n_prefix that violates the sign
/// conventions (or is not finite) by 1.
DiscreteModel apply_prefix_overrides(const DiscreteModel& model, std::size_t n_prefix);

/// Model with the given birth rates and invariant measure: a_n = mu_{n-1} b_{n-1} / mu_n, c = 0.
/// mu is rescaled so that mu_0 = 1.
DiscreteModel from_b_and_mu(const RateSequence& b, const RateSequence& mu, std::string name = {});

/// Grow-only cache of log mu_n and log nu_hat_n = -(log mu_n + log b_n).
class MeasureCache {
 public:
  explicit MeasureCache(const DiscreteModel& model);

  void extend(std::size_t n);
  std::size_t size() const { return log_mu_.size(); }

  LogScalar mu(std::size_t n);
  LogScalar nu_hat(std::size_t n);
  double log_mu(std::size_t n);
  double log_nu_hat(std::size_t n);
  double log_b(std::size_t n);
  double log_a(std::size_t n);  // n >= 1

  const DiscreteModel& model() const { return model_; }

 private:
  DiscreteModel model_;
  CompensatedSum running_;
  std::vector<double> log_mu_;
  std::vector<double> log_b_;
  std::vector<double> log_a_;
};

}  // namespace specdisc
