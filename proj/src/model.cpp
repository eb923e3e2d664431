#include "specdisc/model.hpp"

#include <cmath>
#include <sstream>
#include <variant>

#include "specdisc/errors.hpp"

namespace specdisc {

struct RateSequence::Base {
  struct TableData {
    std::vector<double> values;
    std::optional<Expr> extension;
  };
  struct FunctionData {
    std::function<double(std::size_t)> f;
    std::string label;
  };
  std::variant<Expr, TableData, FunctionData> data;

  double at(std::size_t n) const {
    if (const auto* e = std::get_if<Expr>(&data)) return (*e)(static_cast<double>(n));
    if (const auto* t = std::get_if<TableData>(&data)) {
      if (n < t->values.size()) return t->values[n];
      if (t->extension) return (*t->extension)(static_cast<double>(n));
      throw InputError("rate table has " + std::to_string(t->values.size()) +
                       " entries and no extension formula; index " + std::to_string(n) +
                       " requested");
    }
    return std::get<FunctionData>(data).f(n);
  }
};

RateSequence::RateSequence()
    : base_(std::make_shared<Base>(Base{Expr::constant(0.0, "n")})) {}

RateSequence RateSequence::formula(const Expr& e) {
  RateSequence s;
  s.base_ = std::make_shared<Base>(Base{e});
  return s;
}

RateSequence RateSequence::formula(std::string_view text) { return formula(Expr::parse(text, "n")); }

RateSequence RateSequence::constant(double v) { return formula(Expr::constant(v, "n")); }

RateSequence RateSequence::table(std::vector<double> values, std::optional<Expr> extension) {
  RateSequence s;
  s.base_ = std::make_shared<Base>(Base{Base::TableData{std::move(values), std::move(extension)}});
  return s;
}

RateSequence RateSequence::function(std::function<double(std::size_t)> f, std::string label) {
  RateSequence s;
  s.base_ = std::make_shared<Base>(Base{Base::FunctionData{std::move(f), std::move(label)}});
  return s;
}

double RateSequence::operator()(std::size_t n) const {
  if (!overrides_.empty()) {
    auto it = overrides_.find(n);
    if (it != overrides_.end()) return it->second;
  }
  return base_->at(n + offset_);
}

RateSequence RateSequence::with_override(std::size_t n, double value) const {
  RateSequence s(*this);
  s.overrides_[n] = value;
  return s;
}

RateSequence RateSequence::shifted(std::size_t k) const {
  RateSequence s;
  s.base_ = base_;
  s.offset_ = offset_ + k;
  for (const auto& [n, v] : overrides_)
    if (n >= k) s.overrides_[n - k] = v;
  return s;
}

RateSequence::Kind RateSequence::kind() const {
  if (std::holds_alternative<Expr>(base_->data)) return Kind::Formula;
  if (std::holds_alternative<Base::TableData>(base_->data)) return Kind::Table;
  return Kind::Function;
}

bool RateSequence::is_identically_zero() const {
  const auto* e = std::get_if<Expr>(&base_->data);
  if (!e || !e->is_constant() || (*e)(0.0) != 0.0) return false;
  for (const auto& [n, v] : overrides_)
    if (v != 0.0) return false;
  return true;
}

std::string RateSequence::describe() const {
  std::ostringstream os;
  if (const auto* e = std::get_if<Expr>(&base_->data)) {
    os << (offset_ ? e->shifted(static_cast<double>(offset_)).to_string() : e->to_string());
  } else if (const auto* t = std::get_if<Base::TableData>(&base_->data)) {
    os << "table[" << t->values.size() << "]";
    if (offset_) os << " from index " << offset_;
    if (t->extension) os << " then " << t->extension->shifted(static_cast<double>(offset_)).to_string();
  } else {
    os << std::get<Base::FunctionData>(base_->data).label;
    if (offset_) os << " shifted by " << offset_;
  }
  for (const auto& [n, v] : overrides_) os << "; [" << n << "] := " << v;
  return os.str();
}

std::optional<std::string> RateSequence::formula_text() const {
  const auto* e = std::get_if<Expr>(&base_->data);
  if (!e) return std::nullopt;
  return offset_ ? e->shifted(static_cast<double>(offset_)).to_string() : e->to_string();
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i].message;
  }
  return os.str();
}

namespace {

std::optional<ValidationIssue> probe(const RateSequence& s, const char* name, std::size_t from,
                                     std::size_t to, bool strict) {
  for (std::size_t n = from; n <= to; ++n) {
    double v;
    try {
      v = s(n);
    } catch (const InputError& e) {
      return ValidationIssue{n, std::string(name) + "[" + std::to_string(n) + "]: " + e.what()};
    }
    std::ostringstream os;
    if (!std::isfinite(v)) {
      os << name << "[" << n << "] = " << v << " is not finite";
      return ValidationIssue{n, os.str()};
    }
    if (strict ? !(v > 0) : !(v >= 0)) {
      os << name << "[" << n << "] = " << v << " violates the requirement " << name << "_n "
         << (strict ? "> 0" : ">= 0");
      if (n == 0 && strict) os << " (" << name << "_0 > 0 is required)";
      return ValidationIssue{n, os.str()};
    }
  }
  return std::nullopt;
}

}  // namespace

ValidationReport validate_model(const DiscreteModel& model, std::size_t n_probe) {
  ValidationReport r;
  if (auto i = probe(model.b, "b", 0, n_probe, true)) r.issues.push_back(*i);
  if (n_probe >= 1)
    if (auto i = probe(model.a, "a", 1, n_probe, true)) r.issues.push_back(*i);
  if (auto i = probe(model.c, "c", 0, n_probe, false)) r.issues.push_back(*i);
  return r;
}

DiscreteModel apply_prefix_overrides(const DiscreteModel& model, std::size_t n_prefix) {
  DiscreteModel m = model;
  auto fix = [n_prefix](RateSequence s, std::size_t from, bool strict) {
    for (std::size_t n = from; n < n_prefix; ++n) {
      double v;
      try {
        v = s(n);
      } catch (const InputError&) {
        v = std::nan("");
      }
      const bool bad = !std::isfinite(v) || (strict ? !(v > 0) : !(v >= 0));
      if (bad) s = s.with_override(n, 1.0);
    }
    return s;
  };
  m.b = fix(m.b, 0, true);
  m.a = fix(m.a, 1, true);
  m.c = fix(m.c, 0, false);
  return m;
}

DiscreteModel from_b_and_mu(const RateSequence& b, const RateSequence& mu, std::string name) {
  const double mu0 = mu(0);
  if (!(mu0 > 0) || !std::isfinite(mu0)) throw InputError("mu_0 must be positive and finite");
  if (!(b(0) > 0)) throw InputError("b_0 must be positive");
  auto a_fn = [b, mu, mu0](std::size_t n) -> double {
    if (n == 0) return 0.0;
    const double bp = b(n - 1);
    const double mp = mu(n - 1) / mu0;
    const double mn = mu(n) / mu0;
    if (!(bp > 0) || !(mp > 0) || !(mn > 0))
      throw InputError("from_b_and_mu: nonpositive input at n = " + std::to_string(n));
    return mp * bp / mn;
  };
  DiscreteModel m;
  m.name = std::move(name);
  m.b = b;
  m.a = RateSequence::function(a_fn, "mu[n-1]*b[n-1]/mu[n] with b = " + b.describe() +
                                         ", mu = " + mu.describe());
  m.c = RateSequence::constant(0.0);
  return m;
}

MeasureCache::MeasureCache(const DiscreteModel& model) : model_(model) {
  log_mu_.push_back(0.0);
  log_a_.push_back(0.0);
  log_b_.push_back(std::log(model_.b(0)));
}

void MeasureCache::extend(std::size_t n) {
  while (log_mu_.size() <= n) {
    const std::size_t k = log_mu_.size();
    const double bk = model_.b(k);
    const double ak = model_.a(k);
    if (!(ak > 0) || !(bk > 0))
      throw InputError("rates must be positive: a[" + std::to_string(k) + "] = " +
                       std::to_string(ak) + ", b[" + std::to_string(k) +
                       "] = " + std::to_string(bk));
    log_a_.push_back(std::log(ak));
    log_b_.push_back(std::log(bk));
    // The two logs enter separately so that exact cancellation between
    // birth and death rates survives in the compensated sum.
    running_.add(log_b_[k - 1]);
    running_.add(-log_a_[k]);
    log_mu_.push_back(running_.value());
  }
}

double MeasureCache::log_mu(std::size_t n) {
  extend(n);
  return log_mu_[n];
}

double MeasureCache::log_b(std::size_t n) {
  extend(n);
  return log_b_[n];
}

double MeasureCache::log_a(std::size_t n) {
  extend(n);
  return log_a_[n];
}

double MeasureCache::log_nu_hat(std::size_t n) {
  extend(n);
  return -(log_mu_[n] + log_b_[n]);
}

LogScalar MeasureCache::mu(std::size_t n) { return LogScalar::from_log(log_mu(n)); }
LogScalar MeasureCache::nu_hat(std::size_t n) { return LogScalar::from_log(log_nu_hat(n)); }

}  // namespace specdisc
