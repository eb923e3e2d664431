#include "specdisc/criteria.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "specdisc/errors.hpp"

namespace specdisc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::DiscreteMin: return "DiscreteMin";
    case Verdict::DiscreteMax: return "DiscreteMax";
    case Verdict::BothDiscrete: return "BothDiscrete";
    case Verdict::NotDiscrete: return "NotDiscrete";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

const char* to_string(PartOutcome p) {
  switch (p) {
    case PartOutcome::Discrete: return "Discrete";
    case PartOutcome::NotDiscrete: return "NotDiscrete";
    case PartOutcome::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

bool is_discrete_min(Verdict v) { return v == Verdict::DiscreteMin || v == Verdict::BothDiscrete; }
bool is_discrete_max(Verdict v) { return v == Verdict::DiscreteMax || v == Verdict::BothDiscrete; }

CriteriaContext::CriteriaContext(const DiscreteModel& model, const CriteriaOptions& opts)
    : model_(model), opts_(opts) {
  if (opts_.n_max < 40) throw InputError("n_max must be at least 40");
  N_ = opts_.horizon ? opts_.horizon : 4 * opts_.n_max;
  if (N_ < opts_.n_max + 1) throw InputError("horizon must exceed n_max");
  seq_ = harmonic_sequence(model_, N_ + 1);

  MeasureCache mc(model_);
  mc.extend(N_ + 1);
  log_mu_.resize(N_ + 2);
  log_b_.resize(N_ + 2);
  log_a_.resize(N_ + 2);
  for (std::size_t n = 0; n <= N_ + 1; ++n) {
    log_mu_[n] = mc.log_mu(n);
    log_b_[n] = mc.log_b(n);
    log_a_[n] = n ? mc.log_a(n) : kNegInf;
  }

  log_A_terms_.resize(N_ + 1);
  log_B_terms_.resize(N_ + 1);
  for (std::size_t k = 0; k <= N_; ++k) {
    log_A_terms_[k] = log_mu_[k] + 2.0 * seq_.log_h[k];
    log_B_terms_[k] = -(seq_.log_h[k] + seq_.log_h[k + 1] + log_mu_[k] + log_b_[k]);
  }

  log_prefix_A_.resize(N_ + 1);
  log_prefix_B_.resize(N_ + 1);
  LogSum pa, pb;
  for (std::size_t k = 0; k <= N_; ++k) {
    pa.add_log(log_A_terms_[k]);
    pb.add_log(log_B_terms_[k]);
    log_prefix_A_[k] = pa.log_value();
    log_prefix_B_[k] = pb.log_value();
  }
  // Tails are accumulated directly from the far end; subtracting prefix sums
  // from a total would lose everything once the tail is tiny.
  log_suffix_A_.resize(N_ + 2, kNegInf);
  log_suffix_B_.resize(N_ + 2, kNegInf);
  LogSum sa, sb;
  for (std::size_t k = N_ + 1; k-- > 0;) {
    sa.add_log(log_A_terms_[k]);
    sb.add_log(log_B_terms_[k]);
    log_suffix_A_[k] = sa.log_value();
    log_suffix_B_[k] = sb.log_value();
  }

  cert_A_ = certify_sum(log_A_terms_, opts_.tail);
  cert_B_ = certify_sum(log_B_terms_, opts_.tail);
}

LogScalar CriteriaContext::series_A(std::size_t n) const {
  return LogScalar::from_log(log_prefix_A_.at(n));
}

LogScalar CriteriaContext::prefix_B(std::size_t n) const {
  return LogScalar::from_log(log_prefix_B_.at(n));
}

std::optional<LogScalar> CriteriaContext::series_B(std::size_t n) const {
  if (cert_B_.status != SeriesStatus::Converges) return std::nullopt;
  return LogScalar::from_log(log_add(log_suffix_B_.at(n), cert_B_.log_remainder));
}

std::optional<LogScalar> CriteriaContext::tail_A(std::size_t n) const {
  if (cert_A_.status != SeriesStatus::Converges) return std::nullopt;
  return LogScalar::from_log(log_add(log_suffix_A_.at(n), cert_A_.log_remainder));
}

std::optional<LogScalar> CriteriaContext::product_min(std::size_t n) const {
  auto b = series_B(n);
  if (!b) return std::nullopt;
  return series_A(n) * *b;
}

std::optional<LogScalar> CriteriaContext::product_max(std::size_t n) const {
  auto a = tail_A(n + 1);
  if (!a) return std::nullopt;
  return *a * prefix_B(n);
}

namespace {

PartReport part_from_trace(std::vector<TracePoint> trace, double fit_from, double delta,
                           double floor) {
  PartReport part;
  part.evaluated = true;
  part.trace = std::move(trace);
  if (part.trace.empty()) throw ConsistencyError("empty product trace");
  std::vector<double> xs, ys;
  for (const auto& p : part.trace) {
    if (p.n >= fit_from) {
      xs.push_back(std::log(p.n));
      ys.push_back(p.log_S);
    }
  }
  part.fit = fit_line(xs, ys);
  std::string why;
  const LimitDecision d = decide_limit(part.fit, part.trace.back().log_S, delta, floor, &why);
  part.outcome = d == LimitDecision::Zero       ? PartOutcome::Discrete
                 : d == LimitDecision::Positive ? PartOutcome::NotDiscrete
                                                : PartOutcome::Inconclusive;
  part.reason = why;
  return part;
}

PartReport skipped_part(PartOutcome outcome, std::string reason) {
  PartReport p;
  p.outcome = outcome;
  p.reason = std::move(reason);
  return p;
}

std::vector<TracePoint> discrete_trace(const CriteriaContext& ctx, Branch branch) {
  std::vector<TracePoint> out;
  for (std::size_t n : geometric_samples(ctx.n_max(), ctx.options().sample_ratio)) {
    auto s = branch == Branch::Min ? ctx.product_min(n) : ctx.product_max(n);
    if (!s) throw ConsistencyError("product requested without a certified tail");
    out.push_back({static_cast<double>(n), s->log_mag});
  }
  return out;
}

}  // namespace

CriterionReport decide_verdict(const SeriesCertificate& A, const SeriesCertificate& B, Mode mode,
                               const std::function<std::vector<TracePoint>(Branch)>& trace,
                               double fit_from, double delta, double log_level_floor) {
  CriterionReport rep;
  rep.delta = delta;
  rep.series_A = A;
  rep.series_B = B;
  const SeriesStatus sa = A.status, sb = B.status;

  if (sa == SeriesStatus::Diverges && sb == SeriesStatus::Diverges) {
    rep.branch = "both series diverge";
    rep.verdict = Verdict::NotDiscrete;
    rep.min_part = skipped_part(PartOutcome::NotDiscrete, "both series diverge");
    rep.max_part = skipped_part(PartOutcome::NotDiscrete, "both series diverge");
    return rep;
  }

  const bool want_min = mode != Mode::Max;
  const bool want_max = mode != Mode::Min;
  std::vector<std::string> branches;

  if (want_min) {
    if (sb == SeriesStatus::Converges) {
      rep.min_part = part_from_trace(trace(Branch::Min), fit_from, delta, log_level_floor);
      branches.push_back("min product evaluated");
    } else if (sb == SeriesStatus::Diverges) {
      rep.min_part = skipped_part(PartOutcome::NotDiscrete,
                                  "the h^-2 nu_hat series diverges, so the min product is infinite");
    } else {
      rep.min_part = skipped_part(PartOutcome::Inconclusive,
                                  "convergence of the h^-2 nu_hat series not certified");
    }
  }
  if (want_max) {
    if (sa == SeriesStatus::Converges) {
      rep.max_part = part_from_trace(trace(Branch::Max), fit_from, delta, log_level_floor);
      branches.push_back("max product evaluated");
    } else if (sa == SeriesStatus::Diverges) {
      rep.max_part = skipped_part(PartOutcome::NotDiscrete,
                                  "the h^2 mu series diverges, so the max product is infinite");
    } else {
      rep.max_part = skipped_part(PartOutcome::Inconclusive,
                                  "convergence of the h^2 mu series not certified");
    }
  }
  rep.branch = branches.empty() ? "no product evaluated" : branches.front();
  if (branches.size() == 2) rep.branch = "min and max products evaluated";

  const bool min_d = want_min && rep.min_part.outcome == PartOutcome::Discrete;
  const bool max_d = want_max && rep.max_part.outcome == PartOutcome::Discrete;
  const bool any_inconclusive = (want_min && rep.min_part.outcome == PartOutcome::Inconclusive) ||
                                (want_max && rep.max_part.outcome == PartOutcome::Inconclusive);
  if (min_d && max_d) {
    rep.verdict = Verdict::BothDiscrete;
  } else if (min_d) {
    rep.verdict = Verdict::DiscreteMin;
  } else if (max_d) {
    rep.verdict = Verdict::DiscreteMax;
  } else if (any_inconclusive) {
    rep.verdict = Verdict::Inconclusive;
  } else {
    rep.verdict = Verdict::NotDiscrete;
  }
  if ((min_d || max_d) && any_inconclusive)
    rep.notes.push_back("the other domain is undecided at this range");
  return rep;
}

CriterionReport classify(const CriteriaContext& ctx, Mode mode) {
  const auto& o = ctx.options();
  CriterionReport rep = decide_verdict(
      ctx.A_certificate(), ctx.B_certificate(), mode,
      [&](Branch b) { return discrete_trace(ctx, b); }, static_cast<double>(ctx.n_max()) / 10.0,
      o.delta, o.log_level_floor);
  rep.n_max = ctx.n_max();
  rep.horizon = ctx.horizon();
  if (rep.branch == "both series diverge") return rep;

  // Asymptotic stand-in, reported as evidence only.
  const TailKind tk = common_tail_kind(ctx);
  if (tk != TailKind::Unknown) {
    const std::size_t n = ctx.n_max();
    if (rep.min_part.evaluated) {
      const double ratio = std::exp(ctx.product_min(n)->log_mag -
                                    log_tail_shortcut(ctx, tk, Branch::Min, n));
      rep.notes.push_back(std::string(to_string(tk)) + " tails: min product / shortcut at n_max = " +
                          fmt(ratio));
    }
    if (rep.max_part.evaluated) {
      const double ratio = std::exp(ctx.product_max(n)->log_mag -
                                    log_tail_shortcut(ctx, tk, Branch::Max, n));
      rep.notes.push_back(std::string(to_string(tk)) + " tails: max product / shortcut at n_max = " +
                          fmt(ratio));
    }
  }
  return rep;
}

CriterionReport classify(const DiscreteModel& model, const CriteriaOptions& opts, Mode mode) {
  CriteriaContext ctx(model, opts);
  return classify(ctx, mode);
}

StolzBound stolz_limit(const std::vector<double>& p, const std::vector<double>& q, StolzMode mode,
                       std::size_t n0) {
  StolzBound out;
  const std::size_t n = std::min(p.size(), q.size());
  if (n < n0 + 2) throw InputError("stolz_limit needs at least two points past n0");
  out.lo = std::numeric_limits<double>::infinity();
  out.hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = n0; i + 1 < n; ++i) {
    const double dq = q[i + 1] - q[i];
    const bool monotone = mode == StolzMode::Increasing ? dq > 0 : dq < 0;
    if (!monotone) {
      out.violation = i;
      out.ok = false;
      return out;
    }
    const double ratio = (p[i + 1] - p[i]) / dq;
    out.lo = std::min(out.lo, ratio);
    out.hi = std::max(out.hi, ratio);
  }
  out.ok = true;
  return out;
}

double ratio_statistic(const CriteriaContext& ctx, std::size_t n) {
  const auto& m = ctx.model();
  const double r = ctx.harmonic().r.at(n);
  return m.birth(n) / std::sqrt(m.death(n)) - r * r * std::sqrt(m.death(n + 1));
}

SufficientReport sufficient_tests(const CriteriaContext& ctx) {
  SufficientReport rep;
  const auto& o = ctx.options();
  const std::size_t n_max = ctx.n_max();
  const auto idx = geometric_indices(std::max<std::size_t>(n_max / 10, 1), n_max, 60);
  const auto& seq = ctx.harmonic();
  const SeriesStatus sa = ctx.A_certificate().status, sb = ctx.B_certificate().status;

  std::vector<double> ln, lw, lv, lgrowth, lstat, la, lr;
  double min_r = 1.0;
  bool r_precondition = true;
  std::size_t r_precondition_fail = 0;
  double max_stat = -std::numeric_limits<double>::infinity();
  for (std::size_t n : idx) {
    ln.push_back(std::log(static_cast<double>(n)));
    const double growth = 2.0 * ctx.log_h(n) + ctx.log_mu(n) + 0.5 * ctx.log_a(n);
    lgrowth.push_back(growth);
    la.push_back(ctx.log_a(n));
    lr.push_back(std::log(seq.r[n]));
    min_r = std::min(min_r, seq.r[n]);
    if (auto B = ctx.series_B(n)) {
      lw.push_back(growth + B->log_mag);
      lv.push_back(2.0 * ctx.log_h(n) + ctx.log_mu(n) + B->log_mag);
    }
    const double stat = ratio_statistic(ctx, n);
    max_stat = std::max(max_stat, stat);
    lstat.push_back(std::log(std::max(std::fabs(stat), 1e-300)));
    const double bound = std::pow(std::exp(ctx.log_b(n) - std::log(seq.u[n]) - ctx.log_a(n + 1)), 0.25);
    if (r_precondition && !(seq.r[n] < bound)) {
      r_precondition = false;
      r_precondition_fail = n;
    }
  }
  const LineFit a_fit = fit_line(ln, la);
  const LineFit r_fit = fit_line(ln, lr);
  const LineFit g_fit = fit_line(ln, lgrowth);
  rep.stat_fit = fit_line(ln, lstat);
  const double stat_n = ratio_statistic(ctx, n_max);
  rep.stat_coefficient = stat_n / std::sqrt(static_cast<double>(n_max));
  const bool inf_a_positive = a_fit.slope >= -o.delta && ctx.log_a(n_max) > -30.0;
  const bool inf_r_positive = r_fit.slope >= -o.delta && min_r > 1e-12;
  const bool growth_infinite = g_fit.slope > o.delta;

  {
    SufficientTest t;
    t.name = "B infinite and A unbounded";
    t.precondition_met = sa == SeriesStatus::Diverges && sb == SeriesStatus::Diverges;
    t.conclusion = t.precondition_met ? "nonempty" : "none";
    t.evidence = "A: " + ctx.A_certificate().evidence + " | B: " + ctx.B_certificate().evidence;
    rep.tests.push_back(t);
  }
  std::string w_reason, v_reason;
  LimitDecision w_dec = LimitDecision::Undecided, v_dec = LimitDecision::Undecided;
  if (!lw.empty()) {
    rep.W_fit = fit_line(ln, lw);
    rep.V_fit = fit_line(ln, lv);
    w_dec = decide_limit(rep.W_fit, lw.back(), o.delta, o.log_level_floor, &w_reason);
    v_dec = decide_limit(rep.V_fit, lv.back(), o.delta, o.log_level_floor, &v_reason);
  }
  {
    SufficientTest t;
    t.name = "h^2 mu sqrt(a) B -> 0 with inf a > 0";
    t.precondition_met = sb == SeriesStatus::Converges && inf_a_positive;
    t.conclusion = t.precondition_met && w_dec == LimitDecision::Zero ? "empty" : "none";
    t.evidence = "log a slope " + fmt(a_fit.slope) + "; W: " + (lw.empty() ? "B not certified" : w_reason);
    rep.tests.push_back(t);
  }
  {
    SufficientTest t;
    t.name = "liminf h^2 mu B > 0, or liminf h^2 mu sqrt(a) B > 0 with inf r > 0";
    t.precondition_met = sb == SeriesStatus::Converges;
    const bool hit = v_dec == LimitDecision::Positive ||
                     (w_dec == LimitDecision::Positive && inf_r_positive);
    t.conclusion = t.precondition_met && hit ? "nonempty" : "none";
    t.evidence = "V: " + (lv.empty() ? std::string("B not certified") : v_reason) +
                 "; W: " + (lw.empty() ? std::string("B not certified") : w_reason) +
                 "; min r " + fmt(min_r);
    rep.tests.push_back(t);
  }
  {
    SufficientTest t;
    t.name = "ratio statistic b_n/sqrt(a_n) - r_n^2 sqrt(a_{n+1})";
    t.precondition_met = r_precondition && growth_infinite;
    std::ostringstream ev;
    ev.precision(6);
    ev << "statistic at n_max " << stat_n << " (" << rep.stat_coefficient << " sqrt(n)), log-log slope "
       << rep.stat_fit.slope << "; h^2 mu sqrt(a) log-log slope " << g_fit.slope;
    if (!r_precondition) ev << "; r_n < (b_n/(u_n a_{n+1}))^(1/4) fails at n = " << r_precondition_fail;
    t.conclusion = "none";
    if (t.precondition_met) {
      const bool to_infinity = max_stat > 0 && rep.stat_fit.slope > o.delta;
      const bool bounded = max_stat <= 0 || rep.stat_fit.slope <= o.delta;
      if (to_infinity && inf_a_positive && sb == SeriesStatus::Converges) {
        t.conclusion = "empty";
      } else if (bounded && inf_r_positive) {
        t.conclusion = "nonempty";
      }
    }
    t.evidence = ev.str();
    rep.tests.push_back(t);
  }
  return rep;
}

double log_tail_shortcut(const CriteriaContext& ctx, TailKind kind, Branch branch, std::size_t n) {
  const double log_r = std::log(ctx.harmonic().r.at(n));
  const double log_n2 = 2.0 * std::log(static_cast<double>(n));
  switch (kind) {
    case TailKind::Algebraic:
      return branch == Branch::Min ? log_n2 + log_r - ctx.log_b(n)
                                   : log_n2 - ctx.log_a(n + 1) - log_r;
    case TailKind::Exponential:
      return branch == Branch::Min ? log_r - ctx.log_b(n) : -ctx.log_a(n + 1) - log_r;
    case TailKind::Unknown: break;
  }
  throw InputError("tail shortcut requires a detected tail class");
}

TailKind common_tail_kind(const CriteriaContext& ctx) {
  const TailKind a = ctx.A_certificate().kind, b = ctx.B_certificate().kind;
  return a == b ? a : TailKind::Unknown;
}

}  // namespace specdisc
