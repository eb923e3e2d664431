#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specdisc/criteria.hpp"
#include "specdisc/gallery.hpp"
#include "specdisc/tail.hpp"
#include "test_support.hpp"

using namespace specdisc;

namespace {

CriteriaOptions with_n_max(std::size_t n) {
  CriteriaOptions o;
  o.n_max = n;
  return o;
}

/// log of sum_{k=lo}^{hi} exp(terms[k]) by plain LogSum.
double window(const std::vector<double>& terms, std::size_t lo, std::size_t hi) {
  LogSum s;
  for (std::size_t k = lo; k <= hi; ++k) s.add_log(terms[k]);
  return s.log_value();
}

}  // namespace

TEST_CASE("line fit and geometric sampling") {
  const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2));
  CHECK(f.intercept == doctest::Approx(1));
  CHECK(f.rms < 1e-12);
  const auto s = geometric_samples(1000, 1.25);
  CHECK(s.front() == 1);
  CHECK(s.back() == 1000);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
  const auto g = geometric_indices(100, 1000, 20);
  CHECK(g.front() >= 100);
  CHECK(g.back() == 1000);
}

TEST_CASE("series certification of reference sequences") {
  const std::size_t N = 40000;
  std::vector<double> inv_sq(N + 1), inv(N + 1), geo(N + 1), flat(N + 1, 0.0);
  for (std::size_t k = 0; k <= N; ++k) {
    inv_sq[k] = -2.0 * std::log(k + 1.0);
    inv[k] = -std::log(k + 1.0);
    geo[k] = -0.5 * double(k);
  }
  const SeriesCertificate a = certify_sum(inv_sq);
  CHECK(a.status == SeriesStatus::Converges);
  CHECK(a.kind == TailKind::Algebraic);
  CHECK(a.exponent == doctest::Approx(-2).epsilon(0.01));
  // Remainder of sum 1/(k+1)^2 beyond N is about 1/(N+1).
  CHECK(std::exp(a.log_remainder) * (N + 1.0) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(certify_sum(inv).status == SeriesStatus::Diverges);
  CHECK(certify_sum(flat).status == SeriesStatus::Diverges);
  const SeriesCertificate e = certify_sum(geo);
  CHECK(e.status == SeriesStatus::Converges);
  CHECK(e.kind == TailKind::Exponential);
  const double exact_tail = -0.5 * (N + 1.0) - std::log1p(-std::exp(-0.5));
  CHECK(e.log_remainder == doctest::Approx(exact_tail).epsilon(1e-6));
}

TEST_CASE("limit decisions") {
  LineFit f;
  f.slope = -1.0;
  f.se = 0.01;
  CHECK(decide_limit(f, 0.0, 0.05, std::log(1e-8)) == LimitDecision::Zero);
  f.slope = 0.001;
  CHECK(decide_limit(f, 0.0, 0.05, std::log(1e-8)) == LimitDecision::Positive);
  CHECK(decide_limit(f, -30.0, 0.05, std::log(1e-8)) == LimitDecision::Undecided);
  f.slope = -0.04;
  f.se = 0.02;
  CHECK(decide_limit(f, 0.0, 0.05, std::log(1e-8)) == LimitDecision::Undecided);
}

TEST_CASE("Stolz bounds") {
  std::vector<double> p, q, ps;
  for (int n = 1; n <= 200; ++n) {
    q.push_back(n);
    p.push_back(2.0 * n);
    ps.push_back(n + std::sin(double(n)));
  }
  const StolzBound b = stolz_limit(p, q, StolzMode::Increasing);
  REQUIRE(b.ok);
  CHECK(b.lo == doctest::Approx(2));
  CHECK(b.hi == doctest::Approx(2));
  const StolzBound s = stolz_limit(ps, q, StolzMode::Increasing);
  REQUIRE(s.ok);
  CHECK(s.lo <= 1.0);
  CHECK(s.hi >= 1.0);
  std::vector<double> bad = q;
  bad[50] = bad[49];
  const StolzBound v = stolz_limit(p, bad, StolzMode::Increasing);
  CHECK_FALSE(v.ok);
  REQUIRE(v.violation);
  CHECK(*v.violation == 49);
}

TEST_CASE("Stolz difference ratio of A_n against 1/B_n on linear rates with linear killing") {
  // (A_{n+1} - A_n) / (1/B_{n+1} - 1/B_n) = mu_{n+1} h_{n+1}^2 B_n B_{n+1} / t_n with
  // t_n = 1/(h_n h_{n+1} mu_n b_n), written out term by term.
  const CriteriaContext ctx(linear_rates_linear_killing_model(), with_n_max(1000));
  std::vector<double> A, invB;
  for (std::size_t n = 100; n <= 200; ++n) {
    A.push_back(ctx.series_A(n).value());
    invB.push_back(1.0 / ctx.series_B(n)->value());
  }
  for (std::size_t i = 0; i + 1 < A.size(); ++i) {
    const std::size_t n = 100 + i;
    const double ratio = (A[i + 1] - A[i]) / (invB[i + 1] - invB[i]);
    const double closed = std::exp(ctx.log_mu(n + 1) + 2 * ctx.log_h(n + 1) + ctx.series_B(n)->log_mag +
                                   ctx.series_B(n + 1)->log_mag + ctx.log_h(n) + ctx.log_h(n + 1) +
                                   ctx.log_mu(n) + ctx.log_b(n));
    CHECK(ratio == doctest::Approx(closed).epsilon(1e-6));
  }
  const StolzBound s = stolz_limit(A, invB, StolzMode::Increasing);
  REQUIRE(s.ok);
  CHECK(s.hi < 0.05);
  CHECK(s.lo > 0.0);
}

TEST_CASE("min product keeps k = n in the inner sum") {
  const CriteriaContext ctx(linear_rates_linear_killing_model(), with_n_max(2000));
  const auto& B = ctx.log_B_terms();
  const double rem = ctx.B_certificate().log_remainder;
  for (std::size_t n : {10, 100, 1000, 2000}) {
    const double inner = log_add(window(B, n, ctx.horizon()), rem);
    const double direct = window(ctx.log_A_terms(), 0, n) + inner;
    CHECK(ctx.product_min(n)->log_mag == doctest::Approx(direct).epsilon(1e-12));
    const double swapped = window(ctx.log_A_terms(), 0, n) + log_add(window(B, n + 1, ctx.horizon()), rem);
    CHECK(std::fabs(direct - swapped) > 0.5);  // dropping k = n loses most of the sum
  }
}

TEST_CASE("max product starts the outer sum at j = n + 1") {
  const CriteriaContext ctx(equal_power_model(3.0), with_n_max(2000));
  REQUIRE(ctx.A_certificate().status == SeriesStatus::Converges);
  const auto& A = ctx.log_A_terms();
  const double rem = ctx.A_certificate().log_remainder;
  for (std::size_t n : {5, 50, 500}) {
    const double outer = log_add(window(A, n + 1, ctx.horizon()), rem);
    const double direct = outer + window(ctx.log_B_terms(), 0, n);
    CHECK(ctx.product_max(n)->log_mag == doctest::Approx(direct).epsilon(1e-12));
    const double swapped = log_add(window(A, n, ctx.horizon()), rem) + window(ctx.log_B_terms(), 0, n);
    CHECK(std::fabs(direct - swapped) > 1.0 / (4.0 * n));
  }
}

TEST_CASE("tail shortcut agrees with the direct products within a factor of two") {
  for (const DiscreteModel& m : {linear_rates_linear_killing_model(), shifted_power_model(3.0)}) {
    CAPTURE(m.name);
    const CriteriaContext ctx(m, with_n_max(10000));
    const TailKind tk = common_tail_kind(ctx);
    REQUIRE(tk != TailKind::Unknown);
    for (std::size_t n : {1000, 10000}) {
      const double ratio = std::exp(ctx.product_min(n)->log_mag - log_tail_shortcut(ctx, tk, Branch::Min, n));
      CHECK(ratio >= 0.5);
      CHECK(ratio <= 2.0);
    }
  }
  const CriteriaContext cubic(shifted_power_model(3.0), with_n_max(1000));
  CHECK(std::exp(log_tail_shortcut(cubic, TailKind::Algebraic, Branch::Min, 1000)) ==
        doctest::Approx(1e-3).epsilon(1e-2));
}

TEST_CASE("expected verdicts for the killed chains") {
  const CriteriaOptions o = with_n_max(10000);
  CHECK(classify(unit_rates_decaying_killing_model(), o, Mode::Min).verdict == Verdict::NotDiscrete);
  CHECK(classify(linear_rates_linear_killing_model(), o, Mode::Min).verdict == Verdict::DiscreteMin);
  CHECK(classify(quadratic_rates_model(), o, Mode::Min).verdict == Verdict::NotDiscrete);
}

TEST_CASE("both series divergent skips the products") {
  const CriterionReport r = classify(shifted_power_model(1.0), with_n_max(2000));
  CHECK(r.verdict == Verdict::NotDiscrete);
  CHECK(r.branch == "both series diverge");
  CHECK_FALSE(r.min_part.evaluated);
  CHECK_FALSE(r.max_part.evaluated);
}

TEST_CASE("BothDiscrete needs both products to vanish") {
  const CriterionReport r = classify(quartic_birth_model(), with_n_max(10000));
  CHECK(r.verdict == Verdict::BothDiscrete);
  CHECK(r.min_part.outcome == PartOutcome::Discrete);
  CHECK(r.max_part.outcome == PartOutcome::Discrete);
  const CriterionReport m = classify(quartic_birth_model(), with_n_max(10000), Mode::Min);
  CHECK(m.verdict == Verdict::DiscreteMin);
}

TEST_CASE("ratio statistic against its closed form on linear rates") {
  const CriteriaContext ctx(linear_rates_linear_killing_model(), with_n_max(10000));
  const HarmonicSeq& s = ctx.harmonic();
  for (std::size_t n : {1, 10, 1000, 10000}) {
    const double closed = (std::sqrt(n + 1.0) - s.r[n] * s.r[n] * std::sqrt(n + 2.0)) / 2.0;
    CHECK(ratio_statistic(ctx, n) == doctest::Approx(closed).epsilon(1e-12));
  }
  const SufficientReport rep = sufficient_tests(ctx);
  REQUIRE(rep.tests.size() == 4);
  CHECK(rep.tests[3].conclusion == "empty");
  CHECK(rep.stat_fit.slope == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sufficient tests flag nonempty essential spectrum for unit rates with decaying killing") {
  const CriteriaContext ctx(unit_rates_decaying_killing_model(), with_n_max(10000));
  const SufficientReport rep = sufficient_tests(ctx);
  bool nonempty = false;
  for (const SufficientTest& t : rep.tests) {
    CAPTURE(t.name);
    CHECK(t.conclusion != "empty");
    nonempty = nonempty || t.conclusion == "nonempty";
  }
  CHECK(nonempty);
}
