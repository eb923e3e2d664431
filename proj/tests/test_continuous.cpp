#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specdisc/continuous.hpp"
#include "specdisc/errors.hpp"
#include "specdisc/gallery.hpp"
#include "specdisc/quadrature.hpp"
#include "test_support.hpp"

using namespace specdisc;
using specdisc::testing::rel_diff;

namespace {

DiffusionModel make(const std::string& a, const std::string& b, const std::string& c,
                    Domain d = Domain::HalfLine) {
  DiffusionModel m;
  m.name = "test";
  m.a = ScalarFunction::parse(a);
  m.b = ScalarFunction::parse(b);
  m.c = ScalarFunction::parse(c);
  m.domain = d;
  return m;
}

PicardOptions on(double lo, double hi) {
  PicardOptions o;
  o.lo = lo;
  o.hi = hi;
  return o;
}

/// Even whole-line version of the (1+x)^g diffusion.
DiffusionModel even_power_diffusion(double g) {
  const std::string G = std::to_string(g);
  return make("(1+abs(x))^" + G, "sign(x)*" + std::to_string(4 * g / 5) + "*(1+abs(x))^(" + G + "-1)",
              std::to_string(g * (9 * g - 10) / 100) + "*(1+abs(x))^(" + G + "-2)", Domain::WholeLine);
}

}  // namespace

TEST_CASE("Gauss rule integrates polynomials through degree 15") {
  const GaussRule& r = gauss_rule();
  for (int deg = 0; deg <= 15; ++deg) {
    double s = 0.0;
    for (std::size_t j = 0; j < GaussRule::kOrder; ++j) s += r.weights[j] * std::pow(r.nodes[j], deg);
    const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-14));
  }
  // Partial integrals of the interpolant of x^3 over [-1, node_j].
  for (std::size_t j = 0; j < GaussRule::kOrder; ++j) {
    double s = 0.0;
    for (std::size_t m = 0; m < GaussRule::kOrder; ++m) s += r.partial[j][m] * std::pow(r.nodes[m], 3);
    CHECK(s == doctest::Approx((std::pow(r.nodes[j], 4) - 1.0) / 4.0).epsilon(1e-13));
  }
}

TEST_CASE("cumulative integrals and interpolation on a grid") {
  const CellGrid g = make_grid(-2.0, 3.0, 0.5, [](double) { return 0.25; }, {1.7});
  bool has_forced = false;
  for (double e : g.edges()) has_forced = has_forced || e == 1.7;
  CHECK(has_forced);
  CHECK(g.edge(g.theta_edge()) == 0.5);
  const GridValues f = GridValues::sample(g, [](double x) { return std::cos(x); });
  const GridValues F = integrate_from_theta(g, f);
  for (std::size_t k = 0; k < g.edges().size(); ++k)
    CHECK(F.edge[k] == doctest::Approx(std::sin(g.edge(k)) - std::sin(0.5)).epsilon(1e-13));
  for (double x : {-1.9, -0.3, 0.51, 2.99}) CHECK(interpolate(g, f, x) == doctest::Approx(std::cos(x)).epsilon(1e-12));
  double total = 0.0;
  for (double v : cell_integrals(g, f)) total += v;
  CHECK(total == doctest::Approx(std::sin(3.0) - std::sin(-2.0)).epsilon(1e-13));
}

TEST_CASE("adaptive integral and finite-difference weights") {
  CHECK(adaptive_integral([](double x) { return std::exp(-x); }, 0.0, 5.0) ==
        doctest::Approx(1 - std::exp(-5.0)).epsilon(1e-13));
  CHECK(adaptive_integral([](double x) { return x; }, 1.0, 0.0) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(adaptive_integral([](double x) { return 1.0 / x; }, 0.0, 1.0), InputError);
  const auto w = fd_weights(0.0, {-0.1, 0.0, 0.1}, 2);
  CHECK(w[0] == doctest::Approx(100.0));
  CHECK(w[1] == doctest::Approx(-200.0));
  CHECK(w[2] == doctest::Approx(100.0));
}

TEST_CASE("drift integral and measures") {
  const MeasurePoint z = C_and_measures(make("2", "0", "0"), 3.0);
  CHECK(z.C == 0.0);
  CHECK(z.mu_density == doctest::Approx(0.5));
  CHECK(z.nu_hat_density == doctest::Approx(1.0));

  const double g = 3.0;
  const DiffusionModel p = power_diffusion_model(g);
  for (double x : {0.5, 10.0, 100.0}) {
    const MeasurePoint m = C_and_measures(p, x);
    CHECK(m.C == doctest::Approx(0.8 * g * std::log1p(x)).epsilon(1e-12));
    CHECK(m.mu_density == doctest::Approx(std::pow(1 + x, -g / 5)).epsilon(1e-11));
    CHECK(m.nu_hat_density == doctest::Approx(std::pow(1 + x, -4 * g / 5)).epsilon(1e-11));
  }
  const DiffusionModel d = drift_family_model(3.0);
  CHECK(C_and_measures(d, 2.0).C == doctest::Approx(-8.0 / 3.0).epsilon(1e-12));

  const CellGrid grid = make_grid(0.0, 50.0, 0.0, [](double) { return 0.5; });
  const DriftIntegral C(p, grid);
  for (double x : {0.3, 7.77, 49.0}) CHECK(C(x) == doctest::Approx(C_and_measures(p, x).C).epsilon(1e-12));
}

TEST_CASE("Picard without killing returns the initial value") {
  const PicardSolution s = picard_solve(make("1", "x", "0"), on(0, 5));
  REQUIRE(s.converged);
  CHECK(s.iterations <= 1);
  for (double x : {0.0, 2.5, 5.0}) CHECK(s.evaluate(x) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Picard reproduces exp(x^2/4) and exp(x^2/2)") {
  PicardOptions o = on(0, 3);
  o.keep_iterates = true;
  const PicardSolution s = picard_solve(power_potential_model(2.0), o);
  REQUIRE(s.converged);
  CHECK(s.iterations <= 60);
  CHECK(s.monotone);
  CHECK(s.residual < 10 * o.tol);
  CHECK(s.sign_changes == 0);
  for (double x = 0.0; x <= 3.0; x += 0.125) CHECK(rel_diff(s.evaluate(x), std::exp(x * x / 4)) < 1e-6);
  for (std::size_t k = 1; k < s.iterates.size(); ++k)
    for (std::size_t i = 0; i < s.iterates[k].f.node.size(); ++i)
      CHECK(s.iterates[k].f.node[i] >= s.iterates[k - 1].f.node[i]);

  const PicardSolution t = picard_solve(shifted_oscillator_model(), on(-3, 3));
  REQUIRE(t.converged);
  for (double x : {-3.0, -1.0, 0.0, 2.0, 3.0}) CHECK(rel_diff(t.evaluate(x), std::exp(x * x / 2)) < 1e-6);
}

TEST_CASE("Picard flags nonconvergence") {
  PicardOptions o = on(0, 20);
  o.max_iter = 3;
  const PicardSolution s = picard_solve(shifted_oscillator_model(), o);
  CHECK_FALSE(s.converged);
}

TEST_CASE("grid refinement barely moves the solution") {
  PicardOptions coarse = on(0, 3);
  PicardOptions fine = coarse;
  fine.max_cell_width = coarse.max_cell_width / 2;
  const PicardSolution a = picard_solve(power_potential_model(2.0), coarse);
  const PicardSolution b = picard_solve(power_potential_model(2.0), fine);
  for (double x = 0.0; x <= 3.0; x += 0.25) CHECK(rel_diff(a.evaluate(x), b.evaluate(x)) < 5 * coarse.tol);
}

TEST_CASE("Peano-Baker terms") {
  const double al = 2.0;
  const PeanoBakerTerms pb = peano_baker_terms(power_potential_model(al), on(0, 3), 7);
  for (double x : {0.5, 1.0, 2.0}) {
    const double closed = std::pow(x, al) / (2 * al) + std::pow(x, 2 * al) / (8 * al * (2 * al - 1));
    CHECK(std::fabs(pb.f(2, x) - closed) < 1e-10);
    CHECK(pb.f(1, x) == 0.0);
    CHECK(pb.f(3, x) == 0.0);
  }
}

TEST_CASE("Peano-Baker partial sums equal the Picard iterates") {
  const DiffusionModel m = make("1 + x/2", "sin(3*x)", "1 + 0.5*sin(3*x) + x^2");
  PicardOptions o = on(0, 1);
  o.keep_iterates = true;
  o.max_iter = 6;
  const PicardSolution s = picard_solve(m, o);
  const PeanoBakerTerms pb = peano_baker_terms(m, o, 6);
  REQUIRE(s.iterates.size() >= 6);
  for (std::size_t n = 0; n < 6; ++n) {
    for (std::size_t i = 0; i < s.iterates[n].f.node.size(); ++i) {
      double sum_f = 0.0, sum_flux = 0.0;
      for (std::size_t k = 0; k <= n; ++k) {
        sum_f += pb.terms[k].f.node[i];
        sum_flux += pb.terms[k].flux.node[i];
      }
      CHECK(std::fabs(sum_f - s.iterates[n].f.node[i]) < 1e-12);
      CHECK(std::fabs(sum_flux - s.iterates[n].flux.node[i]) < 1e-12);
    }
  }
}

TEST_CASE("comparison: supersolutions dominate the minimal solution") {
  // F-bar solves the scheme for killing 1.1 c + 0.1 from 1.1 times the initial
  // data, so F-bar' = G-bar F-bar >= G F-bar with F-bar(0) >= F(0).
  const DiffusionModel m = power_potential_model(2.0);
  DiffusionModel big = m;
  big.c = ScalarFunction([c = m.c](double x) { return 1.1 * c(x) + 0.1; }, "1.1 c + 0.1");
  PicardOptions o = on(0, 3);
  const PicardSolution s = picard_solve(m, o);
  o.gamma0 = 1.1;
  const PicardSolution bar = picard_solve(big, o);
  REQUIRE(s.converged);
  REQUIRE(bar.converged);
  for (double x = 0.0; x <= 3.0; x += 0.05) {
    CHECK(bar.evaluate(x) >= s.evaluate(x));
    CHECK(bar.flux(x) >= s.flux(x) - 1e-12);
    CHECK(1.1 * s.evaluate(x) >= s.evaluate(x));
  }
  CHECK(0.9 * s.evaluate(3.0) < s.evaluate(3.0));
}

TEST_CASE("harmonic residuals of known harmonic functions") {
  CHECK(harmonic_residual(power_potential_model(2.0), power_potential_psi(2.0), 0.5, 3.0, 10000) < 1e-6);
  CHECK(harmonic_residual(power_diffusion_model(3.0), power_diffusion_psi(3.0), 0.0, 100.0, 10000, 8) < 1e-8);
  CHECK(harmonic_residual(make("1", "sin(x)", "0"), ScalarFunction::constant(0.0), 0.0, 5.0, 200) == 0.0);
  CHECK(harmonic_residual(power_potential_model(2.0), ScalarFunction::parse("x^2/5"), 0.5, 3.0, 1000) > 0.01);
}

TEST_CASE("h-transform") {
  const DiffusionModel tilde = make("1 + x", "x", "0");
  const TransformResult id = h_transform(tilde, ScalarFunction::constant(0.0), 0.0, 5.0);
  for (double x : {0.1, 1.0, 4.0}) {
    CHECK(id.model.b(x) == doctest::Approx(tilde.b(x)));
    CHECK(std::fabs(id.model.c(x)) < 1e-12);
  }

  // Drift family with alpha = 2: target drift b = 0 and b = -2x.
  const DiffusionModel drift = drift_family_model(2.0);
  for (const char* target : {"0", "-2*x"}) {
    const ScalarFunction b = ScalarFunction::parse(target);
    const TransformResult r = h_transform_to_drift(drift, b, 0.1, 5.0);
    for (double x : {0.5, 1.0, 3.0}) {
      const double bp = (b(x + 1e-4) - b(x - 1e-4)) / 2e-4;
      const double zero_order = 0.5 * (0.5 * b(x) * b(x) + bp - (0.5 * x * x - 1.0));
      CHECK(r.model.c(x) == doctest::Approx(-zero_order).epsilon(1e-6));
      CHECK(r.model.b(x) == doctest::Approx(b(x)).epsilon(1e-8));
    }
  }

  // Transforming the killing-free part back recovers the killing.
  const DiffusionModel m = power_potential_model(2.0);
  const ScalarFunction psi = power_potential_psi(2.0);
  const TransformResult back = h_transform(killing_free_part(m, psi), psi, 0.5, 3.0);
  CHECK_FALSE(back.negative_killing);
  for (double x = 0.5; x <= 3.0; x += 0.1) CHECK(std::fabs(back.model.c(x) - m.c(x)) < 1e-8);
}

TEST_CASE("half-line integrals of the (1+x)^g family") {
  const double g = 3.0;
  ContinuousOptions o;
  o.x_max = 100.0;
  const HalfLineIntegrals I(power_diffusion_model(g), power_diffusion_psi(g), o, {10.0, 100.0});
  REQUIRE(I.B_certificate().status == SeriesStatus::Converges);
  CHECK(I.A_certificate().status == SeriesStatus::Diverges);
  for (double x : {10.0, 100.0}) {
    CHECK(std::exp(I.log_prefix_A(x)) == doctest::Approx(x).epsilon(1e-8));
    CHECK(std::exp(I.log_tail_B(x)) == doctest::Approx(std::pow(1 + x, 1 - g) / (g - 1)).epsilon(1e-8));
  }
}

TEST_CASE("half-line verdicts") {
  auto verdict = [](const DiffusionModel& m, const ScalarFunction& psi, double x_max, Mode mode) {
    ContinuousOptions o;
    o.x_max = x_max;
    o.mode = mode;
    return criteria_halfline(m, psi, o).result.verdict;
  };
  CHECK(verdict(power_diffusion_model(3.0), power_diffusion_psi(3.0), 1000, Mode::Min) == Verdict::DiscreteMin);
  CHECK(verdict(power_diffusion_model(1.5), power_diffusion_psi(1.5), 1000, Mode::Min) == Verdict::NotDiscrete);
  CHECK(verdict(drift_family_model(2.0), ScalarFunction::constant(0), 5, Mode::Max) == Verdict::DiscreteMax);
  CHECK(verdict(drift_family_model(1.0), ScalarFunction::constant(0), 100, Mode::Max) == Verdict::NotDiscrete);
  const ContinuousReport flat = criteria_halfline(make("1", "0", "0"), ScalarFunction::constant(0));
  CHECK(flat.result.verdict == Verdict::NotDiscrete);
  CHECK(flat.result.branch == "both series diverge");
}

TEST_CASE("whole-line criterion") {
  ContinuousOptions o;
  o.x_max = 10.0;
  o.mode = Mode::Min;
  CHECK(criteria_wholeline(shifted_oscillator_model(), shifted_oscillator_psi(), o).result.verdict ==
        Verdict::DiscreteMin);
  CHECK(criteria_wholeline(make("1", "0", "0", Domain::WholeLine), ScalarFunction::constant(0), o).result.verdict ==
        Verdict::NotDiscrete);

  ContinuousOptions p;
  p.x_max = 1000.0;
  p.mode = Mode::Min;
  const ScalarFunction psi = ScalarFunction::parse("0.3*log(1+abs(x))");
  const ContinuousReport whole = criteria_wholeline(even_power_diffusion(3.0), psi, p);
  const ContinuousReport half = criteria_halfline(power_diffusion_model(3.0), power_diffusion_psi(3.0), p);
  CHECK(whole.result.verdict == Verdict::DiscreteMin);
  REQUIRE(whole.right);
  REQUIRE(whole.left);
  const auto& tw = whole.result.min_part.trace;
  const auto& th = half.result.min_part.trace;
  REQUIRE(tw.size() == th.size());
  for (std::size_t i = 0; i < tw.size(); ++i) CHECK(tw[i].log_S == doctest::Approx(th[i].log_S + std::log(2.0)).epsilon(1e-6));

  CHECK_THROWS_WITH_AS(criteria_wholeline(make("1", "0", "0", Domain::WholeLine), ScalarFunction::parse("x"), o),
                       doctest::Contains("outside the implemented symmetric case"), InputError);
}

TEST_CASE("mirrored coefficients") {
  const DiffusionModel m = make("1 + x^2", "x^3", "exp(x)", Domain::WholeLine);
  const DiffusionModel r = mirror(m);
  CHECK(r.a(2.0) == doctest::Approx(5.0));
  CHECK(r.b(2.0) == doctest::Approx(8.0));
  CHECK(r.c(2.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("Molchanov sanity check") {
  const MolchanovCheck osc = molchanov_check(oscillator_model(), 100);
  CHECK(osc.applicable);
  CHECK(osc.conclusion == "discrete");
  CHECK(molchanov_check(make("1", "0", "1"), 100).conclusion == "not discrete");
  CHECK_FALSE(molchanov_check(power_diffusion_model(3.0), 100).applicable);
}
