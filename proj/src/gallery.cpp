#include "specdisc/gallery.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>

#include "specdisc/errors.hpp"

namespace specdisc {

namespace {

std::string num(double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

RateSequence seq(const std::string& text) { return RateSequence::formula(text); }

ScalarFunction fx(const std::string& text) { return ScalarFunction::parse(text); }

}  // namespace

DiscreteModel quartic_birth_model() {
  DiscreteModel m = from_b_and_mu(seq("n^4").with_override(0, 1.0), seq("n^-2").with_override(0, 1.0),
                                  "quartic birth, inverse-square measure");
  return m;
}

DiscreteModel shifted_power_model(double g) {
  DiscreteModel m;
  m.name = "birth n^" + num(g) + " equal to the next death";
  m.b = seq("n^" + num(g)).with_override(0, 1.0);
  m.a = seq("(n-1)^" + num(g)).with_override(1, 1.0);
  m.c = RateSequence::constant(0.0);
  return m;
}

DiscreteModel equal_power_model(double g) {
  DiscreteModel m;
  m.name = "equal birth and death n^" + num(g);
  m.b = seq("n^" + num(g)).with_override(0, 1.0);
  m.a = seq("n^" + num(g));
  m.c = RateSequence::constant(0.0);
  return m;
}

DiscreteModel shifted_power_local_killing_model(double g) {
  DiscreteModel m = shifted_power_model(g);
  m.name += ", unit killing on {0..4}";
  for (std::size_t n = 0; n < 5; ++n) m.c = m.c.with_override(n, 1.0);
  return m;
}

DiscreteModel unit_rates_decaying_killing_model() {
  return {"unit rates, killing 1/(n+1)", seq("1"), seq("1"), seq("1/(n+1)")};
}

DiscreteModel linear_rates_linear_killing_model() {
  return {"rates (n+1)/4, killing 9(n+1)/16", seq("(n+1)/4"), seq("(n+1)/4"), seq("9*(n+1)/16")};
}

DiscreteModel quadratic_rates_model() {
  return {"rates (n+1)^2, killing 5 + 10/(5n-12)", seq("(n+1)^2"), seq("(n+1)^2"), seq("5 + 10/(5*n - 12)")};
}

DiffusionModel power_potential_model(double p) {
  DiffusionModel m;
  m.name = "potential for psi = x^" + num(p) + "/" + num(2 * p);
  m.a = ScalarFunction::constant(1.0);
  m.b = ScalarFunction::constant(0.0);
  m.c = fx("x^(" + num(2 * p - 2) + ")/4 + (" + num(p - 1) + ")/2*x^(" + num(p - 2) + ")");
  if (p == 1.0) m.c = ScalarFunction::constant(0.25);
  return m;
}

ScalarFunction power_potential_psi(double p) { return fx("x^" + num(p) + "/" + num(2 * p)); }

DiffusionModel oscillator_model() {
  DiffusionModel m;
  m.name = "harmonic oscillator";
  m.a = ScalarFunction::constant(1.0);
  m.b = ScalarFunction::constant(0.0);
  m.c = fx("x^2");
  m.domain = Domain::WholeLine;
  return m;
}

DiffusionModel shifted_oscillator_model() {
  DiffusionModel m = oscillator_model();
  m.name = "harmonic oscillator, potential shifted by 1";
  m.c = fx("x^2 + 1");
  return m;
}

ScalarFunction shifted_oscillator_psi() { return fx("x^2/2"); }

DiffusionModel power_diffusion_model(double g) {
  DiffusionModel m;
  m.name = "diffusion (1+x)^" + num(g);
  m.a = fx("(1+x)^" + num(g));
  m.b = fx(num(4 * g / 5) + "*(1+x)^(" + num(g - 1) + ")");
  m.c = fx(num(g * (9 * g - 10) / 100) + "*(1+x)^(" + num(g - 2) + ")");
  return m;
}

ScalarFunction power_diffusion_psi(double g) { return fx(num(g / 10) + "*log(1+x)"); }

DiffusionModel drift_family_model(double p) {
  DiffusionModel m;
  m.name = "drift -x^" + num(p - 1) + " without killing";
  m.a = ScalarFunction::constant(1.0);
  m.b = p == 1.0 ? ScalarFunction::constant(-1.0) : fx("-x^(" + num(p - 1) + ")");
  m.c = ScalarFunction::constant(0.0);
  return m;
}

std::vector<GalleryEntry> gallery() {
  std::vector<GalleryEntry> g;
  auto discrete = [&](DiscreteModel m, std::string expectation, std::vector<Verdict> ok, Mode mode) {
    GalleryEntry e;
    e.name = m.name;
    e.expectation = std::move(expectation);
    e.accepted = std::move(ok);
    e.mode = mode;
    e.discrete = std::move(m);
    g.push_back(std::move(e));
  };
  auto continuous = [&](DiffusionModel m, ScalarFunction psi, std::string expectation,
                        std::vector<Verdict> ok, Mode mode, double x_max) {
    GalleryEntry e;
    e.name = m.name;
    e.expectation = std::move(expectation);
    e.accepted = std::move(ok);
    e.mode = mode;
    e.diffusion = std::move(m);
    e.psi = std::move(psi);
    e.x_max = x_max;
    g.push_back(std::move(e));
  };
  using V = Verdict;
  discrete(quartic_birth_model(), "min and max spectra discrete", {V::BothDiscrete}, Mode::Both);
  for (double gm : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    std::vector<V> ok = gm > 2 ? std::vector<V>{V::DiscreteMin} : std::vector<V>{V::NotDiscrete};
    if (gm == 2.0) ok.push_back(V::Inconclusive);
    discrete(shifted_power_model(gm), "min spectrum discrete iff exponent > 2", ok, Mode::Both);
  }
  for (double gm : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    std::vector<V> ok = gm > 2 ? std::vector<V>{V::DiscreteMax} : std::vector<V>{V::NotDiscrete};
    if (gm == 2.0) ok.push_back(V::Inconclusive);
    discrete(equal_power_model(gm), "max spectrum discrete iff exponent > 2", ok, Mode::Both);
  }
  discrete(shifted_power_local_killing_model(3.0), "killing on a finite set changes nothing",
           {V::DiscreteMin}, Mode::Both);
  discrete(unit_rates_decaying_killing_model(), "min spectrum not discrete", {V::NotDiscrete}, Mode::Min);
  discrete(linear_rates_linear_killing_model(), "min spectrum discrete", {V::DiscreteMin}, Mode::Min);
  discrete(quadratic_rates_model(), "min spectrum not discrete", {V::NotDiscrete}, Mode::Min);

  continuous(power_potential_model(2.0), power_potential_psi(2.0), "discrete spectrum", {V::DiscreteMin},
             Mode::Min, 30.0);
  continuous(power_potential_model(1.0), power_potential_psi(1.0), "constant potential: not discrete",
             {V::NotDiscrete}, Mode::Min, 100.0);
  continuous(shifted_oscillator_model(), shifted_oscillator_psi(), "discrete spectrum on the line",
             {V::DiscreteMin}, Mode::Min, 10.0);
  continuous(power_diffusion_model(3.0), power_diffusion_psi(3.0), "discrete iff exponent > 2",
             {V::DiscreteMin}, Mode::Min, 1000.0);
  continuous(power_diffusion_model(1.5), power_diffusion_psi(1.5), "discrete iff exponent > 2",
             {V::NotDiscrete}, Mode::Min, 1000.0);
  continuous(drift_family_model(2.0), ScalarFunction::constant(0.0), "max spectrum discrete iff p > 1",
             {V::DiscreteMax}, Mode::Max, 5.0);
  continuous(drift_family_model(1.0), ScalarFunction::constant(0.0), "max spectrum discrete iff p > 1",
             {V::NotDiscrete}, Mode::Max, 100.0);
  return g;
}

GalleryRow run_gallery_entry(const GalleryEntry& e) {
  GalleryRow row;
  row.name = e.name;
  for (std::size_t i = 0; i < e.accepted.size(); ++i)
    row.expected += (i ? " or " : "") + std::string(to_string(e.accepted[i]));
  const auto t0 = std::chrono::steady_clock::now();
  Verdict got = Verdict::Inconclusive;
  try {
    if (e.discrete) {
      CriteriaOptions o;
      o.n_max = e.n_max;
      const CriterionReport r = classify(*e.discrete, o, e.mode);
      got = r.verdict;
      row.detail = r.branch;
    } else if (e.diffusion) {
      ContinuousOptions o;
      o.x_max = e.x_max;
      o.mode = e.mode;
      const ContinuousReport r = e.diffusion->domain == Domain::WholeLine
                                     ? criteria_wholeline(*e.diffusion, e.psi, o)
                                     : criteria_halfline(*e.diffusion, e.psi, o);
      got = r.result.verdict;
      row.detail = r.result.branch;
    }
    row.got = to_string(got);
    row.pass = std::find(e.accepted.begin(), e.accepted.end(), got) != e.accepted.end();
  } catch (const std::exception& ex) {
    row.got = "error";
    row.detail = ex.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace specdisc
