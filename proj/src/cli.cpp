#include "specdisc/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "specdisc/continuous.hpp"
#include "specdisc/criteria.hpp"
#include "specdisc/duality.hpp"
#include "specdisc/errors.hpp"
#include "specdisc/gallery.hpp"
#include "specdisc/harmonic.hpp"
#include "specdisc/io.hpp"
#include "specdisc/oracle.hpp"
#include "specdisc/single_birth.hpp"

namespace specdisc {

namespace {

struct Globals {
  std::string format;
  std::string output;
  unsigned long seed = 0;  // reserved; every computation is deterministic
};

Mode parse_mode(const std::string& s) {
  if (s == "min") return Mode::Min;
  if (s == "max") return Mode::Max;
  return Mode::Both;
}

Boundary parse_boundary(const std::string& s) { return s == "max" ? Boundary::Free : Boundary::Dirichlet; }

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(item, &pos);
      if (pos != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InputError("truncation sizes must be positive integers, got '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("no truncation sizes given");
  return out;
}

std::string csv_num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

DiscreteModel load_discrete(const std::string& path, std::size_t probe) {
  DiscreteModel m = discrete_model_from_json(read_json_file(path));
  const ValidationReport v = validate_model(m, probe);
  if (!v.ok()) throw InputError("invalid model: " + v.summary());
  return m;
}

void emit(const Globals& g, const std::string& fallback, const json& j, const std::string& csv,
          const std::string& table, std::ostream& out) {
  const std::string fmt = g.format.empty() ? fallback : g.format;
  std::string text;
  if (fmt == "json") {
    text = j.dump(2) + "\n";
  } else if (fmt == "csv") {
    if (csv.empty()) throw InputError("this subcommand has no CSV output");
    text = csv;
  } else {
    if (table.empty()) throw InputError("this subcommand has no table output");
    text = table;
  }
  if (g.output.empty()) {
    out << text;
  } else {
    std::ofstream f(g.output);
    if (!f) throw InputError("cannot write " + g.output);
    f << text;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-spectrum criteria for birth-death operators with killing and 1D diffusions"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--output", g.output, "Write the report here instead of stdout");
  app.add_option("--seed", g.seed, "Reserved; all numerics are deterministic");

  std::string model_path, mode = "both", boundary = "min", h_expr = "picard", psi_expr, f_text = "0",
                          truncations = "100,200,400", interval, name_filter;
  std::size_t n_max = 10000, horizon = 0, num_eigs = 10, similarity_n = 50;
  double delta = 0.05, x_max = 100.0, tol = 1e-10, gamma0 = 1.0, gamma1 = 0.0, g0 = 1.0, lambda = 0.0;
  std::size_t max_iter = 200;
  bool sufficient = false, all = false;

  auto* analyze = app.add_subcommand("analyze", "Three-way criterion for a discrete model");
  analyze->add_option("--model", model_path, "Model JSON file")->required();
  analyze->add_option("--mode", mode, "Which extension to test: min, max or both")->check(CLI::IsMember({"min", "max", "both"}));
  analyze->add_option("--n-max", n_max, "Largest index evaluated");
  analyze->add_option("--horizon", horizon, "Index up to which tail sums are accumulated before extrapolation");
  analyze->add_option("--delta", delta, "Slope margin for the limit decision");
  analyze->add_flag("--sufficient", sufficient, "Also evaluate the sufficient-condition tests");

  auto* harmonic = app.add_subcommand("harmonic", "Harmonic function r_n, h_n and their bounds");
  harmonic->add_option("--model", model_path, "Model JSON file")->required();
  harmonic->add_option("--n-max", n_max, "Largest index evaluated");

  auto* poisson = app.add_subcommand("poisson", "Poisson equation for a single-birth model");
  poisson->add_option("--model", model_path, "Model JSON file")->required();
  poisson->add_option("--f", f_text, "Right-hand side: expression in n or JSON array");
  poisson->add_option("--g0", g0, "Initial value g_0");
  poisson->add_option("--n-max", n_max, "Largest index evaluated");

  auto* dual = app.add_subcommand("dual", "Dual chain and the duality identities");
  dual->add_option("--model", model_path, "Model JSON file")->required();
  dual->add_option("--n-max", n_max, "Largest index evaluated");
  dual->add_option("--similarity", similarity_n, "Truncation size of the dense similarity check");

  auto* cont = app.add_subcommand("continuous", "Half-line or whole-line diffusion criterion");
  cont->add_option("--model", model_path, "Model JSON file")->required();
  cont->add_option("--x-max", x_max, "Right end of the fitting window");
  cont->add_option("--tol", tol, "Successive approximation tolerance");
  cont->add_option("--max-iter", max_iter, "Successive approximation iteration cap");
  cont->add_option("--gamma0", gamma0, "Initial value h(theta)");
  cont->add_option("--gamma1", gamma1, "Initial slope h'(theta)");
  cont->set_help_flag("--help", "Print this help message and exit");
  auto* h_opt = cont->add_option("--h", h_expr, "Harmonic function: expression in x or 'picard'");
  cont->add_option("--psi", psi_expr, "log h as an expression in x")->excludes(h_opt);
  cont->add_option("--mode", mode, "Which extension to test: min, max or both")->check(CLI::IsMember({"min", "max", "both"}));
  cont->add_option("--delta", delta, "Slope margin for the limit decision");

  auto* oracle = app.add_subcommand("oracle", "Eigenvalues of truncations");
  oracle->add_option("--model", model_path, "Model JSON file")->required();
  oracle->add_option("--truncations", truncations, "Comma-separated truncation sizes");
  oracle->add_option("--num-eigs", num_eigs, "Number of lowest eigenvalues per truncation");
  oracle->add_option("--boundary", boundary, "Truncation boundary: min (Dirichlet) or max (free)")->check(CLI::IsMember({"min", "max"}));
  oracle->add_option("--lambda", lambda, "Count eigenvalues below this level");
  oracle->add_option("--interval", interval, "lo,hi for continuous models");

  auto* examples = app.add_subcommand("examples", "Run the built-in gallery against the expected verdicts");
  examples->add_flag("--all", all, "Run every entry (default)");
  examples->add_option("--name", name_filter, "Only entries whose name contains this text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*analyze) {
      DiscreteModel m = load_discrete(model_path, std::min<std::size_t>(n_max, 1000));
      CriteriaOptions o;
      o.n_max = n_max;
      o.horizon = horizon;
      o.delta = delta;
      const CriteriaContext ctx(m, o);
      const CriterionReport r = classify(ctx, parse_mode(mode));
      json j{{"model", model_to_json(m, 0)}, {"report", to_json(r)}};
      if (sufficient) j["sufficient"] = to_json(sufficient_tests(ctx));
      std::string csv = "part,n,log_S\n";
      for (const auto* p : {&r.min_part, &r.max_part})
        for (const auto& t : p->trace)
          csv += std::string(p == &r.min_part ? "min" : "max") + "," + csv_num(t.n) + "," + csv_num(t.log_S) + "\n";
      emit(g, "json", j, csv, "", out);
    } else if (*harmonic) {
      DiscreteModel m = load_discrete(model_path, std::min<std::size_t>(n_max, 1000));
      const HarmonicSeq s = harmonic_sequence(m, n_max);
      std::string csv = "n,r_n,log_h_n,bound_b01,bound_applicable\n";
      json rows = json::array();
      for (std::size_t n = 0; n <= n_max; ++n) {
        const FixedPointBound fb = r_fixed_point_bound(s, n);
        csv += std::to_string(n) + "," + csv_num(s.r[n]) + "," + csv_num(s.log_h[n]) + "," +
               (fb.applicable ? csv_num(fb.value) : std::string()) + "," +
               (fb.applicable && fb.precondition ? "1" : "0") + "\n";
        rows.push_back({n, s.r[n], s.log_h[n]});
      }
      const HLowerBound lb = h_lower_bound(s, n_max);
      json j{{"n_r_logh", rows},
             {"r_recursion_residual", r_recursion_residual(s, n_max)},
             {"harmonicity_residual", harmonicity_residual(s, n_max)},
             {"h_lower_bound", {{"log_value", lb.log_value}, {"certified", lb.certified}, {"note", lb.note}}}};
      emit(g, "csv", j, csv, "", out);
    } else if (*poisson) {
      const json mj = read_json_file(model_path);
      const LowerTriModel lt = lower_tri_from_json(mj, n_max + 1);
      std::vector<double> f(n_max);
      if (!f_text.empty() && f_text.front() == '[') {
        json arr;
        try {
          arr = json::parse(f_text);
        } catch (const json::parse_error& e) {
          throw InputError(std::string("--f: ") + e.what());
        }
        if (!arr.is_array() || arr.size() < n_max) throw InputError("--f array needs at least n_max entries");
        for (std::size_t i = 0; i < n_max; ++i) f[i] = arr[i].get<double>();
      } else {
        const Expr e = Expr::parse(f_text, "n");
        for (std::size_t i = 0; i < n_max; ++i) f[i] = e(static_cast<double>(i));
      }
      const auto gv = poisson_solve(lt, f, g0, n_max);
      std::string csv = "n,g\n";
      for (std::size_t n = 0; n < gv.size(); ++n) csv += std::to_string(n) + "," + csv_num(gv[n]) + "\n";
      emit(g, "csv", json{{"g", gv}, {"residual", poisson_residual(lt, f, gv, n_max)}}, csv, "", out);
    } else if (*dual) {
      DiscreteModel m = load_discrete(model_path, std::min<std::size_t>(n_max, 1000));
      const DualPair p = make_dual_pair(m);
      const DualityReport r = duality_identities_check(p, n_max);
      json j{{"dual", model_to_json(p.dual, 20)},
             {"a_star0", p.a_star0},
             {"identities", to_json(r)},
             {"similarity", to_json(similarity_check(p, similarity_n))}};
      emit(g, "json", j, "", "", out);
    } else if (*cont) {
      const DiffusionModel m = diffusion_model_from_json(read_json_file(model_path));
      ContinuousOptions o;
      o.x_max = x_max;
      o.delta = delta;
      o.mode = parse_mode(mode);
      const double X = 4.0 * x_max;
      json harmonic_info;
      ScalarFunction psi;
      if (!psi_expr.empty()) {
        psi = ScalarFunction::parse(psi_expr);
        harmonic_info = {{"psi", psi.text()}};
      } else if (h_expr == "picard") {
        PicardOptions po;
        po.gamma0 = gamma0;
        po.gamma1 = gamma1;
        po.tol = tol;
        po.max_iter = max_iter;
        po.hi = 1.01 * X;
        po.lo = m.domain == Domain::WholeLine ? -po.hi : std::min(0.0, m.theta);
        const PicardSolution s = picard_solve(m, po);
        if (!s.converged)
          throw NonConvergenceError("successive approximation did not reach tol " + csv_num(tol) + " in " +
                                    std::to_string(max_iter) + " iterations (last change " +
                                    csv_num(s.sup_norm_gap) + ")");
        if (s.sign_changes) throw ConsistencyError("harmonic function changes sign on the grid");
        psi = log_abs(s);
        harmonic_info = {{"method", "successive approximation"},
                         {"iterations", s.iterations},
                         {"last_change", s.sup_norm_gap},
                         {"residual", s.residual},
                         {"monotone", s.monotone},
                         {"sign_changes", s.sign_changes}};
      } else {
        const ScalarFunction h = ScalarFunction::parse(h_expr);
        psi = ScalarFunction([h](double x) { return std::log(std::fabs(h(x))); }, "log|" + h.text() + "|");
        harmonic_info = {{"h", h.text()}};
      }
      const ContinuousReport r =
          m.domain == Domain::WholeLine ? criteria_wholeline(m, psi, o) : criteria_halfline(m, psi, o);
      json j{{"model", {{"name", m.name}, {"a", m.a.text()}, {"b", m.b.text()}, {"c", m.c.text()}}},
             {"harmonic", harmonic_info},
             {"report", to_json(r)}};
      emit(g, "json", j, "", "", out);
    } else if (*oracle) {
      const json mj = read_json_file(model_path);
      const auto Ns = parse_sizes(truncations);
      std::string csv = "N,k,lambda\n";
      json eig = json::array();
      json counts = json::array();
      const bool continuous = mj.value("kind", std::string()) == "continuous";
      std::optional<DiscreteModel> dm;
      std::optional<DiffusionModel> cm;
      double lo = 0.0, hi = 0.0;
      if (continuous) {
        cm = diffusion_model_from_json(mj);
        if (interval.empty()) throw InputError("continuous models need --interval lo,hi");
        const auto comma = interval.find(',');
        try {
          lo = std::stod(interval.substr(0, comma));
          hi = std::stod(interval.substr(comma + 1));
        } catch (const std::exception&) {
          throw InputError("--interval must be lo,hi");
        }
      } else {
        dm = load_discrete(model_path, std::min<std::size_t>(Ns.back() + 1, 1000));
      }
      for (std::size_t N : Ns) {
        const SymTridiag T = continuous ? fd_discretize(*cm, lo, hi, N)
                                        : truncate_symmetric(*dm, N, parse_boundary(boundary));
        const auto ev = low_eigs(T, std::min(num_eigs, N));
        for (std::size_t k = 0; k < ev.size(); ++k)
          csv += std::to_string(N) + "," + std::to_string(k) + "," + csv_num(ev[k]) + "\n";
        eig.push_back({{"N", N}, {"eigenvalues", ev}});
        if (lambda > 0) counts.push_back({{"N", N}, {"below_lambda", sturm_count(T, lambda)}});
      }
      json j{{"boundary", continuous ? "dirichlet" : boundary}, {"truncations", eig}};
      if (lambda > 0) {
        j["counts"] = counts;
        j["counts_note"] = "heuristic: stable counts are consistent with discrete spectrum below lambda";
      }
      emit(g, "csv", j, csv, "", out);
    } else if (*examples) {
      (void)all;
      json rows = json::array();
      std::ostringstream table;
      table << std::left << std::setw(58) << "model" << std::setw(28) << "expected" << std::setw(14) << "got"
            << "result\n";
      std::string csv = "model,expected,got,pass\n";
      std::size_t passed = 0, total = 0;
      for (const GalleryEntry& e : gallery()) {
        if (!name_filter.empty() && e.name.find(name_filter) == std::string::npos) continue;
        const GalleryRow row = run_gallery_entry(e);
        ++total;
        passed += row.pass ? 1 : 0;
        rows.push_back({{"model", row.name},
                        {"expectation", e.expectation},
                        {"expected", row.expected},
                        {"got", row.got},
                        {"pass", row.pass},
                        {"detail", row.detail}});
        table << std::left << std::setw(58) << row.name << std::setw(28) << row.expected << std::setw(14)
              << row.got << (row.pass ? "pass" : "FAIL") << "  (" << std::fixed << std::setprecision(2)
              << row.seconds << " s)\n";
        csv += "\"" + row.name + "\"," + row.expected + "," + row.got + "," + (row.pass ? "pass" : "fail") + "\n";
      }
      table << passed << "/" << total << " entries match\n";
      emit(g, "table", json{{"entries", rows}, {"passed", passed}, {"total", total}}, csv, table.str(), out);
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    err << "consistency check failed: " << e.what() << "\n";
    return 3;
  } catch (const NonConvergenceError& e) {
    err << "did not converge: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

}  // namespace specdisc
