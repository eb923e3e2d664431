#include "specdisc/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "specdisc/errors.hpp"

namespace specdisc {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

namespace {

double as_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw InputError(what + " must be a number");
  return j.get<double>();
}

std::string expr_text(const json& j, const std::string& field) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    return os.str();
  }
  throw InputError("field '" + field + "' must be an expression string or a number");
}

std::vector<double> numbers(const json& j, const std::string& field) {
  if (!j.is_array()) throw InputError("field '" + field + "' must be an array");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(as_number(x, "entries of '" + field + "'"));
  return v;
}

}  // namespace

RateSequence rate_from_json(const json& j, const std::string& field) {
  if (j.is_string() || j.is_number()) return RateSequence::formula(expr_text(j, field));
  if (j.is_array()) return RateSequence::table(numbers(j, field));
  if (j.is_object()) {
    if (j.contains("table")) {
      std::optional<Expr> ext;
      if (j.contains("formula")) ext = Expr::parse(expr_text(j.at("formula"), field), "n");
      return RateSequence::table(numbers(j.at("table"), field), ext);
    }
    if (j.contains("formula")) return RateSequence::formula(expr_text(j.at("formula"), field));
  }
  throw InputError("field '" + field + "' must be an expression, number, array or {table, formula}");
}

DiscreteModel discrete_model_from_json(const json& j) {
  if (!j.is_object()) throw InputError("model must be a JSON object");
  if (j.value("kind", std::string("discrete")) != "discrete")
    throw InputError("expected a discrete model (kind = \"discrete\")");
  for (const auto& [k, v] : j.items()) {
    static const char* known[] = {"kind", "name", "a", "b", "c", "mu", "overrides", "q_low", "extension"};
    if (std::find(std::begin(known), std::end(known), k) == std::end(known))
      throw InputError("unknown model field '" + k + "'");
  }
  if (j.contains("extension")) {
    const json& e = j.at("extension");
    if (!e.is_string() || (e != "formula" && e != "error"))
      throw InputError("'extension' must be \"formula\" or \"error\"");
    // Tables must agree with the declared rule: a formula past the end, or none.
    const bool want_formula = e == "formula";
    for (const char* f : {"a", "b", "c", "mu"}) {
      if (!j.contains(f)) continue;
      const json& r = j.at(f);
      const bool is_table = r.is_array() || (r.is_object() && r.contains("table"));
      if (!is_table) continue;
      const bool has_formula = r.is_object() && r.contains("formula");
      if (want_formula && !has_formula)
        throw InputError(std::string("table '") + f + "' needs a formula for extension \"formula\"");
      if (!want_formula && has_formula)
        throw InputError(std::string("table '") + f + "' carries a formula but extension is \"error\"");
    }
  }
  if (!j.contains("b")) throw InputError("model needs field 'b'");
  DiscreteModel m;
  const RateSequence b = rate_from_json(j.at("b"), "b");
  if (j.contains("mu")) {
    if (j.contains("a")) throw InputError("give either 'a' or 'mu', not both");
    m = from_b_and_mu(b, rate_from_json(j.at("mu"), "mu"));
  } else {
    if (!j.contains("a")) throw InputError("model needs field 'a' or 'mu'");
    m.a = rate_from_json(j.at("a"), "a");
    m.b = b;
  }
  m.c = j.contains("c") ? rate_from_json(j.at("c"), "c") : RateSequence::constant(0.0);
  m.name = j.value("name", std::string("model"));
  if (j.contains("overrides")) {
    const json& o = j.at("overrides");
    if (!o.is_object()) throw InputError("'overrides' must be an object");
    for (const auto& [seq, entries] : o.items()) {
      RateSequence* target = seq == "a" ? &m.a : seq == "b" ? &m.b : seq == "c" ? &m.c : nullptr;
      if (!target) throw InputError("overrides apply to a, b or c, not '" + seq + "'");
      for (const auto& [idx, val] : entries.items()) {
        std::size_t n = 0;
        try {
          n = static_cast<std::size_t>(std::stoul(idx));
        } catch (const std::exception&) {
          throw InputError("override index '" + idx + "' is not a nonnegative integer");
        }
        *target = target->with_override(n, as_number(val, "override value"));
      }
    }
  }
  return m;
}

LowerTriModel lower_tri_from_json(const json& j, std::size_t size) {
  const DiscreteModel m = discrete_model_from_json(j);
  std::vector<double> up(size), c(size);
  std::vector<LowerTriModel::Entry> low;
  for (std::size_t i = 0; i < size; ++i) {
    up[i] = m.birth(i);
    c[i] = m.kill(i);
    if (i > 0 && m.death(i) != 0.0) low.push_back({i, i - 1, m.death(i)});
  }
  if (j.contains("q_low")) {
    const json& q = j.at("q_low");
    if (!q.is_array()) throw InputError("'q_low' must be a list of [i, j, value]");
    for (const auto& e : q) {
      if (!e.is_array() || e.size() != 3) throw InputError("'q_low' entries must be [i, j, value]");
      const double i = as_number(e[0], "q_low row"), jj = as_number(e[1], "q_low column");
      if (i < 0 || jj < 0 || i != std::floor(i) || jj != std::floor(jj))
        throw InputError("q_low indices must be nonnegative integers");
      if (static_cast<std::size_t>(i) < size)
        low.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(jj), as_number(e[2], "q_low value")});
    }
  }
  return LowerTriModel(std::move(up), low, std::move(c));
}

DiffusionModel diffusion_model_from_json(const json& j) {
  if (!j.is_object()) throw InputError("model must be a JSON object");
  if (j.value("kind", std::string()) != "continuous")
    throw InputError("expected a continuous model (kind = \"continuous\")");
  for (const auto& [k, v] : j.items()) {
    static const char* known[] = {"kind", "name", "a", "b", "c", "domain", "theta"};
    if (std::find(std::begin(known), std::end(known), k) == std::end(known))
      throw InputError("unknown model field '" + k + "'");
  }
  DiffusionModel m;
  m.name = j.value("name", std::string("diffusion"));
  m.a = j.contains("a") ? ScalarFunction::parse(expr_text(j.at("a"), "a")) : ScalarFunction::constant(1.0);
  m.b = j.contains("b") ? ScalarFunction::parse(expr_text(j.at("b"), "b")) : ScalarFunction::constant(0.0);
  m.c = j.contains("c") ? ScalarFunction::parse(expr_text(j.at("c"), "c")) : ScalarFunction::constant(0.0);
  const std::string dom = j.value("domain", std::string("halfline"));
  if (dom == "halfline") {
    m.domain = Domain::HalfLine;
  } else if (dom == "wholeline") {
    m.domain = Domain::WholeLine;
  } else {
    throw InputError("domain must be \"halfline\" or \"wholeline\"");
  }
  m.theta = j.contains("theta") ? as_number(j.at("theta"), "theta") : 0.0;
  return m;
}

json rate_to_json(const RateSequence& s, std::size_t table_size) {
  json out;
  if (auto f = s.formula_text()) {
    out = *f;
  } else {
    json t = json::array();
    for (std::size_t n = 0; n < table_size; ++n) t.push_back(s(n));
    out = json{{"table", t}};
  }
  return out;
}

json model_to_json(const DiscreteModel& m, std::size_t table_size) {
  json j{{"kind", "discrete"},
         {"name", m.name},
         {"a", rate_to_json(m.a, table_size)},
         {"b", rate_to_json(m.b, table_size)},
         {"c", rate_to_json(m.c, table_size)}};
  json ov = json::object();
  auto add = [&](const char* key, const RateSequence& s) {
    if (!s.formula_text() || s.overrides().empty()) return;
    json e = json::object();
    for (const auto& [n, v] : s.overrides()) e[std::to_string(n)] = v;
    ov[key] = e;
  };
  add("a", m.a);
  add("b", m.b);
  add("c", m.c);
  if (!ov.empty()) j["overrides"] = ov;
  return j;
}

json to_json(const LineFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"se", f.se}, {"rms", f.rms}, {"points", f.points}};
}

json to_json(const SeriesCertificate& c) {
  json j{{"status", to_string(c.status)},
         {"tail", to_string(c.kind)},
         {"exponent", c.exponent},
         {"rms_algebraic", c.rms_algebraic},
         {"rms_exponential", c.rms_exponential},
         {"horizon", c.horizon},
         {"evidence", c.evidence}};
  if (c.status == SeriesStatus::Converges) j["log_remainder"] = c.log_remainder;
  if (c.kind == TailKind::Algebraic) j["shift"] = c.shift;
  if (c.kind == TailKind::Exponential) j["ratio_or_log_slope"] = c.max_ratio;
  return j;
}

json to_json(const PartReport& p) {
  json j{{"evaluated", p.evaluated}, {"outcome", to_string(p.outcome)}, {"reason", p.reason}};
  if (p.evaluated) {
    j["fit"] = to_json(p.fit);
    json t = json::array();
    for (const auto& pt : p.trace) t.push_back({pt.n, pt.log_S});
    j["trace_log"] = t;
  }
  return j;
}

json to_json(const CriterionReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"branch", r.branch},
          {"n_max", r.n_max},
          {"horizon", r.horizon},
          {"delta", r.delta},
          {"series", {{"mu_h2", to_json(r.series_A)}, {"inverse_mu_b_hh", to_json(r.series_B)}}},
          {"min_part", to_json(r.min_part)},
          {"max_part", to_json(r.max_part)},
          {"notes", r.notes}};
}

json to_json(const SufficientReport& r) {
  json tests = json::array();
  for (const auto& t : r.tests)
    tests.push_back({{"name", t.name},
                     {"precondition_met", t.precondition_met},
                     {"conclusion", t.conclusion},
                     {"evidence", t.evidence}});
  return {{"tests", tests},
          {"W_fit", to_json(r.W_fit)},
          {"V_fit", to_json(r.V_fit)},
          {"statistic_fit", to_json(r.stat_fit)},
          {"statistic_over_sqrt_n", r.stat_coefficient}};
}

json to_json(const ContinuousReport& r) {
  json j = to_json(r.result);
  j.erase("n_max");
  j["horizon"] = r.horizon;
  j["x_max"] = r.x_max;
  const json s = j["series"];
  j["series"] = {{"mu_h2", s["mu_h2"]}, {"nu_hat_h-2", s["inverse_mu_b_hh"]}};
  if (r.right) j["right_half"] = to_json(*r.right);
  if (r.left) j["left_half"] = to_json(*r.left);
  return j;
}

json to_json(const DualityReport& r) {
  json j{{"nu_hat_a0_vs_mu_star", r.nu_mu_error},
         {"mu_vs_a0_nu_hat_star", r.mu_nu_error},
         {"bracket_window", r.bracket_finite_error},
         {"primal_mu_tail", to_string(r.primal_mu_tail)},
         {"dual_nu_hat_tail", to_string(r.dual_nu_tail)},
         {"n_max", r.n_max},
         {"horizon", r.horizon},
         {"note", r.note}};
  if (r.bracket_full_error) j["bracket_with_tails"] = *r.bracket_full_error;
  return j;
}

json to_json(const SimilarityReport& r) {
  return {{"N", r.N},
          {"interior_deviation", r.interior_deviation},
          {"upper_tail_matrix_deviation", r.upper_deviation},
          {"inverse_deviation", r.inverse_deviation}};
}

}  // namespace specdisc
