#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specdisc/criteria.hpp"
#include "specdisc/expr.hpp"
#include "specdisc/quadrature.hpp"
#include "specdisc/tail.hpp"

namespace specdisc {

/// A real function of x with a printable description.
class ScalarFunction {
 public:
  ScalarFunction();  // the constant 0
  ScalarFunction(const Expr& e);  // NOLINT(google-explicit-constructor)
  ScalarFunction(std::function<double(double)> f, std::string text);

  static ScalarFunction parse(std::string_view text);  // variable x
  static ScalarFunction constant(double v);

  double operator()(double x) const { return f_(x); }
  const std::string& text() const { return text_; }
  /// True when built from a constant expression.
  bool is_constant() const { return constant_.has_value(); }
  std::optional<double> constant_value() const { return constant_; }

 private:
  std::function<double(double)> f_;
  std::string text_;
  std::optional<double> constant_;
};

enum class Domain { HalfLine, WholeLine };

/// Operator a f'' + b f' - c f on (0, inf) or on the whole line.
struct DiffusionModel {
  std::string name;
  ScalarFunction a;
  ScalarFunction b;
  ScalarFunction c;
  Domain domain = Domain::HalfLine;
  double theta = 0.0;
};

/// Probes a > 0, c >= 0 and finiteness on `probes` points of [lo, hi].
/// Negative c is reported but is not an error for transformed models.
std::vector<std::string> validate_diffusion(const DiffusionModel& m, double lo, double hi,
                                            std::size_t probes = 200);

struct MeasurePoint {
  double C = 0.0;
  double mu_density = 0.0;      // e^C / a
  double nu_hat_density = 0.0;  // e^-C
};

/// C(x) = integral of b/a from theta by adaptive quadrature, and the two densities.
MeasurePoint C_and_measures(const DiffusionModel& m, double x);

/// C on a grid by cumulative Gauss quadrature, with adaptive top-up off the edges.
class DriftIntegral {
 public:
  DriftIntegral(const DiffusionModel& m, const CellGrid& grid);
  double operator()(double x) const;
  const GridValues& values() const { return C_; }

 private:
  std::function<double(double)> ratio_;
  CellGrid grid_;
  GridValues C_;
};

struct PicardOptions {
  double gamma0 = 1.0;
  double gamma1 = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  double tol = 1e-10;
  std::size_t max_iter = 200;
  double max_cell_width = 0.05;
  bool keep_iterates = false;
};

/// Pair (f, e^C f') sampled on a grid.
struct GridPair {
  GridValues f;
  GridValues flux;
};

struct PicardSolution {
  std::shared_ptr<const CellGrid> grid;
  GridPair F;
  std::size_t iterations = 0;
  double sup_norm_gap = 0.0;  // last component-wise relative change
  bool converged = false;
  bool monotone = true;       // F^{(n+1)} >= F^{(n)} for x >= theta at every step
  double residual = 0.0;      // max relative defect of F = F(theta) + int G F
  std::size_t sign_changes = 0;
  std::vector<GridPair> iterates;  // F^{(1)}, F^{(2)}, ... when requested

  double evaluate(double x) const { return interpolate(*grid, F.f, x); }
  double flux(double x) const { return interpolate(*grid, F.flux, x); }
};

/// Successive approximation F^{(1)} = F(theta), F^{(n+1)} = F(theta) + int_theta^x G F^{(n)}
/// with G = [[0, e^-C], [c e^C / a, 0]]. Cells are refined where |G| is large.
/// A result that misses the tolerance comes back with converged = false.
PicardSolution picard_solve(const DiffusionModel& m, const PicardOptions& opts);

struct PeanoBakerTerms {
  std::shared_ptr<const CellGrid> grid;
  std::vector<GridPair> terms;  // terms[0] = F(theta)

  double f(std::size_t k, double x) const { return interpolate(*grid, terms.at(k).f, x); }
};

/// First n_terms terms of the series F(theta) + int G F(theta) + int G int G F(theta) + ...
/// on the same grid picard_solve would use.
PeanoBakerTerms peano_baker_terms(const DiffusionModel& m, const PicardOptions& opts,
                                  std::size_t n_terms);

/// Max over a uniform grid of |psi'' + psi'^2 + (b/a) psi' - c/a| with
/// finite-difference derivatives of the given even order; one-sided stencils
/// of the same order at the ends.
double harmonic_residual(const DiffusionModel& m, const ScalarFunction& psi, double lo, double hi,
                         std::size_t grid_n, int order = 4);

struct TransformResult {
  DiffusionModel model;
  bool negative_killing = false;
  double min_killing = 0.0;  // over the probe interval
};

/// Isospectral transform of a killing-free model: drift b~ - 2 a~ psi' and
/// killing a~ psi'' + b~ psi' - a~ psi'^2 (the negative of the zero-order
/// coefficient). Derivatives of psi by central differences. Negative killing
/// on [lo, hi] is flagged, not rejected.
TransformResult h_transform(const DiffusionModel& tilde, const ScalarFunction& psi, double lo,
                            double hi);

/// Same transform parameterized by the target drift b, psi' = (b~ - b)/(2 a~):
/// killing -(1/2)[(b^2 - b~^2)/(2 a~) - a~ ((b~ - b)/a~)'].
TransformResult h_transform_to_drift(const DiffusionModel& tilde, const ScalarFunction& b, double lo,
                                     double hi);

/// Killing-free operator h^-1 L h for h = e^psi: drift b + 2 a psi', no killing.
DiffusionModel killing_free_part(const DiffusionModel& m, const ScalarFunction& psi);

struct ContinuousOptions {
  double x_max = 100.0;
  double horizon = 0.0;      // 0 selects 4 x_max
  double sample_ratio = 1.25;
  double sample_span = 1000.0;  // samples cover [x_max / sample_span, x_max]
  double delta = 0.05;
  double log_level_floor = std::log(1e-8);
  double max_spread = 1.0;   // largest log-integrand variation inside one cell
  TailThresholds tail;
  Mode mode = Mode::Both;
};

/// Cumulative integrals of h^2 e^C/a and h^-2 e^-C on (0, X] for a half-line
/// model (h = e^psi), with certified tails beyond X.
class HalfLineIntegrals {
 public:
  HalfLineIntegrals(const DiffusionModel& m, const ScalarFunction& psi,
                    const ContinuousOptions& opts, const std::vector<double>& extra_points = {});

  const SeriesCertificate& A_certificate() const { return cert_A_; }
  const SeriesCertificate& B_certificate() const { return cert_B_; }
  const std::vector<double>& samples() const { return samples_; }
  double horizon() const { return X_; }
  std::size_t cells() const { return grid_.cells(); }

  /// log mu(h^2 1_(0,x)); x must be a grid edge (samples and extra points are).
  double log_prefix_A(double x) const;
  /// log nu_hat(h^-2 1_(0,x)).
  double log_prefix_B(double x) const;
  /// log mu(h^2 1_(x,inf)); requires a convergent certificate.
  double log_tail_A(double x) const;
  /// log nu_hat(h^-2 1_(x,inf)); requires a convergent certificate.
  double log_tail_B(double x) const;
  double log_product_min(double x) const { return log_prefix_A(x) + log_tail_B(x); }
  double log_product_max(double x) const { return log_tail_A(x) + log_prefix_B(x); }

 private:
  std::size_t edge_index(double x) const;

  double X_ = 0.0;
  CellGrid grid_;
  std::vector<double> samples_;
  std::vector<double> prefix_A_, prefix_B_, suffix_A_, suffix_B_;
  SeriesCertificate cert_A_, cert_B_;
};

struct ContinuousReport {
  CriterionReport result;
  std::optional<CriterionReport> right;  // whole line: the two halves
  std::optional<CriterionReport> left;
  double x_max = 0.0;
  double horizon = 0.0;
};

/// Half-line criterion with h = e^psi: certifies mu(h^2) and nu_hat(h^-2),
/// samples the products geometrically up to x_max and reads their slope as
/// in the discrete case.
ContinuousReport criteria_halfline(const DiffusionModel& m, const ScalarFunction& psi,
                                   const ContinuousOptions& opts = {});

/// Whole-line criterion for theta = 0 in the symmetric case: the left half is
/// mirrored onto (0, inf), both halves must share their finiteness pattern,
/// and the two products are summed.
ContinuousReport criteria_wholeline(const DiffusionModel& m, const ScalarFunction& psi,
                                    const ContinuousOptions& opts = {});

/// The left half x -> -x: a(-x), -b(-x), c(-x).
DiffusionModel mirror(const DiffusionModel& m);
ScalarFunction mirror(const ScalarFunction& f);

/// log |f| of a Picard solution as a function usable for psi. Throws
/// ConsistencyError where f vanishes.
ScalarFunction log_abs(const PicardSolution& s);

struct MolchanovCheck {
  bool applicable = false;  // a = 1, b = 0 and c bounded below on the probe range
  double slope = 0.0;       // log-log slope of int_x^{x+1} c over [x_max/10, x_max]
  std::string conclusion;   // "discrete", "not discrete" or "undecided"
};

/// Sanity check for a = 1, b = 0: the spectrum is discrete iff int_x^{x+w} c
/// grows without bound for every w > 0; the window w = 1 is sampled.
MolchanovCheck molchanov_check(const DiffusionModel& m, double x_max, double delta = 0.05);

}  // namespace specdisc
