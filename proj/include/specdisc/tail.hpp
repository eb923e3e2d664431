#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace specdisc {

/// Least-squares line y = intercept + slope * x with the standard error of
/// the slope and the root-mean-square residual.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double se = 0.0;
  double rms = 0.0;
  std::size_t points = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Sorted distinct integers in [lo, hi], spaced roughly geometrically with
/// about `count` entries; hi is always included.
std::vector<std::size_t> geometric_indices(std::size_t lo, std::size_t hi, std::size_t count);

/// Sorted distinct integers 1, ~ratio, ~ratio^2, ... below hi, plus hi.
std::vector<std::size_t> geometric_samples(std::size_t hi, double ratio);

enum class TailKind { Algebraic, Exponential, Unknown };
enum class SeriesStatus { Converges, Diverges, Unknown };

const char* to_string(TailKind k);
const char* to_string(SeriesStatus s);

struct TailThresholds {
  double converge_alpha = -1.1;   // algebraic exponent below this: convergent
  double diverge_alpha = -1.02;   // algebraic exponent at or above this: divergent
  std::size_t ratio_window = 200; // terms inspected for the eventual ratio bound
  std::size_t samples = 60;       // fit points over [N/10, N]
};

/// Classification of a positive sequence or density from the last decade
/// before the horizon, with an estimate of what lies beyond the horizon.
struct SeriesCertificate {
  SeriesStatus status = SeriesStatus::Unknown;
  TailKind kind = TailKind::Unknown;
  double exponent = 0.0;  // alpha (algebraic) or beta (exponential) of the chosen fit
  double rms_algebraic = 0.0;
  double rms_exponential = 0.0;
  double horizon = 0.0;
  double log_remainder = 0.0;  // log of the tail beyond the horizon, when convergent
  double shift = 0.0;          // s in C (k + s)^alpha for the algebraic remainder
  double max_ratio = 0.0;      // exponential case, discrete: max t_{k+1}/t_k over the window
  std::string evidence;
};

/// Certifies sum_k t_k from log t_k for k = 0..N (log_terms.size() == N + 1).
SeriesCertificate certify_sum(const std::vector<double>& log_terms,
                              const TailThresholds& th = {});

/// Certifies int^infty f from log f, inspected on [X/10, X].
SeriesCertificate certify_integral(const std::function<double(double)>& log_density, double X,
                                   const TailThresholds& th = {});

/// Shifted power law y = log C + alpha log(k + s) through three points
/// k1 > k2 > k3. Falls back to s = 0 and a two-point alpha when the shift is
/// not determined or exceeds k1/4 in size.
struct ShiftedPowerLaw {
  double log_c = 0.0;
  double alpha = 0.0;
  double shift = 0.0;
  bool fallback = false;
};

ShiftedPowerLaw fit_shifted_power_law(double k1, double y1, double k2, double y2, double k3,
                                      double y3);

enum class LimitDecision { Zero, Positive, Undecided };

/// Reads a fitted log-log slope of a trace: slope + 2se < -delta means the
/// trace vanishes; a slope confined to [-delta, delta] at a level above the
/// floor, or a slope above delta, means it does not.
LimitDecision decide_limit(const LineFit& fit, double log_level, double delta,
                           double log_level_floor, std::string* reason = nullptr);

}  // namespace specdisc
