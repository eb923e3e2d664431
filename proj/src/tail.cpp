#include "specdisc/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "specdisc/errors.hpp"

namespace specdisc {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const std::size_t n = std::min(x.size(), y.size());
  f.points = n;
  if (n == 0) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / static_cast<double>(n));
  if (n > 2 && sxx > 0) f.se = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
  return f;
}

std::vector<std::size_t> geometric_indices(std::size_t lo, std::size_t hi, std::size_t count) {
  std::vector<std::size_t> out;
  if (hi < lo) return out;
  lo = std::max<std::size_t>(lo, 1);
  if (count < 2 || hi == lo) {
    out.push_back(hi);
    return out;
  }
  const double step = std::log(static_cast<double>(hi) / static_cast<double>(lo)) /
                      static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(
        std::llround(static_cast<double>(lo) * std::exp(step * static_cast<double>(i))));
    const std::size_t kk = std::clamp(k, lo, hi);
    if (out.empty() || kk > out.back()) out.push_back(kk);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

std::vector<std::size_t> geometric_samples(std::size_t hi, double ratio) {
  std::vector<std::size_t> out;
  double x = 1.0;
  while (x < static_cast<double>(hi)) {
    const auto k = static_cast<std::size_t>(std::llround(x));
    if (out.empty() || k > out.back()) out.push_back(k);
    x *= ratio;
  }
  if (out.empty() || out.back() != hi) out.push_back(hi);
  return out;
}

const char* to_string(TailKind k) {
  switch (k) {
    case TailKind::Algebraic: return "algebraic";
    case TailKind::Exponential: return "exponential";
    case TailKind::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::Converges: return "converges";
    case SeriesStatus::Diverges: return "diverges";
    case SeriesStatus::Unknown: return "unknown";
  }
  return "unknown";
}

ShiftedPowerLaw fit_shifted_power_law(double k1, double y1, double k2, double y2, double k3,
                                      double y3) {
  ShiftedPowerLaw p;
  auto fallback = [&]() {
    p.fallback = true;
    p.shift = 0.0;
    p.alpha = (y1 - y2) / std::log(k1 / k2);
    p.log_c = y1 - p.alpha * std::log(k1);
    return p;
  };
  const double d12 = y1 - y2, d23 = y2 - y3;
  if (d23 == 0.0 || !std::isfinite(d12) || !std::isfinite(d23)) return fallback();
  const double target = d12 / d23;
  // g(s) rises monotonically from 0 (s -> -k3) to (k1-k2)/(k2-k3) (s -> infinity).
  auto g = [&](double s) { return std::log((k1 + s) / (k2 + s)) / std::log((k2 + s) / (k3 + s)); };
  double lo = -k3 * (1.0 - 1e-12);
  double hi = k1;
  if (!(target > g(lo)) || !(target < g(hi))) return fallback();
  while (g(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double s = 0.5 * (lo + hi);
  if (std::fabs(s) > 0.25 * k1) return fallback();
  p.shift = s;
  p.alpha = d12 / std::log((k1 + s) / (k2 + s));
  p.log_c = y1 - p.alpha * std::log(k1 + s);
  return p;
}

namespace {

struct TwoFits {
  LineFit alg;
  LineFit expo;
};

TwoFits fit_both(const std::vector<double>& ks, const std::vector<double>& ys) {
  std::vector<double> lk(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) lk[i] = std::log(ks[i]);
  return {fit_line(lk, ys), fit_line(ks, ys)};
}

void classify_fit(SeriesCertificate& c, const TwoFits& f) {
  c.rms_algebraic = f.alg.rms;
  c.rms_exponential = f.expo.rms;
  // Ties go to the algebraic reading (constant terms fit both exactly).
  if (f.alg.rms <= f.expo.rms) {
    c.kind = TailKind::Algebraic;
    c.exponent = f.alg.slope;
  } else {
    c.kind = TailKind::Exponential;
    c.exponent = f.expo.slope;
  }
}

}  // namespace

SeriesCertificate certify_sum(const std::vector<double>& log_terms, const TailThresholds& th) {
  SeriesCertificate c;
  if (log_terms.size() < 40) throw InputError("certify_sum needs at least 40 terms");
  const std::size_t N = log_terms.size() - 1;
  c.horizon = static_cast<double>(N);
  const auto idx = geometric_indices(std::max<std::size_t>(N / 10, 1), N, th.samples);
  std::vector<double> ks, ys;
  for (std::size_t k : idx) {
    ks.push_back(static_cast<double>(k));
    ys.push_back(log_terms[k]);
  }
  const TwoFits f = fit_both(ks, ys);
  classify_fit(c, f);
  std::ostringstream ev;
  ev.precision(6);
  if (c.kind == TailKind::Algebraic) {
    ev << "algebraic fit over [" << N / 10 << ", " << N << "]: exponent " << c.exponent
       << ", rms " << f.alg.rms << " (exponential rms " << f.expo.rms << ")";
    if (c.exponent < th.converge_alpha) {
      c.status = SeriesStatus::Converges;
      const std::size_t k2 = N / 2, k3 = N / 4;
      const ShiftedPowerLaw p =
          fit_shifted_power_law(static_cast<double>(N), log_terms[N], static_cast<double>(k2),
                                log_terms[k2], static_cast<double>(k3), log_terms[k3]);
      c.shift = p.shift;
      if (p.alpha < -1.0) {
        const double a1 = p.alpha + 1.0;
        c.log_remainder = p.log_c + a1 * std::log(static_cast<double>(N) + 0.5 + p.shift) -
                          std::log(-a1);
      } else {
        c.status = SeriesStatus::Unknown;
        ev << "; three-point exponent " << p.alpha << " too flat for a remainder";
      }
      ev << "; remainder from C(k+s)^alpha with s = " << p.shift << ", alpha = " << p.alpha;
    } else if (c.exponent >= th.diverge_alpha) {
      c.status = SeriesStatus::Diverges;
    }
  } else {
    double max_ratio = 0.0;
    const std::size_t w = std::min(th.ratio_window, N);
    for (std::size_t k = N - w; k < N; ++k)
      max_ratio = std::max(max_ratio, std::exp(log_terms[k + 1] - log_terms[k]));
    c.max_ratio = max_ratio;
    ev << "exponential fit over [" << N / 10 << ", " << N << "]: rate " << c.exponent << ", rms "
       << f.expo.rms << " (algebraic rms " << f.alg.rms << "); max ratio over last " << w
       << " terms " << max_ratio;
    if (c.exponent < 0 && max_ratio < 1.0) {
      c.status = SeriesStatus::Converges;
      const double rho = std::exp(log_terms[N] - log_terms[N - 1]);
      c.log_remainder = log_terms[N] + std::log(rho) - std::log1p(-rho);
    } else if (c.exponent >= 0) {
      c.status = SeriesStatus::Diverges;
    }
  }
  ev << " -> " << to_string(c.status);
  c.evidence = ev.str();
  return c;
}

SeriesCertificate certify_integral(const std::function<double(double)>& log_density, double X,
                                   const TailThresholds& th) {
  SeriesCertificate c;
  c.horizon = X;
  std::vector<double> xs, ys;
  const double lo = X / 10.0;
  const std::size_t m = std::max<std::size_t>(th.samples, 2);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = lo * std::pow(10.0, static_cast<double>(i) / static_cast<double>(m - 1));
    xs.push_back(x);
    ys.push_back(log_density(x));
  }
  const TwoFits f = fit_both(xs, ys);
  classify_fit(c, f);
  std::ostringstream ev;
  ev.precision(6);
  if (c.kind == TailKind::Algebraic) {
    ev << "algebraic fit over [" << lo << ", " << X << "]: exponent " << c.exponent << ", rms "
       << f.alg.rms << " (exponential rms " << f.expo.rms << ")";
    if (c.exponent < th.converge_alpha) {
      c.status = SeriesStatus::Converges;
      const ShiftedPowerLaw p = fit_shifted_power_law(X, log_density(X), X / 2, log_density(X / 2),
                                                      X / 4, log_density(X / 4));
      c.shift = p.shift;
      if (p.alpha < -1.0) {
        const double a1 = p.alpha + 1.0;
        c.log_remainder = p.log_c + a1 * std::log(X + p.shift) - std::log(-a1);
      } else {
        c.status = SeriesStatus::Unknown;
        ev << "; three-point exponent " << p.alpha << " too flat for a remainder";
      }
      ev << "; remainder from C(x+s)^alpha with s = " << p.shift << ", alpha = " << p.alpha;
    } else if (c.exponent >= th.diverge_alpha) {
      c.status = SeriesStatus::Diverges;
    }
  } else {
    // Local logarithmic derivative at the horizon gives the leading-order
    // remainder f(X) / (-g'(X)) even for faster-than-exponential decay.
    const double hstep = 1e-4 * std::max(1.0, X);
    const double slope_at_x = (log_density(X + hstep) - log_density(X - hstep)) / (2.0 * hstep);
    c.max_ratio = slope_at_x;
    ev << "exponential fit over [" << lo << ", " << X << "]: rate " << c.exponent << ", rms "
       << f.expo.rms << " (algebraic rms " << f.alg.rms << "); log-derivative at horizon "
       << slope_at_x;
    if (c.exponent < 0 && slope_at_x < 0) {
      c.status = SeriesStatus::Converges;
      c.log_remainder = log_density(X) - std::log(-slope_at_x);
    } else if (c.exponent >= 0) {
      c.status = SeriesStatus::Diverges;
    }
  }
  ev << " -> " << to_string(c.status);
  c.evidence = ev.str();
  return c;
}

LimitDecision decide_limit(const LineFit& fit, double log_level, double delta,
                           double log_level_floor, std::string* reason) {
  std::ostringstream os;
  os.precision(6);
  os << "slope " << fit.slope << " +- " << 2.0 * fit.se << " (2 se), log level " << log_level;
  LimitDecision d = LimitDecision::Undecided;
  if (fit.slope + 2.0 * fit.se < -delta) {
    d = LimitDecision::Zero;
    os << ": decays";
  } else if (fit.slope - 2.0 * fit.se > delta) {
    d = LimitDecision::Positive;
    os << ": grows";
  } else if (fit.slope - 2.0 * fit.se >= -delta && fit.slope + 2.0 * fit.se <= delta &&
             log_level > log_level_floor) {
    d = LimitDecision::Positive;
    os << ": flat at a positive level";
  } else {
    os << ": undecided at delta " << delta;
  }
  if (reason) *reason = os.str();
  return d;
}

}  // namespace specdisc
