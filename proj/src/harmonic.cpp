#include "specdisc/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specdisc/errors.hpp"

namespace specdisc {

namespace {

// sqrt(xi^2 - 4u) written as a sum of nonnegative terms.
double disc_root(double u, double v) {
  return std::sqrt((1.0 - u) * (1.0 - u) + v * v + 2.0 * v * (1.0 + u));
}

void fill_rates(const DiscreteModel& model, HarmonicSeq& s, std::size_t n_max) {
  for (std::size_t n = s.u.size(); n <= n_max; ++n) {
    const double b = model.birth(n);
    const double a = model.death(n);
    const double c = model.kill(n);
    if (!(b > 0) || !(a >= 0) || !(c >= 0) || !std::isfinite(a) || !std::isfinite(b) ||
        !std::isfinite(c)) {
      std::ostringstream os;
      os << "invalid rates at n = " << n << ": a = " << a << ", b = " << b << ", c = " << c;
      throw InputError(os.str());
    }
    s.u.push_back(a / b);
    s.v.push_back(c / b);
    s.xi.push_back(1.0 + a / b + c / b);
  }
}

}  // namespace

HarmonicSeq compute_r(const DiscreteModel& model, std::size_t n_max) {
  HarmonicSeq s;
  s.u.reserve(n_max + 1);
  s.v.reserve(n_max + 1);
  s.xi.reserve(n_max + 1);
  s.r.reserve(n_max + 1);
  fill_rates(model, s, n_max);
  s.r.push_back(1.0 / (1.0 + s.v[0]));
  for (std::size_t n = 1; n <= n_max; ++n) {
    // xi_n - u_n r_{n-1} rearranged so no cancellation occurs when r is near 1.
    const double denom = 1.0 + s.v[n] + s.u[n] * (1.0 - s.r[n - 1]);
    if (!(denom > 0))
      throw ConsistencyError("r-recursion denominator not positive at n = " + std::to_string(n));
    const double rn = 1.0 / denom;
    const double bound = r_refined_bound(s, n);
    if (rn > bound * (1.0 + 1e-14)) {
      std::ostringstream os;
      os.precision(17);
      os << "r_" << n << " = " << rn << " exceeds its refined bound " << bound;
      throw ConsistencyError(os.str());
    }
    s.r.push_back(rn);
  }
  return s;
}

double r_refined_bound(const HarmonicSeq& seq, std::size_t n) {
  if (n == 0) return 1.0 / (1.0 + seq.v[0]);
  return 1.0 / (1.0 + seq.v[n] + seq.u[n] * seq.v[n - 1] / (1.0 + seq.v[n - 1]));
}

void compute_h(HarmonicSeq& seq, std::size_t n_max) {
  if (n_max > seq.r.size()) throw InputError("compute_h: r is not available up to n_max - 1");
  seq.log_h.assign(n_max + 1, 0.0);
  CompensatedSum acc;
  for (std::size_t n = 1; n <= n_max; ++n) {
    acc.add(-std::log(seq.r[n - 1]));
    seq.log_h[n] = acc.value();
  }
}

HarmonicSeq harmonic_sequence(const DiscreteModel& model, std::size_t n_max) {
  HarmonicSeq s = compute_r(model, n_max);
  compute_h(s, n_max + 1);
  return s;
}

SecondOrderH h_second_order(const DiscreteModel& model, std::size_t n_max) {
  HarmonicSeq rates;
  fill_rates(model, rates, n_max);
  SecondOrderH out;
  out.h.reserve(n_max + 1);
  out.h.push_back(LogScalar::one());
  if (n_max == 0) return out;
  out.h.push_back(LogScalar::from_value(1.0 + rates.v[0]));
  for (std::size_t i = 2; i <= n_max; ++i) {
    const LogScalar t1 = LogScalar::from_value(rates.xi[i - 1]) * out.h[i - 1];
    const LogScalar t2 = LogScalar::from_value(rates.u[i - 1]) * out.h[i - 2];
    if (!out.cancellation_at && t1.sign == t2.sign && t1.sign != 0 &&
        std::exp(-std::fabs(t1.log_mag - t2.log_mag)) > 1.0 - 1e-13)
      out.cancellation_at = i;
    out.h.push_back(t1 - t2);
  }
  return out;
}

FixedPointBound r_fixed_point_bound(const HarmonicSeq& seq, std::size_t n) {
  FixedPointBound fb;
  const double u = seq.u[n], v = seq.v[n], xi = seq.xi[n];
  const double s = disc_root(u, v);
  if (!std::isfinite(s)) return fb;
  fb.applicable = true;
  fb.value = 2.0 / (xi + s);
  if (n == 0) {
    fb.precondition = true;
    return fb;
  }
  const double up = seq.u[n - 1], vp = seq.v[n - 1], xip = seq.xi[n - 1];
  const double sp = disc_root(up, vp);
  // xi - s = 4u / (xi + s) avoids cancellation; with u_{n-1}, u_n > 0 the
  // condition reduces to xi_n + s_n <= xi_{n-1} + s_{n-1}.
  const double lhs = u * 4.0 * up / (xip + sp);
  const double rhs = up * 4.0 * u / (xi + s);
  fb.precondition = lhs <= rhs * (1.0 + 1e-14);
  return fb;
}

FixedPointBound r_fixed_point_bound(const DiscreteModel& model, std::size_t n) {
  HarmonicSeq rates;
  fill_rates(model, rates, n);
  return r_fixed_point_bound(rates, n);
}

HLowerBound h_lower_bound(const HarmonicSeq& seq, std::size_t n, std::size_t n0) {
  HLowerBound out;
  if (n0 < 1) n0 = 1;
  if (n < n0) {
    out.log_value = seq.log_h.at(n);
    out.certified = true;
    return out;
  }
  CompensatedSum acc;
  acc.add(seq.log_h.at(n0));
  for (std::size_t k = n0; k < n; ++k) {
    const double s = disc_root(seq.u[k], seq.v[k]);
    acc.add(std::log((seq.xi[k] + s) / 2.0));
  }
  out.log_value = acc.value();
  out.certified = true;
  if (n > n0) {
    const FixedPointBound base = r_fixed_point_bound(seq, n0);
    if (!(seq.r.at(n0) <= base.value * (1.0 + 1e-14))) {
      out.certified = false;
      out.first_failure = n0;
      std::ostringstream os;
      os.precision(17);
      os << "r_" << n0 << " = " << seq.r[n0] << " exceeds the fixed-point bound " << base.value
         << "; local modification required";
      out.note = os.str();
      return out;
    }
    for (std::size_t k = n0 + 1; k < n; ++k) {
      if (!r_fixed_point_bound(seq, k).precondition) {
        out.certified = false;
        out.first_failure = k;
        out.note = "monotonicity precondition fails at n = " + std::to_string(k) +
                   "; local modification required";
        return out;
      }
    }
  }
  return out;
}

HLowerBound h_lower_bound(const DiscreteModel& model, std::size_t n, std::size_t n0) {
  HarmonicSeq s = harmonic_sequence(model, std::max(n, n0) + 1);
  return h_lower_bound(s, n, n0);
}

double r_recursion_residual(const HarmonicSeq& seq, std::size_t n_max) {
  double worst = 0.0;
  for (std::size_t n = 1; n <= n_max && n < seq.r.size(); ++n) {
    const double lhs = (seq.xi[n] - seq.u[n] * seq.r[n - 1]) * seq.r[n];
    worst = std::max(worst, std::fabs(lhs - 1.0));
  }
  return worst;
}

double harmonicity_residual(const HarmonicSeq& seq, std::size_t k_max) {
  double worst = 0.0;
  for (std::size_t k = 1; k <= k_max && k + 1 < seq.log_h.size(); ++k) {
    // Everything divided by b_k h_k.
    const double d_up = seq.log_h[k + 1] - seq.log_h[k];
    const double d_down = seq.log_h[k - 1] - seq.log_h[k];
    const double res = std::expm1(d_up) + seq.u[k] * std::expm1(d_down) - seq.v[k];
    const double scale = std::exp(d_up) + seq.u[k] * std::exp(d_down) + seq.xi[k];
    worst = std::max(worst, std::fabs(res) / scale);
  }
  return worst;
}

}  // namespace specdisc
