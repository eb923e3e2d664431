#include "specdisc/log_scalar.hpp"

#include <algorithm>

namespace specdisc {

LogScalar LogScalar::from_log(double log_mag, int sign) {
  if (sign == 0 || log_mag == -std::numeric_limits<double>::infinity()) return zero();
  return {sign > 0 ? 1 : -1, log_mag};
}

LogScalar LogScalar::from_value(double v) {
  if (v == 0.0) return zero();
  return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
}

double LogScalar::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }

LogScalar& LogScalar::operator*=(const LogScalar& o) {
  if (sign == 0 || o.sign == 0) return *this = zero();
  sign *= o.sign;
  log_mag += o.log_mag;
  return *this;
}

LogScalar& LogScalar::operator/=(const LogScalar& o) {
  if (o.sign == 0) {
    // Division by zero follows IEEE: signed infinity in the log magnitude.
    log_mag = std::numeric_limits<double>::infinity();
    return *this;
  }
  if (sign == 0) return *this;
  sign *= o.sign;
  log_mag -= o.log_mag;
  return *this;
}

LogScalar& LogScalar::operator+=(const LogScalar& o) {
  if (o.sign == 0) return *this;
  if (sign == 0) return *this = o;
  if (sign == o.sign) {
    log_mag = log_add(log_mag, o.log_mag);
    return *this;
  }
  const double hi = std::max(log_mag, o.log_mag);
  const double lo = std::min(log_mag, o.log_mag);
  if (hi == lo) return *this = zero();
  const int s = log_mag > o.log_mag ? sign : o.sign;
  sign = s;
  log_mag = hi + std::log1p(-std::exp(lo - hi));
  return *this;
}

LogScalar operator*(LogScalar x, const LogScalar& y) { return x *= y; }
LogScalar operator/(LogScalar x, const LogScalar& y) { return x /= y; }
LogScalar operator+(LogScalar x, const LogScalar& y) { return x += y; }
LogScalar operator-(LogScalar x, const LogScalar& y) { return x -= y; }

bool operator<(const LogScalar& x, const LogScalar& y) {
  if (x.sign != y.sign) return x.sign < y.sign;
  if (x.sign == 0) return false;
  return x.sign > 0 ? x.log_mag < y.log_mag : x.log_mag > y.log_mag;
}

double log_add(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

void LogSum::add_log(double log_term) {
  if (log_term == -std::numeric_limits<double>::infinity()) return;
  if (empty_) {
    empty_ = false;
    scale_ = log_term;
    sum_ = 1.0;
    comp_ = 0.0;
    return;
  }
  // Rescale rarely: only when the new term would dominate by e^40.
  if (log_term > scale_ + 40.0) {
    const double f = std::exp(scale_ - log_term);
    sum_ *= f;
    comp_ *= f;
    scale_ = log_term;
  }
  const double x = std::exp(log_term - scale_);
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
  // Keep the stored sum well inside double range.
  if (sum_ > 1e250) {
    const double ls = std::log(sum_ + comp_);
    scale_ += ls;
    const double f = std::exp(-ls);
    sum_ *= f;
    comp_ *= f;
  }
}

double LogSum::log_value() const {
  if (empty_) return -std::numeric_limits<double>::infinity();
  return scale_ + std::log(sum_ + comp_);
}

}  // namespace specdisc
