#pragma once

#include <cmath>
#include <limits>

namespace specdisc {

/// Signed real stored as sign and natural log of magnitude.
struct LogScalar {
  int sign = 0;
  double log_mag = 0.0;

  static LogScalar zero() { return {}; }
  static LogScalar one() { return {1, 0.0}; }
  static LogScalar from_log(double log_mag, int sign = 1);
  static LogScalar from_value(double v);

  double value() const;
  bool is_zero() const { return sign == 0; }

  LogScalar operator-() const { return {-sign, log_mag}; }
  LogScalar& operator*=(const LogScalar& o);
  LogScalar& operator/=(const LogScalar& o);
  LogScalar& operator+=(const LogScalar& o);
  LogScalar& operator-=(const LogScalar& o) { return *this += -o; }
};

LogScalar operator*(LogScalar x, const LogScalar& y);
LogScalar operator/(LogScalar x, const LogScalar& y);
LogScalar operator+(LogScalar x, const LogScalar& y);
LogScalar operator-(LogScalar x, const LogScalar& y);
bool operator<(const LogScalar& x, const LogScalar& y);

/// log(exp(x) + exp(y)) without overflow.
double log_add(double x, double y);

/// Neumaier-compensated running sum of doubles.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Running sum of positive terms given by their logs. Keeps a compensated
/// sum of exp(term - scale) and moves the scale up as larger terms arrive.
class LogSum {
 public:
  void add_log(double log_term);
  double log_value() const;
  bool empty() const { return empty_; }

 private:
  bool empty_ = true;
  double scale_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace specdisc
