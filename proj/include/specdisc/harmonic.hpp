#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "specdisc/log_scalar.hpp"
#include "specdisc/model.hpp"

namespace specdisc {

/// Ratio sequence r_n = h_n / h_{n+1} and log h_n of the harmonic function
/// with h_0 = 1, together with u_n = a_n/b_n, v_n = c_n/b_n, xi_n = 1 + u_n + v_n.
struct HarmonicSeq {
  std::vector<double> r;
  std::vector<double> log_h;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> xi;
};

/// Fills r, u, v, xi for n = 0..n_max. Throws ConsistencyError if the
/// refined upper bound on r_n is violated.
HarmonicSeq compute_r(const DiscreteModel& model, std::size_t n_max);

/// Fills log_h for n = 0..n_max; requires r up to n_max - 1.
void compute_h(HarmonicSeq& seq, std::size_t n_max);

/// compute_r to n_max followed by compute_h to n_max + 1.
HarmonicSeq harmonic_sequence(const DiscreteModel& model, std::size_t n_max);

/// Refined bound [1 + v_n + u_n v_{n-1}/(1+v_{n-1})]^{-1} (n >= 1), 1/(1+v_0) at n = 0.
double r_refined_bound(const HarmonicSeq& seq, std::size_t n);

struct SecondOrderH {
  std::vector<LogScalar> h;
  std::optional<std::size_t> cancellation_at;  // first i where the two terms nearly cancel
};

/// h from h_i = xi_{i-1} h_{i-1} - u_{i-1} h_{i-2}, h_0 = 1, h_1 = 1 + v_0, in signed log arithmetic.
SecondOrderH h_second_order(const DiscreteModel& model, std::size_t n_max);

struct FixedPointBound {
  bool applicable = false;
  double value = 0.0;         // 2 / (xi_n + sqrt(xi_n^2 - 4 u_n))
  bool precondition = false;  // u_n (xi_{n-1} - s_{n-1}) <= u_{n-1} (xi_n - s_n)
};

/// Fixed-point bound on r_n from x = 1/(xi_n - u_n x).
FixedPointBound r_fixed_point_bound(const DiscreteModel& model, std::size_t n);
FixedPointBound r_fixed_point_bound(const HarmonicSeq& seq, std::size_t n);

struct HLowerBound {
  double log_value = 0.0;
  bool certified = false;
  std::optional<std::size_t> first_failure;  // index where the induction breaks
  std::string note;
};

/// Product lower bound log h_{n0} + sum_{k=n0}^{n-1} log((xi_k + s_k)/2).
/// With n0 = 1 this is (1+v_0) prod_{k=1}^{n-1} (xi_k + s_k)/2. Certified only
/// when r_{n0} obeys the fixed-point bound and the precondition holds for
/// k = n0+1..n-1; otherwise the bound needs a local modification of the
/// rates and the result carries no claim.
HLowerBound h_lower_bound(const HarmonicSeq& seq, std::size_t n, std::size_t n0 = 1);
HLowerBound h_lower_bound(const DiscreteModel& model, std::size_t n, std::size_t n0 = 1);

/// max_n |(xi_n - u_n r_{n-1}) r_n - 1| over 1 <= n <= n_max.
double r_recursion_residual(const HarmonicSeq& seq, std::size_t n_max);

/// max over 1 <= k <= k_max of |b_k(h_{k+1}-h_k) + a_k(h_{k-1}-h_k) - c_k h_k|
/// divided by b_k h_{k+1} + a_k h_{k-1} + (a_k+b_k+c_k) h_k.
double harmonicity_residual(const HarmonicSeq& seq, std::size_t k_max);

}  // namespace specdisc
