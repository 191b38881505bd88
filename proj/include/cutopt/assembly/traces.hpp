#pragma once

#include "cutopt/common.hpp"

#include <cmath>

namespace cutopt {

/// Forward-mode dual number, enough for first derivatives of the trace
/// weights with respect to one density value.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  Dual() = default;
  Dual(double value, double deriv = 0.0) : v(value), d(deriv) {}
};

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
inline double value(double x) { return x; }
inline double value(const Dual& x) { return x.v; }

/// Interface weights at a point: omega_i = mu_j / (mu_i + mu_j),
/// omega_j = mu_i / (mu_i + mu_j); on boundaries omega_i = 1, omega_j = 0.
template <class T>
struct TraceWeights {
  T omega_i, omega_j;
  T pen_mu;      ///< {h^-1 2 mu}
  T pen_lambda;  ///< {h^-1 lambda}
};

template <class T>
TraceWeights<T> interface_weights(T mu_i, T mu_j, T lambda_i, T lambda_j, double h_i, double h_j) {
  TraceWeights<T> w;
  const T sum = mu_i + mu_j;
  w.omega_i = mu_j / sum;
  w.omega_j = mu_i / sum;
  w.pen_mu = w.omega_i * (T(2.0 / h_i) * mu_i) + w.omega_j * (T(2.0 / h_j) * mu_j);
  w.pen_lambda = w.omega_i * (T(1.0 / h_i) * lambda_i) + w.omega_j * (T(1.0 / h_j) * lambda_j);
  return w;
}

template <class T>
TraceWeights<T> boundary_weights(T mu, T lambda, double h) {
  return {T(1.0), T(0.0), T(2.0 / h) * mu, T(1.0 / h) * lambda};
}

/// Scalar trace operators between sides i and j.
inline double jump(double a_i, double a_j) { return a_i - a_j; }
inline double arithmetic_average(double a_i, double a_j) { return 0.5 * (a_i + a_j); }
inline double weighted_average(double a_i, double a_j, double mu_i, double mu_j) {
  return (mu_j * a_i + mu_i * a_j) / (mu_i + mu_j);
}
inline double conjugate_average(double a_i, double a_j, double mu_i, double mu_j) {
  return (mu_j * a_i - mu_i * a_j) / (mu_i + mu_j);
}

/// {ab} - 2 {a}<b> - [[a]] [b], with weights from mu_i, mu_j.
double weighted_identity_check(double a_i, double a_j, double b_i, double b_j, double mu_i, double mu_j);

/// {ab} - {a}<b> - [[a]] [b] / 2, which vanishes identically.
double weighted_identity_residual(double a_i, double a_j, double b_i, double b_j, double mu_i, double mu_j);

/// [[c^1/2]]^2 / {c} for positive c_i, c_j and weights from mu_i, mu_j.
double conjugate_ratio(double c_i, double c_j, double mu_i, double mu_j);

}  // namespace cutopt
