#include "cutopt/assembly/traces.hpp"

namespace cutopt {

double weighted_identity_check(double a_i, double a_j, double b_i, double b_j, double mu_i, double mu_j) {
  const double lhs = weighted_average(a_i * b_i, a_j * b_j, mu_i, mu_j);
  return lhs - 2.0 * weighted_average(a_i, a_j, mu_i, mu_j) * arithmetic_average(b_i, b_j) -
         conjugate_average(a_i, a_j, mu_i, mu_j) * jump(b_i, b_j);
}

double weighted_identity_residual(double a_i, double a_j, double b_i, double b_j, double mu_i, double mu_j) {
  const double lhs = weighted_average(a_i * b_i, a_j * b_j, mu_i, mu_j);
  return lhs - weighted_average(a_i, a_j, mu_i, mu_j) * arithmetic_average(b_i, b_j) -
         0.5 * conjugate_average(a_i, a_j, mu_i, mu_j) * jump(b_i, b_j);
}

double conjugate_ratio(double c_i, double c_j, double mu_i, double mu_j) {
  const double k = conjugate_average(std::sqrt(c_i), std::sqrt(c_j), mu_i, mu_j);
  return k * k / weighted_average(c_i, c_j, mu_i, mu_j);
}

}  // namespace cutopt
