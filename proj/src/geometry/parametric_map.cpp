#include "cutopt/geometry/parametric_map.hpp"

#include <cmath>

namespace cutopt {

namespace {

// Quadratic Lagrange basis on nodes {0, 1/2, 1}.
void lagrange2(double t, double* L, double* dL) {
  L[0] = 2.0 * (t - 0.5) * (t - 1.0);
  L[1] = -4.0 * t * (t - 1.0);
  L[2] = 2.0 * t * (t - 0.5);
  dL[0] = 4.0 * t - 3.0;
  dL[1] = -8.0 * t + 4.0;
  dL[2] = 4.0 * t - 1.0;
}

}  // namespace

ParametricMap ParametricMap::biquadratic(const std::array<Vec2, 9>& nodes) {
  ParametricMap m;
  m.kind_ = Kind::Biquadratic;
  m.nodes_ = nodes;
  return m;
}

ParametricMap ParametricMap::bilinear(const Vec2& p00, const Vec2& p10, const Vec2& p11, const Vec2& p01) {
  std::array<Vec2, 9> n;
  for (int b = 0; b < 3; ++b)
    for (int a = 0; a < 3; ++a) {
      const double s = 0.5 * a, t = 0.5 * b;
      n[a + 3 * b] = (1 - s) * (1 - t) * p00 + s * (1 - t) * p10 + s * t * p11 + (1 - s) * t * p01;
    }
  return biquadratic(n);
}

ParametricMap ParametricMap::polar(const Vec2& center, double r0, double r1, double theta0, double theta1) {
  ParametricMap m;
  m.kind_ = Kind::Polar;
  m.center_ = center;
  m.r0_ = r0;
  m.r1_ = r1;
  m.theta0_ = theta0;
  m.theta1_ = theta1;
  return m;
}

Vec2 ParametricMap::operator()(const Vec2& ref) const {
  if (kind_ == Kind::Polar) {
    const double r = r0_ + (r1_ - r0_) * ref.x();
    const double th = theta0_ + (theta1_ - theta0_) * ref.y();
    return center_ + r * Vec2(std::cos(th), std::sin(th));
  }
  double Lx[3], dLx[3], Ly[3], dLy[3];
  lagrange2(ref.x(), Lx, dLx);
  lagrange2(ref.y(), Ly, dLy);
  Vec2 x = Vec2::Zero();
  for (int b = 0; b < 3; ++b)
    for (int a = 0; a < 3; ++a) x += Lx[a] * Ly[b] * nodes_[a + 3 * b];
  return x;
}

Mat2 ParametricMap::jacobian(const Vec2& ref) const {
  Mat2 J;
  if (kind_ == Kind::Polar) {
    const double r = r0_ + (r1_ - r0_) * ref.x();
    const double th = theta0_ + (theta1_ - theta0_) * ref.y();
    const Vec2 er(std::cos(th), std::sin(th));
    const Vec2 et(-std::sin(th), std::cos(th));
    J.col(0) = (r1_ - r0_) * er;
    J.col(1) = r * (theta1_ - theta0_) * et;
    return J;
  }
  double Lx[3], dLx[3], Ly[3], dLy[3];
  lagrange2(ref.x(), Lx, dLx);
  lagrange2(ref.y(), Ly, dLy);
  J.setZero();
  for (int b = 0; b < 3; ++b)
    for (int a = 0; a < 3; ++a) {
      J.col(0) += dLx[a] * Ly[b] * nodes_[a + 3 * b];
      J.col(1) += Lx[a] * dLy[b] * nodes_[a + 3 * b];
    }
  return J;
}

ParametricMap::Inverse ParametricMap::inverse(const Vec2& x, const Vec2& guess) const {
  Inverse inv;
  Vec2 r = guess;
  const double scale = std::max(1.0, x.norm());
  for (int it = 0; it < 50; ++it) {
    const Vec2 res = (*this)(r)-x;
    if (res.norm() < 1e-14 * scale) {
      inv.converged = true;
      break;
    }
    const Mat2 J = jacobian(r);
    if (std::abs(J.determinant()) < 1e-300) break;
    Vec2 step = J.lu().solve(res);
    // Keep Newton from wandering far outside the reference square.
    const double len = step.norm();
    if (len > 0.5) step *= 0.5 / len;
    r -= step;
  }
  if (!inv.converged && ((*this)(r)-x).norm() < 1e-12 * scale) inv.converged = true;
  inv.ref = r;
  return inv;
}

}  // namespace cutopt
