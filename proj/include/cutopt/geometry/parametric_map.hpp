#pragma once

#include "cutopt/common.hpp"

#include <array>

namespace cutopt {

/// Analytic map F from the reference square [0,1]^2 onto a nondesign patch.
class ParametricMap {
 public:
  enum class Kind { Biquadratic, Polar };

  /// Biquadratic Lagrange patch; nodes[a + 3b] is the image of (a/2, b/2).
  static ParametricMap biquadratic(const std::array<Vec2, 9>& nodes);
  /// Straight-sided patch with corners F(0,0), F(1,0), F(1,1), F(0,1).
  static ParametricMap bilinear(const Vec2& p00, const Vec2& p10, const Vec2& p11, const Vec2& p01);
  /// Annulus sector: r = r0 + (r1 - r0) xi, theta = theta0 + (theta1 - theta0) eta.
  static ParametricMap polar(const Vec2& center, double r0, double r1, double theta0, double theta1);

  Kind kind() const { return kind_; }
  const std::array<Vec2, 9>& nodes() const { return nodes_; }
  const Vec2& center() const { return center_; }
  double r0() const { return r0_; }
  double r1() const { return r1_; }
  double theta0() const { return theta0_; }
  double theta1() const { return theta1_; }

  /// No domain check; evaluates the analytic extension.
  Vec2 operator()(const Vec2& ref) const;
  /// Columns are dF/dxi and dF/deta.
  Mat2 jacobian(const Vec2& ref) const;
  /// Newton inverse started from `guess`; converged() false if it fails.
  struct Inverse {
    Vec2 ref;
    bool converged = false;
  };
  Inverse inverse(const Vec2& x, const Vec2& guess = Vec2(0.5, 0.5)) const;

 private:
  Kind kind_ = Kind::Biquadratic;
  std::array<Vec2, 9> nodes_{};
  Vec2 center_{0.0, 0.0};
  double r0_ = 0.0, r1_ = 0.0, theta0_ = 0.0, theta1_ = 0.0;
};

}  // namespace cutopt
