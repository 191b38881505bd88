#include "cutopt/geometry/background_mesh.hpp"
#include "cutopt/spline/bspline.hpp"
#include "cutopt/spline/spline_space.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cutopt;

TEST_CASE("uniform B-splines match the Cox-de Boor recursion") {
  for (int p = 1; p <= 4; ++p) {
    std::vector<double> knots;
    for (int k = -p; k <= p + 1; ++k) knots.push_back(k);
    for (double u : {0.0, 0.13, 0.5, 0.77, 0.999}) {
      const auto d = uniform_bspline_ders(p, u, 0);
      double sum = 0.0;
      for (int a = 0; a <= p; ++a) {
        CHECK(d[0][a] == doctest::Approx(cox_de_boor(knots, a, p, u)).epsilon(1e-14));
        sum += d[0][a];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("B-spline derivatives and linear reproduction") {
  for (int p = 1; p <= 4; ++p)
    for (double u : {0.1, 0.4, 0.9}) {
      const auto d = uniform_bspline_ders(p, u, std::min(p, 2));
      const double h = 1e-6;
      const auto dp = uniform_bspline_ders(p, u + h, 0);
      const auto dm = uniform_bspline_ders(p, u - h, 0);
      double lin = 0.0, dsum = 0.0;
      for (int a = 0; a <= p; ++a) {
        CHECK(d[1][a] == doctest::Approx((dp[0][a] - dm[0][a]) / (2 * h)).epsilon(1e-7));
        // Greville abscissa of function a on this span
        lin += (a - 0.5 * (p - 1)) * d[0][a];
        dsum += d[1][a];
      }
      CHECK(lin == doctest::Approx(u).epsilon(1e-14));
      CHECK(dsum == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("spline space numbering on a partial grid") {
  // 4 x 3 grid with the corner elements 0 and 11 inactive.
  std::vector<int> active;
  for (int e = 1; e < 11; ++e) active.push_back(e);
  SplineSpace s(4, 3, 2, active);
  CHECK(s.local_size() == 9);
  CHECK_FALSE(s.element_active(0));
  CHECK(s.element_active(5));
  // Lattice is 6 x 5; only lattice node (0,0) touches element 0 alone,
  // and (5,4) touches element 11 alone.
  CHECK(s.num_dofs() == 30 - 2);
  CHECK(s.dof_of_lattice(0, 0) == -1);
  CHECK(s.dof_of_lattice(5, 4) == -1);
  for (int e : active) {
    const auto dofs = s.element_dofs(e);
    const int i = e % 4, j = e / 4;
    for (int b = 0; b <= 2; ++b)
      for (int a = 0; a <= 2; ++a) {
        const auto [li, lj] = s.lattice_of_dof(dofs[a + 3 * b]);
        CHECK(li == i + a);
        CHECK(lj == j + b);
      }
  }
  CHECK(s.locate(Vec2(2.5, 1.5)) == 6);
  CHECK(s.locate(Vec2(4.0, 3.0)) == 11);
}

TEST_CASE("physical basis gradients on a rotated grid") {
  const BackgroundMesh m = build_background_mesh(BoundingBox{{0, 0}, {1, 1}}, 0.25, std::numbers::pi / 7, 0);
  std::vector<int> all(m.num_elements());
  for (int e = 0; e < m.num_elements(); ++e) all[e] = e;
  SplineSpace s(m.nx, m.ny, 2, all);
  const GridMap map = GridMap::affine(m);
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> d(0.05, 0.95);
  for (int k = 0; k < 10; ++k) {
    const int e = static_cast<int>(gen() % all.size());
    const Vec2 g = Vec2(e % m.nx + d(gen), e / m.nx + d(gen));
    const BasisEval be = eval_basis(s, map, e, g);
    double sum = 0.0;
    Vec2 gsum = Vec2::Zero();
    for (std::size_t a = 0; a < be.N.size(); ++a) {
      sum += be.N[a];
      gsum += be.grad[a];
      // Finite difference along the physical x direction.
      const double h = 1e-6;
      const Vec2 dg = m.to_grid(m.to_physical(g) + Vec2(h, 0)) - g;
      const double np = eval_basis(s, map, e, g + dg).N[a];
      const double nm = eval_basis(s, map, e, g - dg).N[a];
      CHECK(std::abs(be.grad[a].x() - (np - nm) / (2 * h)) < 1e-6);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gsum.norm() < 1e-12);
  }
}
