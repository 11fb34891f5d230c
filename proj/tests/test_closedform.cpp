#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ecplab/closedform.hpp"

using namespace ecplab;
using namespace ecplab::closedform;
using geometry::kPi;
using geometry::kSqrt3;
using geometry::Vec2;

namespace {

std::mt19937 rng(42);

Vec2 random_te_point() {
  // barycentric sample with a 0.05 margin from all three sides
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    double a = u(rng), b = u(rng);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    if (std::min({a, b, 1.0 - a - b}) < 0.05) continue;
    return {a + 0.5 * b, kSqrt3 / 2.0 * b};
  }
}

Vec2 random_t0_point() {
  const Vec2 p = random_te_point();
  return {p.x - 0.5, p.y - kSqrt3 / 6.0};
}

// centered finite differences of a scalar field
template <class F>
Vec2 fd_grad(F f, Vec2 p, double h = 1e-6) {
  return {(f(p.x + h, p.y) - f(p.x - h, p.y)) / (2 * h),
          (f(p.x, p.y + h) - f(p.x, p.y - h)) / (2 * h)};
}

template <class F>
std::array<double, 3> fd_hess(F f, Vec2 p, double h = 1e-4) {
  const double uu = (f(p.x + h, p.y) - 2 * f(p.x, p.y) + f(p.x - h, p.y)) / (h * h);
  const double vv = (f(p.x, p.y + h) - 2 * f(p.x, p.y) + f(p.x, p.y - h)) / (h * h);
  const double uv = (f(p.x + h, p.y + h) - f(p.x + h, p.y - h) - f(p.x - h, p.y + h) +
                     f(p.x - h, p.y - h)) /
                    (4 * h * h);
  return {uu, uv, vv};
}

template <class Eval, class Value>
void check_derivatives(Eval eval, Value value, Vec2 (*sample)(), double scale) {
  for (int i = 0; i < 500; ++i) {
    const Vec2 p = sample();
    const FieldSample s = eval(p.x, p.y);
    const Vec2 g = fd_grad(value, p);
    CHECK(s.grad.x == doctest::Approx(g.x).epsilon(1e-6).scale(scale));
    CHECK(s.grad.y == doctest::Approx(g.y).epsilon(1e-6).scale(scale));
    const auto h = fd_hess(value, p);
    CHECK(s.huu == doctest::Approx(h[0]).epsilon(1e-4).scale(scale));
    CHECK(s.huv == doctest::Approx(h[1]).epsilon(1e-4).scale(scale));
    CHECK(s.hvv == doctest::Approx(h[2]).epsilon(1e-4).scale(scale));
  }
}

// degree-2 midpoint quadrature of f over T0 on an n^2 barycentric subdivision
template <class F>
double quad_t0(F f, int n) {
  const Vec2 a = geometry::vertex_a(), b = geometry::vertex_b(), c = geometry::vertex_c();
  const double cell = kSqrt3 / 4.0 / (n * n);
  double total = 0.0;
  auto at = [&](double l1, double l2) {
    const double l3 = 1.0 - l1 - l2;
    return f(l1 * a.x + l2 * b.x + l3 * c.x, l1 * a.y + l2 * b.y + l3 * c.y);
  };
  const double s = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n - i; ++j) {
      const double l1 = i * s, l2 = j * s;
      total += cell / 3.0 *
               (at(l1 + s / 2, l2) + at(l1, l2 + s / 2) + at(l1 + s / 2, l2 + s / 2));
      if (j < n - i - 1)
        total += cell / 3.0 *
                 (at(l1 + s / 2, l2 + s) + at(l1 + s, l2 + s / 2) + at(l1 + s / 2, l2 + s / 2));
    }
  }
  return total;
}

}  // namespace

TEST_CASE("xi1 values and the equality of the two forms") {
  CHECK(xi1_dirichlet_sum(0.5, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(xi1_dirichlet_sum(0.5, kSqrt3 / 6.0) == doctest::Approx(1.5 * kSqrt3));
  for (int i = 0; i < 10000; ++i) {
    const Vec2 p = random_te_point();
    CHECK(std::abs(xi1_dirichlet_sum(p.x, p.y) - xi1_dirichlet_product(p.x, p.y)) < 1e-12);
  }
  CHECK(xi1_eigenvalue() == doctest::Approx(16.0 * kPi * kPi / 3.0));
}

TEST_CASE("xi1 eigen-equation from the exact Hessian") {
  for (int i = 0; i < 200; ++i) {
    const Vec2 p = random_te_point();
    const FieldSample s = xi1_dirichlet(p.x, p.y);
    CHECK(std::abs(s.huu + s.hvv + xi1_eigenvalue() * s.value) < 1e-10);
  }
}

TEST_CASE("phi0 values") {
  CHECK(phi0_neumann(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(phi0_neumann(0.0, kSqrt3 / 3.0) == doctest::Approx(3.0));
  CHECK(phi0_neumann(-0.5, -kSqrt3 / 6.0) == doctest::Approx(-1.5));
  CHECK(phi0_neumann(0.5, -kSqrt3 / 6.0) == doctest::Approx(-1.5));
  CHECK(phi0_eigenvalue() == doctest::Approx(16.0 * kPi * kPi / 9.0));
}

TEST_CASE("phi0 is D_C-even") {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(phi0_neumann(x, y) == phi0_neumann(-x, y));
  }
}

TEST_CASE("phi0 eigen residual") {
  CHECK(phi0_eigen_residual(0.0, 0.0) < 1e-12);
  for (int i = 0; i < 100; ++i) {
    const Vec2 p = random_t0_point();
    CHECK(phi0_eigen_residual(p.x, p.y) < 1e-10);
  }
}

TEST_CASE("phi0 critical residuals") {
  const auto [r1m, r2m] = phi0_critical_residuals(0.0, -kSqrt3 / 6.0);
  CHECK(std::abs(r1m) < 1e-14);
  CHECK(std::abs(r2m) < 1e-14);
  const auto [r1c, r2c] = phi0_critical_residuals(0.0, kSqrt3 / 3.0);
  CHECK(std::abs(r1c) < 1e-13);
  CHECK(std::abs(r2c) < 1e-13);
  const auto [r1o, r2o] = phi0_critical_residuals(0.0, 0.0);
  CHECK(std::abs(r1o) < 1e-14);  // first component vanishes on {u=0}
  CHECK(std::abs(r2o) > 0.5);    // the centroid is not a critical point
}

TEST_CASE("critical points in the published window") {
  const auto pts = find_phi0_critical_points({-0.625, -kSqrt3 / 3.0}, {0.625, kSqrt3 / 2.0});
  REQUIRE(pts.size() == 4);
  const std::array<Vec2, 4> expected{geometry::vertex_a(), Vec2{0.0, -kSqrt3 / 6.0},
                                     geometry::vertex_b(), geometry::vertex_c()};
  for (int i = 0; i < 4; ++i) {
    CHECK(norm(pts[i] - expected[i]) < 1e-8);
  }

  // a small neighborhood of the centroid contains none
  CHECK(find_phi0_critical_points({-0.05, -0.05}, {0.05, 0.05}).empty());

  // periodicity: the window shifted by a lattice period contains the copies
  const auto shifted =
      find_phi0_critical_points({-0.625 + 3.0, -kSqrt3 / 3.0}, {0.625 + 3.0, kSqrt3 / 2.0});
  REQUIRE(shifted.size() == 4);
  for (int i = 0; i < 4; ++i)
    CHECK(norm(shifted[i] - Vec2{expected[i].x + 3.0, expected[i].y}) < 1e-7);
}

TEST_CASE("log-Hessian determinant of f0") {
  CHECK(log_hessian_det_f0(0.0, 0.0) == doctest::Approx(324.0));
  CHECK(log_hessian_det_f0(0.0, kSqrt3 / 6.0) == doctest::Approx(1944.0));
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p = random_t0_point();
    const double a = log_hessian_det_f0(p.x, p.y);
    const double b = log_hessian_det_f0_exact(p.x, p.y);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
    CHECK(a > 0.0);
  }
  CHECK_THROWS_AS(log_hessian_det_f0(5.0, 5.0), Error);
}

TEST_CASE("log-Hessian determinant of xi1") {
  // at the centroid grad(log xi) = 0 and Hess(xi) = -4*sqrt3*pi^2 * I, so
  // det Hess(log xi) = (4*sqrt3*pi^2 / (3*sqrt3/2))^2 = 64 pi^4 / 9
  const double pi4 = kPi * kPi * kPi * kPi;
  CHECK(log_hessian_det_xi(0.5, kSqrt3 / 6.0) == doctest::Approx(64.0 * pi4 / 9.0));
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p = random_te_point();
    const double a = log_hessian_det_xi(p.x, p.y);
    const double b = log_hessian_det_xi_exact(p.x, p.y);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
    CHECK(a > 0.0);
  }
}

TEST_CASE("torsion laplacian is exactly -36") {
  CHECK(torsion_laplacian_check() == -36.0);
  for (int i = 0; i < 50; ++i) {
    const Vec2 p = random_t0_point();
    CHECK(torsion_laplacian(p.x, p.y) == -36.0);
    const FieldSample s = f0(p.x, p.y);
    CHECK(s.huu + s.hvv == doctest::Approx(-36.0).epsilon(1e-13));
  }
  // the dilated torsion polynomial scales the quadratic part by (1+t), so
  // its Laplacian is the constant -36(1+t); central differences are exact
  // for cubics, which makes the finite-difference probe an oracle here
  for (double t : {0.0, 0.1, 0.3}) {
    auto f0t = [t](double u, double v) { return geometry::f0t_eval(t, u, v); };
    const auto lap = fd_hess(f0t, {0.05, -0.1});
    CHECK(lap[0] + lap[2] == doctest::Approx(-36.0 * (1.0 + t)).epsilon(1e-6));
  }
}

TEST_CASE("f1 values and the rotation relation to f0") {
  CHECK(f1(0.0, 0.0).value == doctest::Approx(1.0));
  CHECK(std::abs(f1(kSqrt3 / 3.0, 0.0).value) < 1e-14);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng), y = u(rng);
    // f1 is f0 conjugated by the rotation sending (sqrt3/3, 0) to (0, sqrt3/3)
    CHECK(f1(x, y).value == doctest::Approx(geometry::f0_eval(-y, x)).epsilon(1e-13));
  }
}

TEST_CASE("gradients and Hessians match finite differences") {
  check_derivatives(f0, geometry::f0_eval, random_t0_point, 10.0);
  check_derivatives(phi0, phi0_neumann, random_t0_point, 10.0);
  check_derivatives(xi1_dirichlet, xi1_dirichlet_sum, random_te_point, 50.0);
  check_derivatives(f1, geometry::f1_eval, random_t0_point, 10.0);
}

TEST_CASE("phi0 mass over T0") {
  // quadrature oracle with Richardson: the stored value is 3 sqrt(3) / 8
  auto f = [](double u, double v) {
    const double p = phi0_neumann(u, v);
    return p * p;
  };
  const double q1 = quad_t0(f, 64), q2 = quad_t0(f, 128);
  const double extrapolated = q2 + (q2 - q1) / 3.0;
  CHECK(phi0_l2_norm_sq_t0() == doctest::Approx(extrapolated).epsilon(1e-8));
  // the mean of phi0 over T0 vanishes
  CHECK(std::abs(quad_t0([](double u, double v) { return phi0_neumann(u, v); }, 128)) < 1e-8);
}

TEST_CASE("nu2 < delta1 for the closed forms") {
  CHECK(phi0_eigenvalue() < xi1_eigenvalue());
}

TEST_CASE("field registry") {
  CHECK(eval_field("f0", 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(eval_field("phi0", 0.0, kSqrt3 / 3.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(eval_field("nope", 0.0, 0.0), Error);
}
