#include "ecplab/closedform.hpp"

#include <algorithm>
#include <cmath>

namespace ecplab::closedform {

using geometry::kPi;
using geometry::kSqrt3;

// ---------------------------------------------------------------------------
// xi1 on T_e
// ---------------------------------------------------------------------------

double xi1_dirichlet_sum(double x, double y) {
  const double w = y / kSqrt3;
  return std::sin(4.0 * kPi * y / kSqrt3) + std::sin(2.0 * kPi * (x - w)) -
         std::sin(2.0 * kPi * (x + w));
}

double xi1_dirichlet_product(double x, double y) {
  const double w = y / kSqrt3;
  return 4.0 * std::sin(2.0 * kPi * w) * std::sin(kPi * (x - w)) * std::sin(kPi * (x + w));
}

FieldSample xi1_dirichlet(double x, double y) {
  const double a = 4.0 * kPi / kSqrt3;
  const double b = 2.0 * kPi;
  const double w = y / kSqrt3;
  const double sm = std::sin(b * (x - w)), cm = std::cos(b * (x - w));
  const double sp = std::sin(b * (x + w)), cp = std::cos(b * (x + w));
  FieldSample out;
  out.value = std::sin(a * y) + sm - sp;
  out.grad.x = b * (cm - cp);
  out.grad.y = a * std::cos(a * y) - (b / kSqrt3) * (cm + cp);
  out.huu = b * b * (sp - sm);
  out.huv = (b * b / kSqrt3) * (sm + sp);
  out.hvv = -a * a * std::sin(a * y) - (b * b / 3.0) * (sm - sp);
  return out;
}

double xi1_eigenvalue() { return 16.0 * kPi * kPi / 3.0; }

// ---------------------------------------------------------------------------
// phi0 on T0
// ---------------------------------------------------------------------------

namespace {
constexpr double kK = 2.0 * kPi / 3.0;  // base wave number of phi0
}

double phi0_neumann(double u, double v) {
  // u -> -u swaps the two travelling terms; summing them first keeps the
  // D_C evenness exact in floating point
  const double s = kSqrt3 * v;
  return std::cos(2.0 * kK * u) + (std::cos(kK * (1.0 - u - s)) + std::cos(kK * (1.0 + u - s)));
}

FieldSample phi0(double u, double v) {
  const double s = kSqrt3 * v;
  const double sa = std::sin(kK * (1.0 - u - s)), ca = std::cos(kK * (1.0 - u - s));
  const double sb = std::sin(kK * (1.0 + u - s)), cb = std::cos(kK * (1.0 + u - s));
  const double s2 = std::sin(2.0 * kK * u), c2 = std::cos(2.0 * kK * u);
  FieldSample out;
  out.value = c2 + (ca + cb);
  out.grad.x = kK * (-2.0 * s2 + sa - sb);
  out.grad.y = kSqrt3 * kK * (sa + sb);
  out.huu = -kK * kK * (4.0 * c2 + ca + cb);
  out.huv = kSqrt3 * kK * kK * (cb - ca);
  out.hvv = -3.0 * kK * kK * (ca + cb);
  return out;
}

double phi0_eigenvalue() { return 16.0 * kPi * kPi / 9.0; }

double phi0_l2_norm_sq_t0() { return 3.0 * kSqrt3 / 8.0; }

double phi0_eigen_residual(double u, double v) {
  const FieldSample f = phi0(u, v);
  return std::abs(f.huu + f.hvv + phi0_eigenvalue() * f.value);
}

std::pair<double, double> phi0_critical_residuals(double u, double v) {
  // grad phi0 = (-(4pi/3) R1, (4 sqrt3 pi/3) R2) with
  //   R1 = sin(2pi u/3) { cos(2pi(1 - sqrt3 v)/3) + 2 cos(2pi u/3) }
  //   R2 = sin(2pi(1 - sqrt3 v)/3) cos(2pi u/3)
  const double p = kK * (1.0 - kSqrt3 * v);
  const double q = kK * u;
  return {std::sin(q) * (std::cos(p) + 2.0 * std::cos(q)), std::sin(p) * std::cos(q)};
}

std::vector<Vec2> find_phi0_critical_points(Vec2 lo, Vec2 hi) {
  constexpr int kSeeds = 64;
  constexpr double kDedup = 1e-8;
  std::vector<Vec2> roots;
  for (int i = 0; i < kSeeds; ++i) {
    for (int j = 0; j < kSeeds; ++j) {
      Vec2 p{lo.x + (hi.x - lo.x) * (i + 0.5) / kSeeds,
             lo.y + (hi.y - lo.y) * (j + 0.5) / kSeeds};
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        const FieldSample f = phi0(p.x, p.y);
        const double det = f.huu * f.hvv - f.huv * f.huv;
        if (std::abs(det) < 1e-14) break;
        const Vec2 step{(f.hvv * f.grad.x - f.huv * f.grad.y) / det,
                        (-f.huv * f.grad.x + f.huu * f.grad.y) / det};
        p = p - step;
        if (std::hypot(step.x, step.y) < 1e-13) {
          converged = true;
          break;
        }
      }
      if (!converged) continue;
      const auto [r1, r2] = phi0_critical_residuals(p.x, p.y);
      if (std::abs(r1) > 1e-10 || std::abs(r2) > 1e-10) continue;
      if (p.x < lo.x - 1e-9 || p.x > hi.x + 1e-9 || p.y < lo.y - 1e-9 || p.y > hi.y + 1e-9)
        continue;
      bool dup = false;
      for (const Vec2& q : roots)
        if (std::hypot(p.x - q.x, p.y - q.y) < kDedup) dup = true;
      if (!dup) roots.push_back(p);
    }
  }
  std::sort(roots.begin(), roots.end(), [](Vec2 a, Vec2 b) {
    if (std::abs(a.y - b.y) > 1e-7) return a.y < b.y;
    return a.x < b.x;
  });
  return roots;
}

// ---------------------------------------------------------------------------
// torsion functions and log-Hessian determinants
// ---------------------------------------------------------------------------

FieldSample f0(double u, double v) {
  FieldSample out;
  out.value = geometry::f0_eval(u, v);
  out.grad.x = -18.0 * u * (1.0 + 2.0 * kSqrt3 * v);
  out.grad.y = -18.0 * v + 18.0 * kSqrt3 * v * v - 18.0 * kSqrt3 * u * u;
  out.huu = -18.0 * (1.0 + 2.0 * kSqrt3 * v);
  out.huv = -36.0 * kSqrt3 * u;
  out.hvv = -18.0 + 36.0 * kSqrt3 * v;
  return out;
}

FieldSample f1(double x, double y) {
  // f1(x,y) = f0 in the frame rotated so that vertex C sits on the x-axis
  FieldSample out;
  out.value = geometry::f1_eval(x, y);
  out.grad.x = -18.0 * x + 18.0 * kSqrt3 * x * x - 18.0 * kSqrt3 * y * y;
  out.grad.y = -18.0 * y - 36.0 * kSqrt3 * x * y;
  out.huu = -18.0 + 36.0 * kSqrt3 * x;
  out.huv = -36.0 * kSqrt3 * y;
  out.hvv = -18.0 * (1.0 + 2.0 * kSqrt3 * x);
  return out;
}

double torsion_laplacian(double u, double v) {
  (void)u;
  // f0 = 1 - 9u^2 - 9v^2 + 6*sqrt3*v^3 - 18*sqrt3*u^2*v
  // f_uu = -18 - 36*sqrt3*v, f_vv = -18 + 36*sqrt3*v; summing the polynomial
  // coefficients first cancels the v-terms exactly
  const double c_v = -36.0 * kSqrt3 + 36.0 * kSqrt3;
  const double c_0 = -18.0 + -18.0;
  return c_0 + c_v * v;
}

double torsion_laplacian_check() { return torsion_laplacian(0.1, -0.2); }

namespace {
double log_hess_det_from(const FieldSample& f, const char* what) {
  if (!(f.value > 0.0)) fail(errc::invalid_argument, std::string("OnZeroSet: ") + what);
  const double v = f.value;
  const double guu = f.huu / v - f.grad.x * f.grad.x / (v * v);
  const double guv = f.huv / v - f.grad.x * f.grad.y / (v * v);
  const double gvv = f.hvv / v - f.grad.y * f.grad.y / (v * v);
  return guu * gvv - guv * guv;
}
}  // namespace

double log_hessian_det_f0(double u, double v) {
  const double val = geometry::f0_eval(u, v);
  if (!(val > 0.0)) fail(errc::invalid_argument, "OnZeroSet: log_hessian_det_f0");
  return 324.0 * (1.0 + 6.0 * u * u + 6.0 * v * v) / (val * val);
}

double log_hessian_det_f0_exact(double u, double v) {
  return log_hess_det_from(f0(u, v), "log_hessian_det_f0_exact");
}

double log_hessian_det_xi(double x, double y) {
  const double val = xi1_dirichlet_sum(x, y);
  if (!(val > 0.0)) fail(errc::invalid_argument, "OnZeroSet: log_hessian_det_xi");
  const double w = y / kSqrt3;
  const double n = 2.0 - 2.0 * std::cos(2.0 * kPi * w) * std::cos(kPi * (x - w)) *
                             std::cos(kPi * (x + w));
  const double pi4 = kPi * kPi * kPi * kPi;
  // the prefactor is 16x the published 4 pi^4/3: that constant goes with the
  // product form scaled by 1/4, i.e. D = (xi/4)^2; here D = xi^2
  return (64.0 * pi4 / 3.0) * n / (val * val);
}

double log_hessian_det_xi_exact(double x, double y) {
  return log_hess_det_from(xi1_dirichlet(x, y), "log_hessian_det_xi_exact");
}

// ---------------------------------------------------------------------------
// field registry
// ---------------------------------------------------------------------------

std::vector<std::string> field_names() {
  return {"f0", "f1", "phi0", "xi1d", "logdet_f0", "logdet_xi"};
}

double eval_field(const std::string& name, double u, double v) {
  if (name == "f0") return geometry::f0_eval(u, v);
  if (name == "f1") return geometry::f1_eval(u, v);
  if (name == "phi0") return phi0_neumann(u, v);
  if (name == "xi1d") return xi1_dirichlet_sum(u, v);
  if (name == "logdet_f0") return log_hessian_det_f0(u, v);
  if (name == "logdet_xi") return log_hessian_det_xi(u, v);
  fail(errc::invalid_argument, "unknown field: " + name);
}

}  // namespace ecplab::closedform
