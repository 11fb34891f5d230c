#pragma once

// Exact closed forms on the equilateral triangle: the first Dirichlet
// eigenfunction of T_e, the symmetric second Neumann eigenfunction of T0,
// torsion-function identities and log-Hessian determinants, all with
// hand-differentiated gradients and Hessians.

#include <string>
#include <vector>

#include "ecplab/geometry.hpp"

namespace ecplab::closedform {

using geometry::Vec2;

struct FieldSample {
  double value = 0.0;
  Vec2 grad{};
  double huu = 0.0, huv = 0.0, hvv = 0.0;  // Hessian entries
};

// first Dirichlet eigenfunction of T_e (vertices (0,0), (1,0), (1/2,sqrt3/2))
double xi1_dirichlet_sum(double x, double y);
double xi1_dirichlet_product(double x, double y);
FieldSample xi1_dirichlet(double x, double y);
double xi1_eigenvalue();  // 16 pi^2 / 3

// symmetric second Neumann eigenfunction of T0, sign convention a0 = +1
// (phi0(C) = 3 > 0, phi0(A) = phi0(B) = -3/2)
double phi0_neumann(double u, double v);
FieldSample phi0(double u, double v);
double phi0_eigenvalue();     // 16 pi^2 / 9
double phi0_l2_norm_sq_t0();  // int_{T0} phi0^2 = 3 sqrt(3) / 8

// |Delta phi0 + (16 pi^2/9) phi0| from exact second derivatives
double phi0_eigen_residual(double u, double v);

// left-hand sides of the critical-point system of phi0; both vanish exactly
// at A, B, C and the side midpoint M_C
std::pair<double, double> phi0_critical_residuals(double u, double v);

// Newton iteration from a 64x64 seed grid on the gradient system, deduplicated
// at 1e-8, restricted to the window, sorted by (v, u).
std::vector<Vec2> find_phi0_critical_points(Vec2 window_lo, Vec2 window_hi);

// torsion function f0 and its relatives
FieldSample f0(double u, double v);
FieldSample f1(double x, double y);

// Laplacian of f0 assembled in coefficient space; the v-terms cancel exactly,
// so the result is the constant -36 at every point, bit for bit
double torsion_laplacian(double u, double v);
double torsion_laplacian_check();  // Delta f0, constant -36

// det Hess(log f0) = 324 (1 + 6u^2 + 6v^2) / f0^2, f0 > 0 required
double log_hessian_det_f0(double u, double v);
// same determinant recomputed from the exact Hessian of f0
double log_hessian_det_f0_exact(double u, double v);

// det Hess(log xi1) = (4 pi^4/3) N / xi1^2 with
// N = 2 - 2 cos(2 pi y/sqrt3) cos(pi(x - y/sqrt3)) cos(pi(x + y/sqrt3))
double log_hessian_det_xi(double x, double y);
double log_hessian_det_xi_exact(double x, double y);

// named value-only evaluators for the CLI sampling command
std::vector<std::string> field_names();
double eval_field(const std::string& name, double u, double v);

}  // namespace ecplab::closedform
