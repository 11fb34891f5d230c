#pragma once

// Domain families with the symmetry of the equilateral triangle, given by
// inverse-polar boundary equations r(theta) = 1/rho(theta), plus the order-6
// symmetry group G0, convexity/Lipschitz certificates and boundary distances.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ecplab/errors.hpp"

namespace ecplab::geometry {

inline constexpr double kSqrt3 = 1.7320508075688772935;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

// Reference triangle T0: vertices A=(-1/2,-sqrt3/6), B=(1/2,-sqrt3/6),
// C=(0,sqrt3/3), centroid at the origin, mirror D_C = {u=0}.
Vec2 vertex_a();
Vec2 vertex_b();
Vec2 vertex_c();

// ---------------------------------------------------------------------------
// Symmetry group G0 = {I, D_A, D_B, D_C, R, R^2}
// ---------------------------------------------------------------------------

enum class Element : std::uint8_t { I = 0, DA = 1, DB = 2, DC = 3, R = 4, R2 = 5 };
inline constexpr int kGroupOrder = 6;

using Mat2 = std::array<double, 4>;  // row major: {m00, m01, m10, m11}

namespace group {
const Mat2& matrix(Element g);
Vec2 apply(Element g, Vec2 p);
// compose(f, g) = f o g, matching the published multiplication table
Element compose(Element f, Element g);
Element inverse(Element g);
bool is_mirror(Element g);
const char* name(Element g);
}  // namespace group

// ---------------------------------------------------------------------------
// Torsion polynomials
// ---------------------------------------------------------------------------

// f0(u,v) = (1+2*sqrt3*v)(1+3u-sqrt3*v)(1-3u-sqrt3*v); positive inside T0,
// zero on its sides.
double f0_eval(double u, double v);

// Dilated torsion polynomial f_{0,t}; equals f0 at t=0 and takes the common
// value t^2(3+t) at the vertices A, B, C.
double f0t_eval(double t, double u, double v);

// f1, the analog of f0 in the frame rotated by -pi/2 (vertex on the x-axis).
double f1_eval(double x, double y);

// ---------------------------------------------------------------------------
// Domain specifications
// ---------------------------------------------------------------------------

enum class DomainKind : std::uint8_t {
  triangle_t0,       // the equilateral triangle T0 itself
  omega_t,           // {f_{0,t} > t^2(3+t)}, 0 <= t <= 1/2
  level_set_f0,      // {f0 > t}, 0 < t < 1/2
  rounded_triangle,  // T0 with corners replaced by tangent circular arcs
  tabulated_polar,   // user-supplied inverse-polar samples
};

const char* kind_name(DomainKind k);

// Uniform inverse-polar samples of a boundary over [0, 2pi).
struct PolarBoundary {
  std::vector<double> theta;
  std::vector<double> r;                         // inverse radius, r > 0
  std::optional<std::vector<double>> r_theta;    // optional derivative samples
};

struct DomainSpec {
  DomainKind kind = DomainKind::triangle_t0;
  double param = 0.0;  // t for omega_t/level_set_f0, corner radius for rounded
  std::shared_ptr<const PolarBoundary> samples;  // tabulated_polar only

  static DomainSpec triangle();
  static DomainSpec omega(double t);
  static DomainSpec level_set(double t);
  static DomainSpec rounded(double corner_radius);
  static DomainSpec tabulated(PolarBoundary boundary);

  std::string name() const;
};

// Reduces theta to the fundamental sector [-pi/6, pi/6] of the G0 action on
// directions (vertex B direction at -pi/6, side midpoint M_A at +pi/6).
double reduce_theta(double theta);

// Inverse-polar radius of the line carrying side BC of T0:
// r_A(theta) = 2*sqrt3*cos(theta - pi/6), valid for theta in [-pi/6, pi/2].
double triangle_side_inverse_radius(double theta);

struct InverseRadius {
  double r = 0.0;        // 1/rho
  double r_theta = 0.0;  // d r / d theta at the reduced angle
};

// Boundary of `spec` in inverse-polar form at any angle (internally reduced to
// the fundamental sector). Root of the kind's boundary cubic for the curved
// families; residual is at machine precision.
InverseRadius boundary_inverse_radius(const DomainSpec& spec, double theta);

// rho(theta) = 1/r(theta)
double rho(const DomainSpec& spec, double theta);

// r_theta / r at theta, reduced to the increasing sub-sector. Only defined for
// the omega_t and level_set_f0 families.
double lipschitz_ratio(const DomainSpec& spec, double theta);

// For the level-set kinds, |f(boundary point) - level|; the boundary must lie
// on the level set.
double level_residual(const DomainSpec& spec, double theta);

// Residual of the kind's boundary cubic at the returned root, relative to the
// cubic's coefficient scale.
double boundary_cubic_residual(const DomainSpec& spec, double theta);

PolarBoundary sample_boundary(const DomainSpec& spec, int n);

struct ConvexityCertificate {
  bool ok = false;
  double min_value = 0.0;  // min over the grid of R'' + R (centered differences)
};

// Discrete inverse-polar convexity test: R'' + R >= 0 up to 1e-8 * max R.
ConvexityCertificate convexity_certificate(const PolarBoundary& b);

// Periodic mollification of a convex inverse-polar boundary, rescaled so that
// R/(1+3*eps/2) < R_eps < R/(1+eps/2) holds on the grid.
PolarBoundary mollify_boundary(const PolarBoundary& b, double eps);

// sup-norm distance of the polar radius functions on an n-point grid
double dr_distance(const DomainSpec& d1, const DomainSpec& d2, int n);

// symmetric Hausdorff distance of boundary point clouds of size n
double hausdorff_distance(const DomainSpec& d1, const DomainSpec& d2, int n);

}  // namespace ecplab::geometry
