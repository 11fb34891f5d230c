#include "ecplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ecplab::geometry {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Vec2 vertex_a() { return {-0.5, -kSqrt3 / 6.0}; }
Vec2 vertex_b() { return {0.5, -kSqrt3 / 6.0}; }
Vec2 vertex_c() { return {0.0, kSqrt3 / 3.0}; }

// ---------------------------------------------------------------------------
// group
// ---------------------------------------------------------------------------

namespace group {

namespace {
// Half entries are exact; kC is the one shared rounding of sqrt(3)/2, so that
// mirror-related matrices differ only by exact sign flips of the first row.
constexpr double kC = kSqrt3 / 2.0;

constexpr std::array<Mat2, kGroupOrder> kMatrices = {{
    {1.0, 0.0, 0.0, 1.0},     // I
    {0.5, kC, kC, -0.5},      // D_A, mirror line at angle pi/6
    {0.5, -kC, -kC, -0.5},    // D_B, mirror line at angle -pi/6
    {-1.0, 0.0, 0.0, 1.0},    // D_C, mirror line {u=0}
    {-0.5, -kC, kC, -0.5},    // R, rotation by 2pi/3
    {-0.5, kC, -kC, -0.5},    // R^2
}};

// compose_table[f][g] = f o g
constexpr Element I = Element::I, DA = Element::DA, DB = Element::DB,
                  DC = Element::DC, R = Element::R, R2 = Element::R2;
constexpr std::array<std::array<Element, 6>, 6> kCompose = {{
    {I, DA, DB, DC, R, R2},    // I o g
    {DA, I, R, R2, DB, DC},    // D_A o g
    {DB, R2, I, R, DC, DA},    // D_B o g
    {DC, R, R2, I, DA, DB},    // D_C o g
    {R, DC, DA, DB, R2, I},    // R o g
    {R2, DB, DC, DA, I, R},    // R^2 o g
}};
}  // namespace

const Mat2& matrix(Element g) { return kMatrices[static_cast<int>(g)]; }

Vec2 apply(Element g, Vec2 p) {
  const Mat2& m = matrix(g);
  return {m[0] * p.x + m[1] * p.y, m[2] * p.x + m[3] * p.y};
}

Element compose(Element f, Element g) {
  return kCompose[static_cast<int>(f)][static_cast<int>(g)];
}

Element inverse(Element g) {
  if (g == Element::R) return Element::R2;
  if (g == Element::R2) return Element::R;
  return g;  // mirrors and identity are involutions
}

bool is_mirror(Element g) {
  return g == Element::DA || g == Element::DB || g == Element::DC;
}

const char* name(Element g) {
  switch (g) {
    case Element::I: return "I";
    case Element::DA: return "D_A";
    case Element::DB: return "D_B";
    case Element::DC: return "D_C";
    case Element::R: return "R";
    case Element::R2: return "R2";
  }
  return "?";
}

}  // namespace group

// ---------------------------------------------------------------------------
// torsion polynomials
// ---------------------------------------------------------------------------

double f0_eval(double u, double v) {
  const double s = kSqrt3 * v;
  return (1.0 + 2.0 * s) * (1.0 + 3.0 * u - s) * (1.0 - 3.0 * u - s);
}

double f0t_eval(double t, double u, double v) {
  if (t < 0.0) fail(errc::out_of_range_t, "f0t requires t >= 0");
  const double s = kSqrt3 * v;
  return (1.0 + t + 2.0 * s) * (1.0 + t + 3.0 * u - s) * (1.0 + t - 3.0 * u - s);
}

double f1_eval(double x, double y) {
  const double s = kSqrt3 * x;
  return (1.0 + 2.0 * s) * (1.0 - s + 3.0 * y) * (1.0 - s - 3.0 * y);
}

// ---------------------------------------------------------------------------
// domain specs
// ---------------------------------------------------------------------------

const char* kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::triangle_t0: return "TriangleT0";
    case DomainKind::omega_t: return "OmegaT";
    case DomainKind::level_set_f0: return "LevelSetF0";
    case DomainKind::rounded_triangle: return "RoundedTriangle";
    case DomainKind::tabulated_polar: return "TabulatedPolar";
  }
  return "?";
}

DomainSpec DomainSpec::triangle() { return {DomainKind::triangle_t0, 0.0, nullptr}; }

DomainSpec DomainSpec::omega(double t) {
  if (!(t >= 0.0 && t <= 0.5))
    fail(errc::out_of_range_t, "OmegaT requires 0 <= t <= 1/2, got t=" + std::to_string(t));
  return {DomainKind::omega_t, t, nullptr};
}

DomainSpec DomainSpec::level_set(double t) {
  if (!(t > 0.0 && t < 0.5))
    fail(errc::out_of_range_t, "LevelSetF0 requires 0 < t < 1/2, got t=" + std::to_string(t));
  return {DomainKind::level_set_f0, t, nullptr};
}

DomainSpec DomainSpec::rounded(double corner_radius) {
  if (!(corner_radius > 0.0 && corner_radius < kSqrt3 / 6.0))
    fail(errc::out_of_range_t, "RoundedTriangle requires 0 < a < sqrt(3)/6");
  return {DomainKind::rounded_triangle, corner_radius, nullptr};
}

DomainSpec DomainSpec::tabulated(PolarBoundary boundary) {
  const auto n = boundary.theta.size();
  if (n < 16) fail(errc::too_few_samples, "TabulatedPolar needs >= 16 samples");
  if (boundary.r.size() != n)
    fail(errc::invalid_argument, "theta/r size mismatch");
  const double h = 2.0 * kPi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(boundary.theta[i] - static_cast<double>(i) * h) > 1e-9)
      fail(errc::invalid_argument, "TabulatedPolar requires a uniform grid over [0, 2pi)");
    if (!(boundary.r[i] > 0.0))
      fail(errc::invalid_argument, "TabulatedPolar requires r > 0");
  }
  DomainSpec s;
  s.kind = DomainKind::tabulated_polar;
  s.samples = std::make_shared<const PolarBoundary>(std::move(boundary));
  return s;
}

std::string DomainSpec::name() const {
  std::ostringstream os;
  os << kind_name(kind);
  if (kind == DomainKind::omega_t || kind == DomainKind::level_set_f0 ||
      kind == DomainKind::rounded_triangle)
    os << "(" << param << ")";
  return os.str();
}

double reduce_theta(double theta) {
  // psi in [-pi/3, pi/3] measured from the side-midpoint direction pi/6
  const double psi = std::remainder(theta - kPi / 6.0, 2.0 * kPi / 3.0);
  return kPi / 6.0 - std::abs(psi);
}

double triangle_side_inverse_radius(double theta) {
  return 2.0 * kSqrt3 * std::cos(theta - kPi / 6.0);
}

namespace {

struct Cubic {
  // c3 r^3 + c1 r + c0 = 0 with c0 = -6 sqrt3 sin(3 theta')
  double c3, c1, c0;
  double operator()(double r) const { return (c3 * r * r + c1) * r + c0; }
  double deriv(double r) const { return 3.0 * c3 * r * r + c1; }
};

double solve_bracketed(const Cubic& f, double lo, double hi, const char* what) {
  double flo = f(lo), fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0) {
    // allow roundoff-level sign slack at the bracket endpoints
    const double scale = std::abs(f.c3) * hi * hi * hi + std::abs(f.c1) * hi + std::abs(f.c0);
    if (flo > 1e-12 * scale || fhi < -1e-12 * scale)
      fail(errc::no_bracketed_root, what);
    if (flo > 0.0) return lo;
    if (fhi < 0.0) return hi;
  }
  double a = lo, b = hi;
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    const double mid = 0.5 * (a + b);
    if (f(mid) < 0.0)
      a = mid;
    else
      b = mid;
  }
  double r = 0.5 * (a + b);
  for (int it = 0; it < 2; ++it) {
    const double d = f.deriv(r);
    if (d != 0.0) r = std::clamp(r - f(r) / d, lo, hi);
  }
  return r;
}

InverseRadius rounded_inverse_radius(double a, double theta_red) {
  // fundamental sector: arc about vertex B for theta < theta_tan, side BC after
  const Vec2 b = vertex_b();
  const Vec2 center = (1.0 - 2.0 * kSqrt3 * a) * b;
  const Vec2 tangent = b + (kSqrt3 * a) * Vec2{-0.5, kSqrt3 / 2.0};
  const double theta_tan = std::atan2(tangent.y, tangent.x);
  if (theta_red >= theta_tan) {
    const double r = triangle_side_inverse_radius(theta_red);
    return {r, -2.0 * kSqrt3 * std::sin(theta_red - kPi / 6.0)};
  }
  const Vec2 e{std::cos(theta_red), std::sin(theta_red)};
  const Vec2 ep{-e.y, e.x};
  const double be = dot(e, center);
  const double disc = be * be - (dot(center, center) - a * a);
  const double rho_val = be + std::sqrt(std::max(disc, 0.0));
  const Vec2 x = rho_val * e;
  const Vec2 d = x - center;
  // implicit |x - Q|^2 = a^2 along x = rho e
  const double rho_theta = -rho_val * dot(d, ep) / dot(d, e);
  const double r = 1.0 / rho_val;
  return {r, -rho_theta * r * r};
}

InverseRadius tabulated_inverse_radius(const PolarBoundary& b, double theta) {
  // periodic Catmull-Rom on the uniform grid
  const int n = static_cast<int>(b.r.size());
  const double h = 2.0 * kPi / n;
  double u = theta / h;
  double fi = std::floor(u);
  double s = u - fi;
  long i = static_cast<long>(fi);
  auto at = [&](long k) {
    long m = ((k % n) + n) % n;
    return b.r[static_cast<std::size_t>(m)];
  };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  const double m1 = 0.5 * (p2 - p0), m2 = 0.5 * (p3 - p1);
  const double s2 = s * s, s3 = s2 * s;
  const double val = (2 * s3 - 3 * s2 + 1) * p1 + (s3 - 2 * s2 + s) * m1 +
                     (-2 * s3 + 3 * s2) * p2 + (s3 - s2) * m2;
  const double der = ((6 * s2 - 6 * s) * p1 + (3 * s2 - 4 * s + 1) * m1 +
                      (-6 * s2 + 6 * s) * p2 + (3 * s2 - 2 * s) * m2) / h;
  return {val, der};
}

Cubic cubic_for(const DomainSpec& spec, double theta_red) {
  const double s3t = std::sin(3.0 * theta_red);
  if (spec.kind == DomainKind::omega_t)
    return {1.0 + 3.0 * spec.param, -9.0 * (1.0 + spec.param), -6.0 * kSqrt3 * s3t};
  return {1.0 - spec.param, -9.0, -6.0 * kSqrt3 * s3t};  // level_set_f0
}

}  // namespace

InverseRadius boundary_inverse_radius(const DomainSpec& spec, double theta) {
  switch (spec.kind) {
    case DomainKind::triangle_t0: {
      const double th = reduce_theta(theta);
      return {triangle_side_inverse_radius(th), -2.0 * kSqrt3 * std::sin(th - kPi / 6.0)};
    }
    case DomainKind::omega_t: {
      const double t = spec.param;
      const double th = reduce_theta(theta);
      const double ra = triangle_side_inverse_radius(th);
      if (t == 0.0)
        return {ra, -2.0 * kSqrt3 * std::sin(th - kPi / 6.0)};
      const Cubic f = cubic_for(spec, th);
      const double r = solve_bracketed(f, ra / (1.0 + t), ra, "OmegaT boundary cubic");
      const double denom = (1.0 + 3.0 * t) * r * r - 3.0 * (1.0 + t);
      return {r, 6.0 * kSqrt3 * std::cos(3.0 * th) / denom};
    }
    case DomainKind::level_set_f0: {
      const double th = reduce_theta(theta);
      const double ra = triangle_side_inverse_radius(th);
      const Cubic f = cubic_for(spec, th);
      const double r = solve_bracketed(f, ra, 2.0 * ra, "LevelSetF0 boundary cubic");
      const double denom = (1.0 - spec.param) * r * r - 3.0;
      return {r, 6.0 * kSqrt3 * std::cos(3.0 * th) / denom};
    }
    case DomainKind::rounded_triangle:
      return rounded_inverse_radius(spec.param, reduce_theta(theta));
    case DomainKind::tabulated_polar: {
      const double th = theta - 2.0 * kPi * std::floor(theta / (2.0 * kPi));
      return tabulated_inverse_radius(*spec.samples, th);
    }
  }
  fail(errc::invalid_argument, "unknown domain kind");
}

double rho(const DomainSpec& spec, double theta) {
  return 1.0 / boundary_inverse_radius(spec, theta).r;
}

double lipschitz_ratio(const DomainSpec& spec, double theta) {
  if (spec.kind != DomainKind::omega_t && spec.kind != DomainKind::level_set_f0)
    fail(errc::invalid_argument, "lipschitz_ratio: kind must be OmegaT or LevelSetF0");
  const auto ir = boundary_inverse_radius(spec, theta);
  return ir.r_theta / ir.r;
}

double level_residual(const DomainSpec& spec, double theta) {
  const double rr = rho(spec, theta);
  const Vec2 p{rr * std::cos(theta), rr * std::sin(theta)};
  switch (spec.kind) {
    case DomainKind::triangle_t0:
      return std::abs(f0_eval(p.x, p.y));
    case DomainKind::omega_t: {
      const double t = spec.param;
      return std::abs(f0t_eval(t, p.x, p.y) - t * t * (3.0 + t));
    }
    case DomainKind::level_set_f0:
      return std::abs(f0_eval(p.x, p.y) - spec.param);
    default:
      fail(errc::invalid_argument, "level_residual: kind has no level-set form");
  }
}

double boundary_cubic_residual(const DomainSpec& spec, double theta) {
  const double th = reduce_theta(theta);
  const double r = boundary_inverse_radius(spec, theta).r;
  switch (spec.kind) {
    case DomainKind::triangle_t0: {
      const double ra = triangle_side_inverse_radius(th);
      return std::abs(r - ra) / ra;
    }
    case DomainKind::omega_t:
    case DomainKind::level_set_f0: {
      const Cubic f = cubic_for(spec, th);
      const double scale =
          std::abs(f.c3) * r * r * r + std::abs(f.c1) * r + std::abs(f.c0) + 1.0;
      return std::abs(f(r)) / scale;
    }
    case DomainKind::rounded_triangle: {
      // circle / line equation residual of the active piece
      const double rr = 1.0 / r;
      const Vec2 p{rr * std::cos(th), rr * std::sin(th)};
      const Vec2 b = vertex_b();
      const Vec2 tangent = b + (kSqrt3 * spec.param) * Vec2{-0.5, kSqrt3 / 2.0};
      if (th >= std::atan2(tangent.y, tangent.x))
        return std::abs(kSqrt3 * p.x + p.y - kSqrt3 / 3.0);
      const Vec2 q = (1.0 - 2.0 * kSqrt3 * spec.param) * b;
      return std::abs(norm(p - q) - spec.param) / spec.param;
    }
    default:
      return 0.0;
  }
}

PolarBoundary sample_boundary(const DomainSpec& spec, int n) {
  if (n < 16) fail(errc::too_few_samples, "sample_boundary needs n >= 16");
  PolarBoundary out;
  out.theta.resize(n);
  out.r.resize(n);
  out.r_theta.emplace(n);
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * i / n;
    const auto ir = boundary_inverse_radius(spec, th);
    out.theta[i] = th;
    out.r[i] = ir.r;
    (*out.r_theta)[i] = ir.r_theta;
  }
  return out;
}

ConvexityCertificate convexity_certificate(const PolarBoundary& b) {
  const int n = static_cast<int>(b.r.size());
  if (n < 16) fail(errc::too_few_samples, "convexity_certificate needs >= 16 samples");
  const double h = 2.0 * kPi / n;
  double min_value = std::numeric_limits<double>::infinity();
  double max_r = 0.0;
  for (int i = 0; i < n; ++i) {
    const double rm = b.r[(i + n - 1) % n], r0 = b.r[i], rp = b.r[(i + 1) % n];
    min_value = std::min(min_value, (rm + rp - 2.0 * r0) / (h * h) + r0);
    max_r = std::max(max_r, r0);
  }
  return {min_value >= -1e-8 * max_r, min_value};
}

PolarBoundary mollify_boundary(const PolarBoundary& b, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) fail(errc::invalid_argument, "mollify: eps in (0, 1/2)");
  if (!convexity_certificate(b).ok)
    fail(errc::invalid_argument, "mollify: input boundary is not convex on the grid");
  const int n = static_cast<int>(b.r.size());
  const double h = 2.0 * kPi / n;
  double min_r = *std::min_element(b.r.begin(), b.r.end());
  double lip = 0.0;
  for (int i = 0; i < n; ++i)
    lip = std::max(lip, std::abs(b.r[(i + 1) % n] - b.r[i]) / h);
  // kernel half-width: small enough that |R*phi - R| stays well inside the
  // sandwich gap, at least one grid step wide
  double delta = std::min(kPi / 8.0, eps * min_r / (4.0 * lip + 1e-30));
  delta = std::max(delta, h);
  const int m = std::max(1, static_cast<int>(std::floor(delta / h)));
  std::vector<double> w(2 * m + 1);
  double sum = 0.0;
  for (int j = -m; j <= m; ++j) {
    const double x = static_cast<double>(j) * h / delta;
    w[j + m] = (std::abs(x) < 1.0) ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
    sum += w[j + m];
  }
  for (double& v : w) v /= sum;

  PolarBoundary out;
  out.theta = b.theta;
  out.r.resize(n);
  const double scale = 1.0 / (1.0 + eps);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = -m; j <= m; ++j) acc += w[j + m] * b.r[((i + j) % n + n) % n];
    out.r[i] = scale * acc;
  }
  for (int i = 0; i < n; ++i) {
    const double lo = b.r[i] / (1.0 + 1.5 * eps);
    const double hi = b.r[i] / (1.0 + 0.5 * eps);
    if (!(out.r[i] > lo && out.r[i] < hi))
      fail(errc::sandwich_violated,
           "mollify: R/(1+3e/2) < R_eps < R/(1+e/2) fails at grid index " + std::to_string(i));
  }
  return out;
}

double dr_distance(const DomainSpec& d1, const DomainSpec& d2, int n) {
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * i / n;
    best = std::max(best, std::abs(rho(d1, th) - rho(d2, th)));
  }
  return best;
}

double hausdorff_distance(const DomainSpec& d1, const DomainSpec& d2, int n) {
  std::vector<Vec2> p1(n), p2(n);
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * kPi * i / n;
    const double r1 = rho(d1, th), r2 = rho(d2, th);
    p1[i] = {r1 * std::cos(th), r1 * std::sin(th)};
    p2[i] = {r2 * std::cos(th), r2 * std::sin(th)};
  }
  auto one_sided = [&](const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double worst = 0.0;
    for (const Vec2& x : a) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const Vec2& y : b) nearest = std::min(nearest, norm(x - y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(p1, p2), one_sided(p2, p1));
}

}  // namespace ecplab::geometry
