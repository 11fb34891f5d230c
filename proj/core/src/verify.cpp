#include "ecplab/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "ecplab/closedform.hpp"
#include "ecplab/deform.hpp"
#include "ecplab/fem.hpp"
#include "ecplab/geometry.hpp"
#include "ecplab/mesh.hpp"
#include "ecplab/nodal.hpp"

namespace ecplab::verify {

using geometry::DomainSpec;
using geometry::kPi;
using geometry::kSqrt3;
using mesh::Mesh;

namespace {

struct Params {
  double h_oracle;      // check 1
  double h_degeneracy;  // check 2
  double h_window;      // check 3
  double h_rounded;     // check 4
  double h_courant;     // check 7
  double h_deform;      // check 8
  std::vector<double> t_degeneracy;
  std::vector<double> t_window;
};

Params params_for(Profile p) {
  if (p == Profile::quick)
    return {0.048, 0.072, 0.036, 0.03, 0.018, 0.074, {0.1, 0.3}, {0.1}};
  return {0.024, 0.048, 0.024, 0.02, 0.012, 0.037,
          {0.05, 0.1, 0.2, 0.3}, {0.05, 0.1, 0.2}};
}

// The verification runs meet the same residual tolerance on the iterative
// path for mid-size problems; the library default (dense up to 2500 dofs)
// stays as documented.
fem::SolveOptions solver(int k) {
  fem::SolveOptions o;
  o.k = k;
  o.dense_threshold = 700;
  return o;
}

std::vector<Mesh> mesh_levels(const DomainSpec& spec, double h, int levels, bool half) {
  std::vector<Mesh> out;
  out.push_back(mesh::generate(spec, h, half));
  for (int l = 1; l < levels; ++l) out.push_back(mesh::refine(out.back()));
  return out;
}

double extrap3(const std::vector<double>& v) {
  return fem::richardson(v[0], v[1], v[2]).value;
}

struct Check {
  CheckResult result;
  std::ostringstream details;
  bool ok = true;

  Check(int id, std::string name) {
    result.id = id;
    result.name = std::move(name);
  }
  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      details << " [FAIL " << msg << "]";
    }
  }
  void note(const std::string& msg) { details << " " << msg; }
  CheckResult finish(double seconds) {
    result.pass = ok;
    result.details = details.str();
    result.seconds = seconds;
    return result;
  }
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// --------------------------------------------------------------------------

CheckResult check_spectral_oracle(const Params& p) {
  const auto start = std::chrono::steady_clock::now();
  Check c(1, "closed-form spectral oracle");
  const double nu_exact = closedform::phi0_eigenvalue();
  const double delta_exact = closedform::xi1_eigenvalue();

  auto seconds_since = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const auto meshes = mesh_levels(DomainSpec::triangle(), p.h_oracle, 3, false);
  c.require(meshes.back().triangles.size() <= 100000, "mesh exceeds 100k triangles");

  fem::SolveOptions o = solver(2);
  std::vector<double> nu, del;
  for (const auto& m : meshes) {
    nu.push_back(fem::solve(m, fem::BoundaryCondition::neumann, o).eigenvalues[1]);
    del.push_back(fem::solve(m, fem::BoundaryCondition::dirichlet, o).eigenvalues[0]);
  }
  const double nu_ex = extrap3(nu), del_ex = extrap3(del);
  const double nu_rel = std::abs(nu_ex - nu_exact) / nu_exact;
  const double del_rel = std::abs(del_ex - delta_exact) / delta_exact;
  c.note("nu2(T0)=" + num(nu_ex) + " rel=" + num(nu_rel));
  c.note("delta1(Te)=" + num(del_ex) + " rel=" + num(del_rel));
  c.require(nu_rel < 5e-4, "nu2 extrapolation off by more than 0.05%");
  c.require(del_rel < 5e-4, "delta1 extrapolation off by more than 0.05%");
  c.require(seconds_since() <= 240.0, "runtime budget exceeded");
  return c.finish(seconds_since());
}

CheckResult check_degeneracy(const Params& p) {
  const auto start = std::chrono::steady_clock::now();
  Check c(2, "degeneracy and symmetry split");
  std::vector<std::pair<std::string, DomainSpec>> domains{{"T0", DomainSpec::triangle()}};
  for (double t : p.t_degeneracy) domains.emplace_back("Omega(" + num(t) + ")", DomainSpec::omega(t));

  for (const auto& [label, spec] : domains) {
    fem::SolveOptions o = solver(4);
    std::vector<double> nu2, nu3, nup, num_;
    const auto fulls = mesh_levels(spec, p.h_degeneracy, 3, false);
    const auto halves = mesh_levels(spec, p.h_degeneracy, 3, true);
    const fem::SolveOptions oplus = solver(2), ominus = solver(1);
    for (int l = 0; l < 3; ++l) {
      const auto eig = fem::solve(fulls[l], fem::BoundaryCondition::neumann, o);
      nu2.push_back(eig.eigenvalues[1]);
      nu3.push_back(eig.eigenvalues[2]);
      nup.push_back(fem::nu_plus(halves[l], oplus).value);
      num_.push_back(fem::nu_minus(halves[l], ominus).value);
    }
    const double g23 = std::abs(extrap3(nu3) - extrap3(nu2)) / extrap3(nu2);
    const double gpm = std::abs(extrap3(nup) - extrap3(num_)) / extrap3(nup);
    c.note(label + ": |nu2-nu3|/nu2=" + num(g23) + " |nu+-nu-|/nu+=" + num(gpm));
    c.require(g23 < 1e-3, label + " nu2/nu3 split");
    c.require(gpm < 1e-3, label + " nu+/nu- split");
  }
  return c.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

std::vector<double> symmetric_eigenvector(const Mesh& full, const Mesh& half) {
  fem::HalfEigen np = fem::nu_plus(half, solver(2));
  std::vector<double> phi = fem::extend_to_full(full, half, np.vec, fem::Sector::sym);
  auto [K, M] = fem::assemble(full);
  (void)K;
  const double nrm = std::sqrt(fem::mass_dot(M, phi, phi));
  for (double& x : phi) x /= nrm;
  // sign: positive at the vertex C
  int best = 0;
  double bd = 1e300;
  for (std::size_t i = 0; i < full.vertices.size(); ++i) {
    const double d = norm(full.vertices[i] - geometry::vertex_c());
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  if (phi[best] < 0.0)
    for (double& x : phi) x = -x;
  return phi;
}

CheckResult check_windows(const Params& p) {
  const auto start = std::chrono::steady_clock::now();
  Check c(3, "three-nodal-domain windows along Omega_t");
  const std::array<double, 3> eps_grid{1e-12, 1e-10, 1e-8};
  for (double t : p.t_window) {
    const DomainSpec spec = DomainSpec::omega(t);
    const auto fulls = mesh_levels(spec, p.h_window, 2, false);
    const auto halves = mesh_levels(spec, p.h_window, 2, true);
    const auto phi_c = symmetric_eigenvector(fulls[0], halves[0]);
    const auto phi_f = symmetric_eigenvector(fulls[1], halves[1]);
    double ma = 0.0;
    for (double v : phi_f) ma = std::max(ma, std::abs(v));
    const auto scan_f = nodal::find_three_domain_window(fulls[1], phi_f, 0.0, ma, 200);
    const auto scan_c = nodal::find_three_domain_window(fulls[0], phi_c, 0.0, ma, 200);
    c.require(scan_f.window.has_value(), "t=" + num(t) + " no window on the fine mesh");
    c.require(scan_c.window.has_value(), "t=" + num(t) + " no window on the coarse mesh");
    if (!scan_f.window || !scan_c.window) continue;
    const double mid = 0.5 * ((*scan_f.window)[0] + (*scan_f.window)[1]);
    c.note("t=" + num(t) + " window=[" + num((*scan_f.window)[0]) + "," +
           num((*scan_f.window)[1]) + "]");
    for (double eps : eps_grid) {
      const auto rep = nodal::count_nodal_domains(fulls[1], phi_f, mid, eps);
      c.require(rep.beta0 == 3 && rep.n_positive == 1 && rep.n_negative == 2,
                "t=" + num(t) + " signature at eps=" + num(eps));
      if (eps == eps_grid[1])
        c.require(nodal::mirror_exchanges_negatives(fulls[1], rep),
                  "t=" + num(t) + " negative parts not exchanged by D_C");
    }
    const auto rep_c = nodal::count_nodal_domains(fulls[0], phi_c, mid, eps_grid[1]);
    c.require(rep_c.beta0 == 3 && rep_c.n_positive == 1 && rep_c.n_negative == 2,
              "t=" + num(t) + " count not stable under one refinement");
  }
  return c.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

CheckResult check_rounded(const Params& p) {
  const auto start = std::chrono::steady_clock::now();
  Check c(4, "rounded-corner triangle window");
  const auto rep = deform::run_rounded_triangle(0.1, p.h_rounded, 200);
  c.note("nu2=" + num(rep.nu2));
  c.require(rep.window.has_value(), "no three-domain window");
  if (rep.window) {
    c.note("window=[" + num((*rep.window)[0]) + "," + num((*rep.window)[1]) + "]");
    c.require(rep.beta0_mid == 3, "beta0 at window midpoint");
    c.require(rep.beta0_at_small_a == 2, "beta0 below the window");
  }
  return c.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

CheckResult check_geometry(const Params&) {
  const auto start = std::chrono::steady_clock::now();
  Check c(5, "geometry certificates");
  const int n = 1024;
  const double lip_bound = kSqrt3 + 1e-9;

  std::vector<DomainSpec> family;
  for (double t : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) family.push_back(DomainSpec::omega(t));
  for (double t : {0.05, 0.1, 0.2, 0.3, 0.4, 0.45}) family.push_back(DomainSpec::level_set(t));

  double lip_max = 0.0, cubic_max = 0.0, convex_min = 1e300;
  double rho_min = 1e300, rho_max = 0.0;  // ball sandwich over the family
  for (const auto& spec : family) {
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * kPi * i / n;
      lip_max = std::max(lip_max, geometry::lipschitz_ratio(spec, th));
      cubic_max = std::max(cubic_max, geometry::boundary_cubic_residual(spec, th));
      const double rr = geometry::rho(spec, th);
      rho_min = std::min(rho_min, rr);
      rho_max = std::max(rho_max, rr);
    }
    const auto cert = geometry::convexity_certificate(geometry::sample_boundary(spec, n));
    convex_min = std::min(convex_min, cert.min_value);
    c.require(cert.ok, spec.name() + " convexity certificate");
  }
  c.note("max lipschitz ratio=" + num(lip_max));
  c.note("max cubic residual=" + num(cubic_max));
  c.note("min (R''+R)=" + num(convex_min));
  c.note("ball sandwich B(" + num(rho_min) + ") .. B(" + num(rho_max) + ")");
  c.require(rho_min > 0.0, "family must contain the origin");
  c.require(lip_max <= lip_bound, "lipschitz ratio above sqrt(3)");
  c.require(cubic_max < 1e-12, "boundary cubic residual above 1e-12");
  c.require(convex_min >= -1e-8, "convexity minimum below -1e-8");

  // nesting: rho(t1) <= rho(t2) pointwise for t1 < t2, T0 innermost
  const std::vector<double> ts{0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  bool nested = true;
  for (std::size_t k = 1; k < ts.size(); ++k) {
    const DomainSpec inner = ts[k - 1] == 0.0 ? DomainSpec::triangle() : DomainSpec::omega(ts[k - 1]);
    const DomainSpec outer = DomainSpec::omega(ts[k]);
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * kPi * i / n;
      if (geometry::rho(inner, th) > geometry::rho(outer, th) + 1e-12) nested = false;
    }
  }
  c.require(nested, "Omega_t family is not nested on the grid");
  return c.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

CheckResult check_closedform(const Params&) {
  const auto start = std::chrono::steady_clock::now();
  Check c(6, "closed-form identity suite");
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // random interior points of T_e, kept a barycentric margin away from the
  // zero set where the exact-Hessian recomputation cancels
  auto te_point = [&] {
    for (;;) {
      double a = unit(rng), b = unit(rng);
      if (a + b > 1.0) {
        a = 1.0 - a;
        b = 1.0 - b;
      }
      if (std::min({a, b, 1.0 - a - b}) < 0.05) continue;
      return geometry::Vec2{a + 0.5 * b, kSqrt3 / 2.0 * b};
    }
  };
  auto t0_point = [&] {
    const auto p = te_point();
    return geometry::Vec2{p.x - 0.5, p.y - kSqrt3 / 6.0};
  };

  double worst_sp = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = te_point();
    worst_sp = std::max(worst_sp, std::abs(closedform::xi1_dirichlet_sum(p.x, p.y) -
                                           closedform::xi1_dirichlet_product(p.x, p.y)));
  }
  c.note("max |sum-product|=" + num(worst_sp));
  c.require(worst_sp < 1e-12, "xi1 sum vs product forms");

  double worst_f0 = 0.0, worst_xi = 0.0;
  bool positive = true;
  for (int i = 0; i < 1000; ++i) {
    const auto q = t0_point();
    const double a = closedform::log_hessian_det_f0(q.x, q.y);
    const double b = closedform::log_hessian_det_f0_exact(q.x, q.y);
    worst_f0 = std::max(worst_f0, std::abs(a - b) / std::abs(a));
    positive = positive && a > 0.0;
    const auto p = te_point();
    const double a2 = closedform::log_hessian_det_xi(p.x, p.y);
    const double b2 = closedform::log_hessian_det_xi_exact(p.x, p.y);
    worst_xi = std::max(worst_xi, std::abs(a2 - b2) / std::abs(a2));
    positive = positive && a2 > 0.0;
  }
  c.note("logdet rel errs f0=" + num(worst_f0) + " xi=" + num(worst_xi));
  c.require(worst_f0 < 1e-8, "log-Hessian determinant of f0");
  c.require(worst_xi < 1e-8, "log-Hessian determinant of xi1");
  c.require(positive, "log-Hessian determinants must be positive");

  c.require(closedform::torsion_laplacian_check() == -36.0, "Delta f0 != -36");

  double worst_res = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto q = t0_point();
    worst_res = std::max(worst_res, closedform::phi0_eigen_residual(q.x, q.y));
  }
  c.note("max eigen residual=" + num(worst_res));
  c.require(worst_res < 1e-10, "phi0 eigen-equation residual");

  const auto pts = closedform::find_phi0_critical_points({-0.625, -kSqrt3 / 3.0},
                                                         {0.625, kSqrt3 / 2.0});
  c.require(pts.size() == 4, "expected exactly 4 critical points, got " +
                                 std::to_string(pts.size()));
  if (pts.size() == 4) {
    // sorted by (v, u): A, M_C and B share the side level v = -sqrt3/6, then C
    const std::array<geometry::Vec2, 4> expected{geometry::vertex_a(),
                                                 geometry::Vec2{0.0, -kSqrt3 / 6.0},
                                                 geometry::vertex_b(), geometry::vertex_c()};
    for (int i = 0; i < 4; ++i)
      c.require(norm(pts[i] - expected[i]) < 1e-8,
                "critical point " + std::to_string(i) + " misplaced");
  }
  return c.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

CheckResult check_courant(const Params& p) {
  const auto start = std::chrono::steady_clock::now();
  Check c(7, "Courant and Gladwell-Zhu bounds");
  for (const auto& [label, spec] :
       std::vector<std::pair<std::string, DomainSpec>>{{"T0", DomainSpec::triangle()},
                                                       {"Omega(0.1)", DomainSpec::omega(0.1)}}) {
    const Mesh m = mesh::generate(spec, p.h_courant, false);
    const auto eig = fem::solve(m, fem::BoundaryCondition::neumann, solver(10));
    const auto rows = nodal::courant_check(m, eig);
    for (const auto& r : rows)
      c.require(r.pass, label + " eigenvector " + std::to_string(r.index) + " beta0=" +
                            std::to_string(r.beta0) + " > " + std::to_string(r.least_index));
  }
  std::vector<std::pair<std::string, DomainSpec>> gz_domains{
      {"T0", DomainSpec::triangle()},
      {"Omega(0.1)", DomainSpec::omega(0.1)},
      {"Omega(0.2)", DomainSpec::omega(0.2)},
      {"Rounded(0.1)", DomainSpec::rounded(0.1)}};
  for (const auto& [label, spec] : gz_domains) {
    const Mesh full = mesh::generate(spec, p.h_courant, false);
    const Mesh half = mesh::generate(spec, p.h_courant, true);
    const auto phi = symmetric_eigenvector(full, half);
    double ma = 0.0;
    for (double v : phi) ma = std::max(ma, std::abs(v));
    std::vector<double> grid(50);
    for (int i = 0; i < 50; ++i) grid[i] = 1.2 * ma * (i + 1) / 50.0;
    c.require(nodal::gladwell_zhu_check(full, phi, 2, grid),
              label + " Gladwell-Zhu bound violated");
  }
  return c.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

CheckResult check_continuity(const Params& p, deform::DeformReport* out) {
  const auto start = std::chrono::steady_clock::now();
  Check c(8, "continuity and convergence along t -> 0");
  deform::DeformConfig cfg;
  cfg.h = p.h_deform;
  deform::DeformReport rep = deform::run_all(cfg);
  if (out) *out = rep;

  // rows ascend in t: differences must grow with t (i.e. decrease along t->0)
  bool nu_monotone = true, sup_monotone = true, signs = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    if (i > 0) {
      nu_monotone = nu_monotone && rep.rows[i].nu_diff_to_t0 > rep.rows[i - 1].nu_diff_to_t0;
      sup_monotone = sup_monotone && rep.rows[i].sup_k > rep.rows[i - 1].sup_k;
    }
    signs = signs && rep.rows[i].sign_ok;
  }
  c.require(nu_monotone, "|nu+(t)-nu+(T0)| not monotone along the t grid");
  c.require(sup_monotone, "sup_K|phi_t-phi0| not monotone along the t grid");
  c.require(signs, "<phi_t, phi0> > 0 fails at some t");

  const auto& smallest = rep.rows.front();
  const double disc_nu =
      rep.disc_err_nu + std::abs(smallest.nu_plus_levels.back() - smallest.nu_plus);
  c.note("t=" + num(smallest.t) + ": |nu+(t)-nu+(T0)|=" + num(smallest.nu_diff_to_t0) +
         " vs 5x disc err " + num(5.0 * disc_nu));
  c.require(smallest.nu_diff_to_t0 <= 5.0 * disc_nu,
            "eigenvalue difference at the smallest t above 5x the discretization error");
  c.note("sup_K(t=" + num(smallest.t) + ")=" + num(smallest.sup_k) + " vs 5x disc err " +
         num(5.0 * rep.sup_k_t0));
  c.require(smallest.sup_k <= 5.0 * rep.sup_k_t0,
            "sup_K at the smallest t above 5x the discretization error");
  c.note("fitted exponent=" + num(rep.fitted_exponent) + " (reported, not asserted)");
  return c.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

CheckResult check_polya(const Params& p, const deform::DeformReport* rep) {
  const auto start = std::chrono::steady_clock::now();
  Check c(9, "Polya inequality nu2 < delta1");
  // T0 directly
  {
    const Mesh full = mesh::generate(DomainSpec::triangle(), p.h_degeneracy, false);
    const Mesh half = mesh::generate(DomainSpec::triangle(), p.h_degeneracy, true);
    const double nup = fem::nu_plus(half, solver(2)).value;
    const double numn = fem::nu_minus(half, solver(1)).value;
    const double d1 = fem::solve(full, fem::BoundaryCondition::dirichlet, solver(1)).eigenvalues[0];
    c.note("T0: nu2=" + num(std::min(nup, numn)) + " delta1=" + num(d1));
    c.require(std::min(nup, numn) < d1, "T0");
  }
  if (rep) {
    for (const auto& r : rep->rows) {
      c.require(r.polya_ok, "Omega(" + num(r.t) + ") nu2=" + num(std::min(r.nu_plus, r.nu_minus)) +
                                " delta1=" + num(r.delta1));
    }
  }
  return c.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

}  // namespace

std::vector<CheckResult> run_all(Profile profile) {
  const Params p = params_for(profile);
  std::vector<CheckResult> out;
  out.push_back(check_spectral_oracle(p));
  out.push_back(check_degeneracy(p));
  out.push_back(check_windows(p));
  out.push_back(check_rounded(p));
  out.push_back(check_geometry(p));
  out.push_back(check_closedform(p));
  out.push_back(check_courant(p));
  deform::DeformReport rep;
  out.push_back(check_continuity(p, &rep));
  out.push_back(check_polya(p, &rep));
  return out;
}

int exit_code(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}

std::string format_line(const CheckResult& r) {
  std::ostringstream os;
  os << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name << " ("
     << std::fixed;
  os.precision(1);
  os << r.seconds << "s)" << r.details;
  return os.str();
}

}  // namespace ecplab::verify
