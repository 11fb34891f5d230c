#include "ecplab/deform.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ecplab/closedform.hpp"
#include "ecplab/io.hpp"

namespace ecplab::deform {

using geometry::DomainSpec;
using geometry::kPi;
using geometry::kSqrt3;
using geometry::Vec2;
using mesh::Mesh;

void DeformConfig::validate() const {
  if (t_grid.empty()) fail(errc::invalid_argument, "deform: empty t grid");
  for (double t : t_grid)
    if (!(t > 0.0 && t <= 0.5))
      fail(errc::invalid_argument, "deform: t grid entries must lie in (0, 1/2]");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] < t_grid[i - 1]))
      fail(errc::invalid_argument, "deform: t grid must be strictly descending");
  if (levels < 2 || levels > 6) fail(errc::invalid_argument, "deform: levels in 2..6");
  if (!(h > 0.0)) fail(errc::invalid_argument, "deform: h must be positive");
  if (!(s0 > 1.0 && s0 < 2.0)) fail(errc::invalid_argument, "deform: s0 in (1,2)");
  // K must sit strictly inside T0 (inradius 1/(2*sqrt3))
  if (!(compact_radius > 0.0 && compact_radius <= 0.9 / (2.0 * kSqrt3)))
    fail(errc::invalid_argument, "deform: compact radius must be <= 0.9 * inradius of T0");
  if (offset_steps < 10) fail(errc::invalid_argument, "deform: offset_steps >= 10");
}

int thread_budget(int requested, int jobs) {
  int cap = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("ECPLAB_THREADS")) {
    const int e = std::atoi(env);
    if (e > 0) cap = std::min(cap, e);
  }
  return std::max(1, std::min(cap, jobs));
}

namespace {

struct What {
  bool continuity = false;
  bool convergence = false;
  bool ecp = false;
};

// point cloud filling the compact K (rings plus center)
std::vector<Vec2> compact_cloud(double radius) {
  std::vector<Vec2> pts{{0.0, 0.0}};
  for (int ring = 1; ring <= 5; ++ring) {
    const double r = radius * ring / 5.0;
    for (int j = 0; j < 24; ++j) {
      const double th = 2.0 * kPi * j / 24.0;
      pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  return pts;
}

std::vector<double> phi0_at_vertices(const Mesh& m) {
  const double nrm = std::sqrt(closedform::phi0_l2_norm_sq_t0());
  std::vector<double> out(m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    out[i] = closedform::phi0_neumann(m.vertices[i].x, m.vertices[i].y) / nrm;
  return out;
}

int nearest_vertex(const Mesh& m, Vec2 p) {
  int best = 0;
  double bd = 1e300;
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const double d = norm(m.vertices[i] - p);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

struct Pipeline {
  std::vector<Mesh> half;  // levels coarse..fine
  std::vector<Mesh> full;
  std::vector<double> nu_plus_levels;
  std::vector<double> nu_minus_levels;
  fem::Extrapolation nu_plus_ex, nu_minus_ex;
  std::vector<double> phi_full;  // symmetric eigenvector on the finest full mesh
  std::vector<double> phi_full_coarse;
  fem::SparseSymMatrix m_mass;   // finest full mass matrix

  // builds meshes, solves nu+/nu- on all levels and extends the finest
  // symmetric eigenvector (sign fixed positive at vertex C)
  Pipeline(const DomainSpec& spec, const DeformConfig& cfg, const What& what) {
    half.push_back(mesh::generate(spec, cfg.h, /*half=*/true));
    for (int l = 1; l < cfg.levels; ++l) half.push_back(mesh::refine(half.back()));

    fem::SolveOptions plus_opts, minus_opts;
    plus_opts.k = 2;
    minus_opts.k = 1;
    std::vector<double> vec_fine, vec_coarse;
    for (int l = 0; l < cfg.levels; ++l) {
      fem::HalfEigen np = fem::nu_plus(half[l], plus_opts);
      nu_plus_levels.push_back(np.value);
      if (l == cfg.levels - 1) vec_fine = std::move(np.vec);
      if (l == cfg.levels - 2) vec_coarse = std::move(np.vec);
      if (what.continuity) nu_minus_levels.push_back(fem::nu_minus(half[l], minus_opts).value);
    }
    nu_plus_ex = extrap(nu_plus_levels);
    if (what.continuity) nu_minus_ex = extrap(nu_minus_levels);

    if (what.convergence || what.ecp) {
      full.push_back(mesh::generate(spec, cfg.h, /*half=*/false));
      for (int l = 1; l < cfg.levels; ++l) full.push_back(mesh::refine(full.back()));
      phi_full = normalized_extension(full.back(), half.back(), vec_fine, &m_mass);
      fem::SparseSymMatrix mc;
      phi_full_coarse =
          normalized_extension(full[cfg.levels - 2], half[cfg.levels - 2], vec_coarse, &mc);
    }
  }

  static fem::Extrapolation extrap(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 3) {
      fem::Extrapolation e;
      e.value = v.back();
      return e;
    }
    return fem::richardson(v[n - 3], v[n - 2], v[n - 1]);
  }

  static std::vector<double> normalized_extension(const Mesh& full_mesh, const Mesh& half_mesh,
                                                  const std::vector<double>& half_vec,
                                                  fem::SparseSymMatrix* mass_out) {
    std::vector<double> v =
        fem::extend_to_full(full_mesh, half_mesh, half_vec, fem::Sector::sym);
    auto [K, M] = fem::assemble(full_mesh);
    (void)K;
    const double nrm = std::sqrt(fem::mass_dot(M, v, v));
    for (double& x : v) x /= nrm;
    const int c = nearest_vertex(full_mesh, geometry::vertex_c());
    if (v[c] < 0.0)
      for (double& x : v) x = -x;
    if (mass_out) *mass_out = std::move(M);
    return v;
  }
};

double overlap_ratio(const std::optional<std::array<double, 2>>& a,
                     const std::optional<std::array<double, 2>>& b) {
  if (!a || !b) return 0.0;
  const double lo = std::max((*a)[0], (*b)[0]);
  const double hi = std::min((*a)[1], (*b)[1]);
  const double widest = std::max((*a)[1] - (*a)[0], (*b)[1] - (*b)[0]);
  if (widest <= 0.0) return 0.0;
  return std::max(0.0, hi - lo) / widest;
}

DeformRow run_row(double t, const DeformConfig& cfg, const What& what, double nu_plus_t0) {
  const DomainSpec spec = DomainSpec::omega(t);
  DeformRow row;
  row.t = t;
  row.d_r = geometry::dr_distance(DomainSpec::triangle(), spec, cfg.dr_grid);

  Pipeline pipe(spec, cfg, what);
  row.nu_plus = pipe.nu_plus_ex.value;
  row.nu_plus_levels = pipe.nu_plus_levels;
  row.nu_diff_to_t0 = std::abs(row.nu_plus - nu_plus_t0);
  if (what.continuity) {
    row.nu_minus = pipe.nu_minus_ex.value;
    row.nu_minus_levels = pipe.nu_minus_levels;
    row.nu_gap = std::abs(row.nu_plus - row.nu_minus);
  }
  if (!what.convergence && !what.ecp) return row;

  const Mesh& full = pipe.full.back();
  const std::vector<double>& phi = pipe.phi_full;

  // sign convention: the sign is anchored at vertex C; the mass inner product
  // with the closed form must then come out positive
  const std::vector<double> phi0v = phi0_at_vertices(full);
  row.sign_dot = fem::mass_dot(pipe.m_mass, phi, phi0v);
  row.sign_ok = row.sign_dot > 0.0;

  if (what.convergence) {
    const auto cloud = compact_cloud(cfg.compact_radius);
    const auto vals = mesh::interpolate(full, phi, cloud);
    const double nrm = std::sqrt(closedform::phi0_l2_norm_sq_t0());
    double sup = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i)
      sup = std::max(sup, std::abs(vals[i] - closedform::phi0_neumann(cloud[i].x, cloud[i].y) / nrm));
    row.sup_k = sup;
  }

  if (!what.ecp) return row;

  double max_abs = 0.0;
  for (double v : phi) max_abs = std::max(max_abs, std::abs(v));
  auto scan = nodal::find_three_domain_window(full, phi, 0.0, max_abs, cfg.offset_steps,
                                              cfg.count_eps[1]);
  row.window = scan.window;
  const Mesh& full_coarse = pipe.full[cfg.levels - 2];
  auto scan_coarse = nodal::find_three_domain_window(full_coarse, pipe.phi_full_coarse, 0.0,
                                                     max_abs, cfg.offset_steps, cfg.count_eps[1]);
  row.window_coarse = scan_coarse.window;
  row.window_overlap = overlap_ratio(row.window, row.window_coarse);
  row.count_stable_refine = row.window_overlap >= 0.5;

  if (!row.window) return row;
  const double a_mid = 0.5 * ((*row.window)[0] + (*row.window)[1]);

  const nodal::NodalReport rep = nodal::count_nodal_domains(full, phi, a_mid, cfg.count_eps[1]);
  row.beta0_mid = rep.beta0;
  row.n_positive_mid = rep.n_positive;
  row.n_negative_mid = rep.n_negative;
  row.negatives_mirrored = nodal::mirror_exchanges_negatives(full, rep);

  row.count_stable_eps = true;
  for (double eps : cfg.count_eps) {
    const nodal::NodalReport r2 = nodal::count_nodal_domains(full, phi, a_mid, eps);
    if (r2.beta0 != 3 || r2.n_positive != 1 || r2.n_negative != 2) row.count_stable_eps = false;
  }

  // Claim 1: phi_t + a > 0 on the bisector chord [C C(t)]
  {
    const double v_top = geometry::rho(spec, kPi / 2.0);
    const double v_bot = -geometry::rho(spec, -kPi / 2.0);
    const double band = full.h;
    bool ok = true;
    for (std::size_t i = 0; i < full.vertices.size(); ++i) {
      const Vec2 p = full.vertices[i];
      if (std::abs(p.x) <= band && p.y >= v_bot - 1e-12 && p.y <= v_top + 1e-12)
        ok = ok && (phi[i] + a_mid > 0.0);
    }
    row.chord_positive = ok;
  }

  // probe points slightly inside the vertices A and B
  {
    const int ia = nearest_vertex(full, 0.95 * geometry::vertex_a());
    const int ib = nearest_vertex(full, 0.95 * geometry::vertex_b());
    const int ca = rep.component_of_vertex[ia];
    const int cb = rep.component_of_vertex[ib];
    row.probes_negative = ca >= 0 && cb >= 0 && ca != cb && rep.components[ca].sign < 0 &&
                          rep.components[cb].sign < 0;
  }

  // Claim 2: localization of the sign sets of phi_t by the closed form
  {
    const double eps = cfg.eps_loc_frac * max_abs;
    bool ok = true;
    for (std::size_t i = 0; i < full.vertices.size(); ++i) {
      if (phi0v[i] + a_mid <= -eps && !(phi[i] + a_mid < 0.0)) ok = false;
      if (phi0v[i] + a_mid >= eps && !(phi[i] + a_mid > 0.0)) ok = false;
    }
    row.localization_ok = ok;
  }

  // Gladwell-Zhu for n = 2 over 50 positive offsets
  {
    std::vector<double> grid(50);
    for (int i = 0; i < 50; ++i) grid[i] = 1.2 * max_abs * (i + 1) / 50.0;
    row.gladwell_zhu_ok = nodal::gladwell_zhu_check(full, phi, 2, grid);
  }

  // Polya: nu2 = min(nu+, nu-) < delta1
  {
    fem::SolveOptions o;
    o.k = 1;
    const fem::EigenResult d = fem::solve(full, fem::BoundaryCondition::dirichlet, o);
    row.delta1 = d.eigenvalues[0];
    const double nu2 = what.continuity ? std::min(row.nu_plus, row.nu_minus) : row.nu_plus;
    row.polya_ok = nu2 < row.delta1;
  }
  return row;
}

DeformReport run(const DeformConfig& cfg, const What& what) {
  cfg.validate();
  DeformReport rep;
  rep.cfg = cfg;

  // T0 baseline row
  {
    Pipeline pipe(DomainSpec::triangle(), cfg, what);
    rep.nu_plus_t0 = pipe.nu_plus_ex.value;
    rep.nu_plus_t0_levels = pipe.nu_plus_levels;
    rep.disc_err_nu = std::abs(pipe.nu_plus_levels.back() - rep.nu_plus_t0);
    if (what.continuity) rep.nu_minus_t0 = pipe.nu_minus_ex.value;
    if (what.convergence || what.ecp) {
      const Mesh& full = pipe.full.back();
      const auto cloud = compact_cloud(cfg.compact_radius);
      const auto vals = mesh::interpolate(full, pipe.phi_full, cloud);
      const double nrm = std::sqrt(closedform::phi0_l2_norm_sq_t0());
      double sup = 0.0;
      for (std::size_t i = 0; i < cloud.size(); ++i)
        sup = std::max(sup,
                       std::abs(vals[i] - closedform::phi0_neumann(cloud[i].x, cloud[i].y) / nrm));
      rep.sup_k_t0 = sup;
      if (what.ecp) {
        double max_abs = 0.0;
        for (double v : pipe.phi_full) max_abs = std::max(max_abs, std::abs(v));
        rep.window_t0 = nodal::find_three_domain_window(full, pipe.phi_full, 0.0, max_abs,
                                                        cfg.offset_steps, cfg.count_eps[1])
                            .window;
      }
    }
  }

  // independent t rows on a small worker pool
  const int n = static_cast<int>(cfg.t_grid.size());
  rep.rows.resize(n);
  const int width = thread_budget(cfg.threads, n);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        rep.rows[i] = run_row(cfg.t_grid[i], cfg, what, rep.nu_plus_t0);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (width <= 1) {
    worker();
  } else {
    for (int w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const DeformRow& a, const DeformRow& b) { return a.t < b.t; });

  // the fixed-offset variant: the offset chosen from the t=0 picture is
  // reported against each per-t window (it can leave the window for larger t)
  if (rep.window_t0) {
    const double a0 = 0.5 * ((*rep.window_t0)[0] + (*rep.window_t0)[1]);
    for (auto& r : rep.rows)
      r.t0_offset_in_window = r.window && a0 >= (*r.window)[0] && a0 <= (*r.window)[1];
  }

  // least-squares slope of log|nu+(t) - nu+(T0)| against log d_r
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& r : rep.rows) {
      if (r.nu_diff_to_t0 <= 0.0 || r.d_r <= 0.0) continue;
      const double x = std::log(r.d_r), y = std::log(r.nu_diff_to_t0);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++m;
    }
    rep.fitted_exponent = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  }
  return rep;
}

}  // namespace

DeformReport run_continuity(const DeformConfig& cfg) { return run(cfg, {true, false, false}); }
DeformReport run_convergence(const DeformConfig& cfg) { return run(cfg, {false, true, false}); }
DeformReport run_ecp(const DeformConfig& cfg) { return run(cfg, {true, false, true}); }
DeformReport run_all(const DeformConfig& cfg) { return run(cfg, {true, true, true}); }

RoundedReport run_rounded_triangle(double corner_radius, double h, int offsets) {
  const DomainSpec spec = DomainSpec::rounded(corner_radius);
  RoundedReport rep;
  rep.corner_radius = corner_radius;
  rep.h = h;

  Mesh half = mesh::generate(spec, h, /*half=*/true);
  half = mesh::refine(half);
  Mesh full = mesh::refine(mesh::generate(spec, h, /*half=*/false));

  fem::HalfEigen np = fem::nu_plus(half);
  rep.nu2 = np.value;
  std::vector<double> phi = fem::extend_to_full(full, half, np.vec, fem::Sector::sym);
  auto [K, M] = fem::assemble(full);
  (void)K;
  const double nrm = std::sqrt(fem::mass_dot(M, phi, phi));
  for (double& x : phi) x /= nrm;
  const int c = nearest_vertex(full, geometry::vertex_c());
  if (phi[c] < 0.0)
    for (double& x : phi) x = -x;

  double max_abs = 0.0;
  for (double v : phi) max_abs = std::max(max_abs, std::abs(v));
  auto scan = nodal::find_three_domain_window(full, phi, 0.0, max_abs, offsets);
  rep.window = scan.window;
  if (rep.window) {
    const double a_mid = 0.5 * ((*rep.window)[0] + (*rep.window)[1]);
    rep.beta0_mid = nodal::count_nodal_domains(full, phi, a_mid).beta0;
    rep.beta0_at_small_a = nodal::count_nodal_domains(full, phi, 0.25 * (*rep.window)[0]).beta0;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

nlohmann::json config_to_json(const DeformConfig& cfg) {
  nlohmann::json j;
  j["t_grid"] = cfg.t_grid;
  j["h"] = cfg.h;
  j["levels"] = cfg.levels;
  j["s0"] = cfg.s0;
  j["q0"] = cfg.q0();
  j["p0"] = cfg.p0();
  j["compact_radius"] = cfg.compact_radius;
  j["eps_loc_frac"] = cfg.eps_loc_frac;
  j["offset_steps"] = cfg.offset_steps;
  j["count_eps"] = cfg.count_eps;
  j["dr_grid"] = cfg.dr_grid;
  j["threads"] = cfg.threads;
  return j;
}

DeformConfig config_from_json(const nlohmann::json& j) {
  using io::FieldSpec;
  using io::FieldType;
  static const FieldSpec fields[] = {
      {"t_grid", FieldType::array, false},   {"h", FieldType::number, false},
      {"levels", FieldType::integer, false}, {"s0", FieldType::number, false},
      {"compact_radius", FieldType::number, false},
      {"eps_loc_frac", FieldType::number, false},
      {"offset_steps", FieldType::integer, false},
      {"count_eps", FieldType::array, false},
      {"dr_grid", FieldType::integer, false},
      {"threads", FieldType::integer, false},
  };
  io::validate_object(j, fields, "deform config");
  DeformConfig cfg;
  if (j.contains("t_grid")) cfg.t_grid = j["t_grid"].get<std::vector<double>>();
  cfg.h = j.value("h", cfg.h);
  cfg.levels = j.value("levels", cfg.levels);
  cfg.s0 = j.value("s0", cfg.s0);
  cfg.compact_radius = j.value("compact_radius", cfg.compact_radius);
  cfg.eps_loc_frac = j.value("eps_loc_frac", cfg.eps_loc_frac);
  cfg.offset_steps = j.value("offset_steps", cfg.offset_steps);
  if (j.contains("count_eps")) {
    const auto v = j["count_eps"].get<std::vector<double>>();
    if (v.size() != 3) fail(errc::io_error, "deform config: count_eps must have 3 entries");
    std::copy(v.begin(), v.end(), cfg.count_eps.begin());
  }
  cfg.dr_grid = j.value("dr_grid", cfg.dr_grid);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.validate();
  return cfg;
}

namespace {
nlohmann::json window_json(const std::optional<std::array<double, 2>>& w) {
  if (!w) return nullptr;
  return {(*w)[0], (*w)[1]};
}
}  // namespace

nlohmann::json report_to_json(const DeformReport& rep) {
  nlohmann::json j;
  j["config"] = config_to_json(rep.cfg);
  j["t0"] = {{"nu_plus", rep.nu_plus_t0},
             {"nu_minus", rep.nu_minus_t0},
             {"nu_plus_levels", rep.nu_plus_t0_levels},
             {"disc_err_nu", rep.disc_err_nu},
             {"sup_k", rep.sup_k_t0},
             {"window", window_json(rep.window_t0)}};
  j["fitted_exponent"] = rep.fitted_exponent;
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    nlohmann::json o;
    o["t"] = r.t;
    o["d_r"] = r.d_r;
    o["nu_plus"] = r.nu_plus;
    o["nu_minus"] = r.nu_minus;
    o["nu_plus_levels"] = r.nu_plus_levels;
    o["nu_minus_levels"] = r.nu_minus_levels;
    o["nu_gap"] = r.nu_gap;
    o["nu_diff_to_t0"] = r.nu_diff_to_t0;
    o["sup_k"] = r.sup_k;
    o["sign_dot"] = r.sign_dot;
    o["sign_ok"] = r.sign_ok;
    o["window"] = window_json(r.window);
    o["window_coarse"] = window_json(r.window_coarse);
    o["window_overlap"] = r.window_overlap;
    o["beta0_mid"] = r.beta0_mid;
    o["n_positive_mid"] = r.n_positive_mid;
    o["n_negative_mid"] = r.n_negative_mid;
    o["negatives_mirrored"] = r.negatives_mirrored;
    o["chord_positive"] = r.chord_positive;
    o["probes_negative"] = r.probes_negative;
    o["localization_ok"] = r.localization_ok;
    o["count_stable_eps"] = r.count_stable_eps;
    o["count_stable_refine"] = r.count_stable_refine;
    o["t0_offset_in_window"] = r.t0_offset_in_window;
    o["gladwell_zhu_ok"] = r.gladwell_zhu_ok;
    o["delta1"] = r.delta1;
    o["polya_ok"] = r.polya_ok;
    rows.push_back(std::move(o));
  }
  return j;
}

std::vector<std::string> report_csv_header() {
  return {"t",     "d_r",      "nu_plus", "nu_minus",  "nu_gap",  "nu_diff_to_t0",
          "sup_k", "window_lo", "window_hi", "beta0_mid", "overlap"};
}

std::vector<std::vector<double>> report_to_csv_rows(const DeformReport& rep) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : rep.rows) {
    const double lo = r.window ? (*r.window)[0] : std::numeric_limits<double>::quiet_NaN();
    const double hi = r.window ? (*r.window)[1] : std::numeric_limits<double>::quiet_NaN();
    rows.push_back({r.t, r.d_r, r.nu_plus, r.nu_minus, r.nu_gap, r.nu_diff_to_t0, r.sup_k, lo,
                    hi, static_cast<double>(r.beta0_mid), r.window_overlap});
  }
  return rows;
}

std::string report_summary(const DeformReport& rep) {
  std::ostringstream os;
  os << "deform report (q0=" << rep.cfg.q0() << ", p0=" << rep.cfg.p0() << ")\n";
  os << "  nu+(T0) = " << rep.nu_plus_t0 << "  disc err est = " << rep.disc_err_nu
     << "  sup_K(t=0) = " << rep.sup_k_t0 << "\n";
  for (const auto& r : rep.rows) {
    os << "  t=" << r.t << "  d_r=" << r.d_r << "  nu+=" << r.nu_plus
       << "  |nu+-nu-|=" << r.nu_gap << "  |nu+(t)-nu+(T0)|=" << r.nu_diff_to_t0
       << "  sup_K=" << r.sup_k;
    if (r.window)
      os << "  window=[" << (*r.window)[0] << "," << (*r.window)[1] << "]"
         << "  beta0=" << r.beta0_mid << (r.beta0_mid == 3 ? " PASS" : " FAIL");
    os << "\n";
  }
  os << "  fitted exponent of |nu+(t)-nu+(T0)| vs d_r: " << rep.fitted_exponent << "\n";
  return os.str();
}

}  // namespace ecplab::deform
