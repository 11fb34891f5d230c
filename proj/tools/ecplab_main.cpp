// ecplab command-line front end: domain export, meshing, eigensolves, nodal
// analysis, level sets, the deformation experiments and the verification
// suite. Exit codes: 0 success, 1 solver/verification failure, 2 bad input.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ecplab/closedform.hpp"
#include "ecplab/deform.hpp"
#include "ecplab/fem.hpp"
#include "ecplab/geometry.hpp"
#include "ecplab/io.hpp"
#include "ecplab/mesh.hpp"
#include "ecplab/nodal.hpp"
#include "ecplab/verify.hpp"

namespace {

using ecplab::errc;
using ecplab::Error;
using nlohmann::json;
namespace geometry = ecplab::geometry;
namespace closedform = ecplab::closedform;
namespace mesh = ecplab::mesh;
namespace fem = ecplab::fem;
namespace nodal = ecplab::nodal;
namespace deform = ecplab::deform;
namespace io = ecplab::io;
using geometry::DomainSpec;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case errc::solver_stagnation:
    case errc::window_not_found:
    case errc::no_bracketed_root:
    case errc::sandwich_violated:
    case errc::degenerate_triangle:
    case errc::point_outside:
    case errc::no_group_tables:
      return 1;
    default:
      return 2;
  }
}

struct DomainArgs {
  std::string kind = "triangle";
  double t = 0.1;
  double corner = 0.1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--kind", kind, "triangle | omega | levelset | rounded")
        ->check(CLI::IsMember({"triangle", "omega", "levelset", "rounded"}));
    cmd->add_option("--t", t, "family parameter t");
    cmd->add_option("--corner-radius", corner, "corner radius for the rounded triangle");
  }
  DomainSpec spec() const {
    if (kind == "triangle") return DomainSpec::triangle();
    if (kind == "omega") return DomainSpec::omega(t);
    if (kind == "levelset") return DomainSpec::level_set(t);
    return DomainSpec::rounded(corner);
  }
  json config() const {
    return {{"kind", kind}, {"t", t}, {"corner_radius", corner}};
  }
};

std::string manifest_comment(const json& config) {
  return "manifest=" + io::make_manifest(config).at("hash").get<std::string>();
}

// ---------------------------------------------------------------------------

int cmd_domain(const DomainArgs& dom, int n, const std::string& out, const std::string& csv) {
  const DomainSpec spec = dom.spec();
  const geometry::PolarBoundary b = geometry::sample_boundary(spec, n);
  json cfg = dom.config();
  cfg["n"] = n;
  json j;
  j["kind"] = geometry::kind_name(spec.kind);
  j["params"] = {{"t", spec.param}};
  j["theta"] = b.theta;
  json rho = json::array();
  for (double r : b.r) rho.push_back(1.0 / r);
  j["rho"] = rho;
  j["manifest"] = io::make_manifest(cfg);
  io::write_json(out, j);
  if (!csv.empty()) {
    std::vector<std::string> header{"theta", "rho", "r", "r_theta"};
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < b.theta.size(); ++i)
      rows.push_back({b.theta[i], 1.0 / b.r[i], b.r[i], (*b.r_theta)[i]});
    io::write_csv(csv, header, rows, manifest_comment(cfg));
  }
  return 0;
}

int cmd_mesh(const DomainArgs& dom, double h, bool half, int refine, const std::string& out) {
  mesh::Mesh m = mesh::generate(dom.spec(), h, half);
  for (int i = 0; i < refine; ++i) m = mesh::refine(m);
  json cfg = dom.config();
  cfg["h"] = h;
  cfg["half"] = half;
  cfg["refine"] = refine;
  json j = mesh::to_json(m);
  j["manifest"] = io::make_manifest(cfg);
  io::write_json(out, j);
  const auto q = mesh::quality(m);
  std::cout << "mesh: " << q.n_vertices << " vertices, " << q.n_triangles
            << " triangles, min angle " << q.min_angle_deg << " deg\n";
  return 0;
}

mesh::Mesh load_or_build_mesh(const std::string& mesh_file, const DomainArgs& dom, double h,
                              bool half, int refine) {
  if (!mesh_file.empty()) return mesh::from_json(io::read_json(mesh_file));
  mesh::Mesh m = mesh::generate(dom.spec(), h, half);
  for (int i = 0; i < refine; ++i) m = mesh::refine(m);
  return m;
}

int cmd_eig(const mesh::Mesh& m, const std::string& bc_name, int k, double tol,
            const std::string& out, const json& cfg) {
  fem::BoundaryCondition bc = fem::BoundaryCondition::neumann;
  if (bc_name == "dirichlet") bc = fem::BoundaryCondition::dirichlet;
  else if (bc_name == "mixed_nd") bc = fem::BoundaryCondition::mixed_nd;
  fem::SolveOptions opts;
  opts.k = k;
  opts.tol = tol;
  const fem::EigenResult r = fem::solve(m, bc, opts);

  const std::string vec_file = out + ".vec";
  io::write_vectors(vec_file, r.eigenvectors);
  json j;
  j["bc"] = fem::bc_name(r.bc);
  j["sector"] = fem::sector_name(r.sector);
  j["h"] = r.h;
  j["eigenvalues"] = r.eigenvalues;
  j["residuals"] = r.residuals;
  j["n_dofs"] = r.n_dofs;
  j["vector_file"] = std::filesystem::path(vec_file).filename().string();
  j["manifest"] = io::make_manifest(cfg);
  io::write_json(out, j);
  std::cout << "eigenvalues:";
  for (double v : r.eigenvalues) std::cout << " " << v;
  std::cout << "\n";
  return 0;
}

std::vector<double> load_vector(const std::string& eig_file, int index) {
  const json j = io::read_json(eig_file);
  const auto dir = std::filesystem::path(eig_file).parent_path();
  const Eigen::MatrixXd vecs = io::read_vectors(dir / j.at("vector_file").get<std::string>());
  if (index < 0 || index >= vecs.cols())
    ecplab::fail(errc::invalid_argument, "eigenvector index out of range");
  return {vecs.col(index).data(), vecs.col(index).data() + vecs.rows()};
}

int cmd_nodal(const mesh::Mesh& m, const std::string& eig_file, int index, double a, double eps,
              const std::string& out) {
  const auto vals = load_vector(eig_file, index);
  const nodal::NodalReport rep = nodal::count_nodal_domains(m, vals, a, eps);
  json j;
  j["a"] = rep.a;
  j["eps"] = rep.eps;
  j["beta0"] = rep.beta0;
  j["n_positive"] = rep.n_positive;
  j["n_negative"] = rep.n_negative;
  json comps = json::array();
  for (const auto& c : rep.components)
    comps.push_back({{"sign", c.sign}, {"vertex_count", c.vertex_count}, {"area", c.area}});
  j["components"] = comps;
  j["manifest"] = io::make_manifest({{"eig", eig_file}, {"index", index}, {"a", a}, {"eps", eps}});
  io::write_json(out, j);
  std::cout << "beta0 = " << rep.beta0 << " (" << rep.n_positive << " positive, "
            << rep.n_negative << " negative)\n";
  return 0;
}

void write_polylines_csv(const std::string& path,
                         const std::vector<std::vector<geometry::Vec2>>& polys, const json& cfg) {
  std::vector<std::string> header{"polyline", "x", "y"};
  std::vector<std::vector<double>> rows;
  for (std::size_t p = 0; p < polys.size(); ++p)
    for (const auto& q : polys[p]) rows.push_back({static_cast<double>(p), q.x, q.y});
  io::write_csv(path, header, rows, manifest_comment(cfg));
}

std::vector<geometry::Vec2> boundary_polyline(const DomainSpec& spec, int n) {
  std::vector<geometry::Vec2> pts;
  for (int i = 0; i <= n; ++i) {
    const double th = 2.0 * geometry::kPi * i / n;
    const double r = geometry::rho(spec, th);
    pts.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return pts;
}

int cmd_levelset(const mesh::Mesh& m, const std::string& eig_file, int index,
                 std::vector<double> levels, const std::string& out_csv,
                 const std::string& out_svg) {
  const auto vals = load_vector(eig_file, index);
  std::vector<std::vector<geometry::Vec2>> all;
  for (double c : levels) {
    auto polys = nodal::extract_level_set(m, vals, c);
    all.insert(all.end(), polys.begin(), polys.end());
  }
  const json cfg = {{"eig", eig_file}, {"index", index}, {"levels", levels}};
  write_polylines_csv(out_csv, all, cfg);
  if (!out_svg.empty()) {
    std::vector<io::SvgCurve> curves;
    if (m.spec) curves.push_back({boundary_polyline(*m.spec, 512), "black", 0.006});
    for (auto& p : all) curves.push_back({std::move(p), "crimson", 0.004});
    io::write_svg(out_svg, curves, manifest_comment(cfg));
  }
  return 0;
}

int cmd_deform(const std::string& config_file, const std::string& mode, const std::string& out,
               const std::string& csv, bool summary) {
  deform::DeformConfig cfg;
  if (!config_file.empty()) cfg = deform::config_from_json(io::read_json(config_file));
  deform::DeformReport rep;
  if (mode == "continuity") rep = deform::run_continuity(cfg);
  else if (mode == "convergence") rep = deform::run_convergence(cfg);
  else if (mode == "ecp") rep = deform::run_ecp(cfg);
  else rep = deform::run_all(cfg);

  json j = deform::report_to_json(rep);
  j["manifest"] = io::make_manifest(deform::config_to_json(cfg));
  io::write_json(out, j);
  if (!csv.empty()) {
    const auto header = deform::report_csv_header();
    io::write_csv(csv, header, deform::report_to_csv_rows(rep),
                  manifest_comment(deform::config_to_json(cfg)));
  }
  if (summary) std::cout << deform::report_summary(rep);
  // the ECP run is a verification: report failure through the exit code
  if (mode == "ecp" || mode == "all") {
    for (const auto& r : rep.rows)
      if (!r.window || r.beta0_mid != 3) {
        std::cerr << "three-domain window missing at t=" << r.t << "\n";
        return 1;
      }
  }
  return 0;
}

std::vector<double> symmetric_second_eigenvector(const DomainSpec& spec, double h,
                                                 mesh::Mesh* full_out) {
  mesh::Mesh full = mesh::generate(spec, h, false);
  mesh::Mesh half = mesh::generate(spec, h, true);
  fem::SolveOptions o;
  o.k = 2;
  fem::HalfEigen np = fem::nu_plus(half, o);
  std::vector<double> phi = fem::extend_to_full(full, half, np.vec, fem::Sector::sym);
  auto [K, M] = fem::assemble(full);
  (void)K;
  const double nrm = std::sqrt(fem::mass_dot(M, phi, phi));
  for (double& x : phi) x /= nrm;
  // positive at the top vertex
  int c = 0;
  double best = 1e300;
  for (std::size_t i = 0; i < full.vertices.size(); ++i) {
    const double d = norm(full.vertices[i] - geometry::vertex_c());
    if (d < best) {
      best = d;
      c = static_cast<int>(i);
    }
  }
  if (phi[c] < 0.0)
    for (double& x : phi) x = -x;
  *full_out = std::move(full);
  return phi;
}

int cmd_figure(const std::string& name, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto path = [&](const std::string& f) { return out_dir + "/" + f; };
  const json cfg = {{"figure", name}};

  if (name == "fig3_domains") {
    std::vector<io::SvgCurve> curves;
    std::vector<std::vector<geometry::Vec2>> polys;
    const std::vector<std::pair<std::string, DomainSpec>> domains{
        {"black", DomainSpec::triangle()},
        {"green", DomainSpec::omega(0.1)},
        {"blue", DomainSpec::omega(0.2)},
        {"crimson", DomainSpec::omega(0.3)}};
    for (const auto& [color, spec] : domains) {
      auto b = boundary_polyline(spec, 720);
      polys.push_back(b);
      curves.push_back({std::move(b), color, 0.004});
    }
    write_polylines_csv(path("fig3_domains.csv"), polys, cfg);
    io::write_svg(path("fig3_domains.svg"), curves, manifest_comment(cfg));
    return 0;
  }
  if (name == "fig5_levels") {
    mesh::Mesh full;
    const auto phi = symmetric_second_eigenvector(DomainSpec::triangle(), 0.015, &full);
    double lo = 1e300, hi = -1e300;
    for (double v : phi) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    std::vector<std::vector<geometry::Vec2>> polys;
    std::vector<io::SvgCurve> curves{{boundary_polyline(DomainSpec::triangle(), 512), "black", 0.006}};
    for (int i = 1; i <= 10; ++i) {
      const double c = lo + (hi - lo) * i / 11.0;
      for (auto& p : nodal::extract_level_set(full, phi, c)) {
        curves.push_back({p, c < 0 ? "steelblue" : "crimson", 0.003});
        polys.push_back(std::move(p));
      }
    }
    write_polylines_csv(path("fig5_levels.csv"), polys, cfg);
    io::write_svg(path("fig5_levels.svg"), curves, manifest_comment(cfg));
    return 0;
  }
  if (name == "fig1_rounded" || name == "fig_nodal_t") {
    const DomainSpec spec =
        name == "fig1_rounded" ? DomainSpec::rounded(0.1) : DomainSpec::omega(0.1);
    mesh::Mesh full;
    const auto phi = symmetric_second_eigenvector(spec, 0.015, &full);
    double ma = 0.0;
    for (double v : phi) ma = std::max(ma, std::abs(v));
    const auto scan = nodal::find_three_domain_window(full, phi, 0.0, ma, 200);
    if (!scan.window) ecplab::fail(errc::window_not_found, "no three-domain window for " + name);
    const double mid = 0.5 * ((*scan.window)[0] + (*scan.window)[1]);
    const double below = 0.5 * (*scan.window)[0];
    std::vector<std::vector<geometry::Vec2>> polys;
    std::vector<io::SvgCurve> curves{{boundary_polyline(spec, 512), "black", 0.006}};
    for (const auto& [a, color] : {std::pair<double, const char*>{below, "steelblue"},
                                   std::pair<double, const char*>{mid, "crimson"}}) {
      for (auto& p : nodal::extract_level_set(full, phi, -a)) {
        curves.push_back({p, color, 0.004});
        polys.push_back(std::move(p));
      }
    }
    write_polylines_csv(path(name + ".csv"), polys, cfg);
    io::write_svg(path(name + ".svg"), curves, manifest_comment(cfg));
    return 0;
  }
  ecplab::fail(errc::unknown_figure, name);
}

int cmd_sample(const std::string& field, int grid, const std::string& out) {
  // bounding frame per field family
  const bool te = field == "xi1d" || field == "logdet_xi";
  const bool t1 = field == "f1";
  std::vector<std::string> header{"u", "v", "value"};
  std::vector<std::vector<double>> rows;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      double u, v;
      bool inside;
      if (te) {
        u = static_cast<double>(i) / grid;
        v = geometry::kSqrt3 / 2.0 * j / grid;
        inside = closedform::xi1_dirichlet_product(u, v) > 1e-12;
      } else if (t1) {
        u = -geometry::kSqrt3 / 6.0 + (geometry::kSqrt3 / 2.0) * i / grid;
        v = -0.5 + static_cast<double>(j) / grid;
        inside = geometry::f1_eval(u, v) > 1e-12;
      } else {
        u = -0.5 + static_cast<double>(i) / grid;
        v = -geometry::kSqrt3 / 6.0 + (geometry::kSqrt3 / 2.0) * j / grid;
        inside = geometry::f0_eval(u, v) > 1e-12;
      }
      if (!inside) continue;
      rows.push_back({u, v, closedform::eval_field(field, u, v)});
    }
  }
  io::write_csv(out, header, rows, manifest_comment({{"field", field}, {"grid", grid}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"level sets of Neumann eigenfunctions on deformed triangle domains"};
  app.require_subcommand(1);
  // long-form flags only
  app.set_help_flag("--help", "print help");
  const auto subcommand = [&app](const std::string& name, const std::string& desc) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->set_help_flag("--help", "print help");
    return cmd;
  };

  // domain
  auto* domain = subcommand("domain", "export a domain boundary as JSON/CSV");
  DomainArgs dom_domain;
  dom_domain.add_to(domain);
  int domain_n = 1024;
  std::string domain_out = "domain.json", domain_csv;
  domain->add_option("--n", domain_n, "number of boundary samples");
  domain->add_option("--out", domain_out, "output JSON path");
  domain->add_option("--csv", domain_csv, "optional CSV path");

  // mesh
  auto* meshc = subcommand("mesh", "generate a mesh and write it as JSON");
  DomainArgs dom_mesh;
  dom_mesh.add_to(meshc);
  double mesh_h = 0.05;
  bool mesh_half = false;
  int mesh_refine = 0;
  std::string mesh_out = "mesh.json";
  meshc->add_option("--h", mesh_h, "nominal edge length");
  meshc->add_flag("--half", mesh_half, "mesh the half domain {u>0}");
  meshc->add_option("--refine", mesh_refine, "number of uniform refinements");
  meshc->add_option("--out", mesh_out, "output JSON path");

  // eig
  auto* eig = subcommand("eig", "solve the lowest eigenpairs");
  DomainArgs dom_eig;
  dom_eig.add_to(eig);
  std::string eig_mesh_file, eig_bc = "neumann", eig_out = "eig.json";
  double eig_h = 0.05, eig_tol = 1e-8;
  int eig_k = 6, eig_refine = 0;
  bool eig_half = false;
  eig->add_option("--mesh", eig_mesh_file, "mesh JSON (overrides --kind/--h)");
  eig->add_option("--h", eig_h, "nominal edge length");
  eig->add_flag("--half", eig_half, "use the half domain");
  eig->add_option("--refine", eig_refine, "number of uniform refinements");
  eig->add_option("--bc", eig_bc, "neumann | dirichlet | mixed_nd")
      ->check(CLI::IsMember({"neumann", "dirichlet", "mixed_nd"}));
  eig->add_option("--k", eig_k, "number of eigenpairs (<= 12)");
  eig->add_option("--tol", eig_tol, "residual tolerance");
  eig->add_option("--out", eig_out, "output JSON path");

  // nodal
  auto* nod = subcommand("nodal", "count nodal domains of phi + a");
  std::string nodal_mesh, nodal_eig, nodal_out = "nodal.json";
  int nodal_index = 1;
  double nodal_a = 0.0, nodal_eps = 1e-10;
  nod->add_option("--mesh", nodal_mesh, "mesh JSON")->required();
  nod->add_option("--vectors", nodal_eig, "eig JSON with the vector file")->required();
  nod->add_option("--index", nodal_index, "eigenvector index (0-based)");
  nod->add_option("--a", nodal_a, "offset a");
  nod->add_option("--eps", nodal_eps, "zero tolerance (relative)");
  nod->add_option("--out", nodal_out, "output JSON path");

  // levelset
  auto* lvl = subcommand("levelset", "extract level-set polylines");
  std::string lvl_mesh, lvl_eig, lvl_csv = "levels.csv", lvl_svg;
  int lvl_index = 1;
  std::vector<double> lvl_levels{0.0};
  lvl->add_option("--mesh", lvl_mesh, "mesh JSON")->required();
  lvl->add_option("--vectors", lvl_eig, "eig JSON")->required();
  lvl->add_option("--index", lvl_index, "eigenvector index (0-based)");
  lvl->add_option("--level", lvl_levels, "level values (repeatable)");
  lvl->add_option("--out", lvl_csv, "CSV output path");
  lvl->add_option("--svg", lvl_svg, "optional SVG output path");

  // deform
  auto* def = subcommand("deform", "run the deformation experiments");
  std::string def_config, def_mode = "all", def_out = "deform.json", def_csv;
  bool def_summary = false;
  def->add_option("--config", def_config, "config JSON path");
  def->add_option("--mode", def_mode, "continuity | convergence | ecp | all")
      ->check(CLI::IsMember({"continuity", "convergence", "ecp", "all"}));
  def->add_option("--out", def_out, "report JSON path");
  def->add_option("--csv", def_csv, "optional CSV path");
  def->add_flag("--summary", def_summary, "print a human-readable summary");

  // figure
  auto* fig = subcommand("figure", "emit figure data (CSV + SVG)");
  std::string fig_name, fig_dir = "figures";
  fig->add_option("--name", fig_name, "fig1_rounded | fig5_levels | fig3_domains | fig_nodal_t")
      ->required();
  fig->add_option("--out-dir", fig_dir, "output directory");

  // verify
  auto* ver = subcommand("verify", "run the verification suite");
  std::string ver_profile = "quick";
  ver->add_option("--profile", ver_profile, "quick | full")
      ->check(CLI::IsMember({"quick", "full"}));

  // closedform sample
  auto* cf = subcommand("closedform", "closed-form field utilities");
  auto* smp = cf->add_subcommand("sample", "sample a field on a grid, emit CSV");
  smp->set_help_flag("--help", "print help");
  std::string smp_field = "phi0", smp_out = "field.csv";
  int smp_grid = 64;
  smp->add_option("--field", smp_field, "f0 | f1 | phi0 | xi1d | logdet_f0 | logdet_xi")
      ->check(CLI::IsMember(ecplab::closedform::field_names()));
  smp->add_option("--grid", smp_grid, "grid resolution");
  smp->add_option("--out", smp_out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (domain->parsed()) return cmd_domain(dom_domain, domain_n, domain_out, domain_csv);
    if (meshc->parsed()) return cmd_mesh(dom_mesh, mesh_h, mesh_half, mesh_refine, mesh_out);
    if (eig->parsed()) {
      const auto m = load_or_build_mesh(eig_mesh_file, dom_eig, eig_h, eig_half, eig_refine);
      json cfg = dom_eig.config();
      cfg["bc"] = eig_bc;
      cfg["k"] = eig_k;
      cfg["tol"] = eig_tol;
      if (!eig_mesh_file.empty()) cfg["mesh"] = eig_mesh_file;
      return cmd_eig(m, eig_bc, eig_k, eig_tol, eig_out, cfg);
    }
    if (nod->parsed()) {
      const auto m = mesh::from_json(io::read_json(nodal_mesh));
      return cmd_nodal(m, nodal_eig, nodal_index, nodal_a, nodal_eps, nodal_out);
    }
    if (lvl->parsed()) {
      const auto m = mesh::from_json(io::read_json(lvl_mesh));
      return cmd_levelset(m, lvl_eig, lvl_index, lvl_levels, lvl_csv, lvl_svg);
    }
    if (def->parsed()) return cmd_deform(def_config, def_mode, def_out, def_csv, def_summary);
    if (fig->parsed()) return cmd_figure(fig_name, fig_dir);
    if (ver->parsed()) {
      const auto results = ecplab::verify::run_all(
          ver_profile == "full" ? ecplab::verify::Profile::full : ecplab::verify::Profile::quick);
      for (const auto& r : results) std::cout << ecplab::verify::format_line(r) << "\n";
      return ecplab::verify::exit_code(results);
    }
    if (cf->parsed()) {
      if (smp->parsed()) return cmd_sample(smp_field, smp_grid, smp_out);
      std::cerr << "closedform: missing subcommand (try: closedform sample)\n";
      return 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
