#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "ecplab/closedform.hpp"
#include "ecplab/fem.hpp"
#include "ecplab/mesh.hpp"

using namespace ecplab;
using namespace ecplab::mesh;
using geometry::DomainSpec;
using geometry::kPi;
using geometry::kSqrt3;
using geometry::Vec2;

namespace {

double polar_area(const DomainSpec& spec, int n) {
  // composite Simpson over [0, 2pi) of rho^2/2
  double total = 0.0;
  const double h = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) {
    auto f = [&](double th) {
      const double r = geometry::rho(spec, th);
      return 0.5 * r * r;
    };
    const double a = i * h;
    total += h / 6.0 * (f(a) + 4.0 * f(a + h / 2.0) + f(a + h));
  }
  return total;
}

}  // namespace

TEST_CASE("Euler characteristic of a disk mesh") {
  const Mesh m = generate(DomainSpec::triangle(), 0.25);
  const int v = static_cast<int>(m.vertices.size());
  const int e = static_cast<int>(edges(m).size());
  const int f = static_cast<int>(m.triangles.size());
  CHECK(v - e + f == 1);
  CHECK(m.boundary.size() > 0);
  // boundary edges close into loops: every boundary vertex has out-degree 1
  std::set<int> sources;
  for (const auto& be : m.boundary) CHECK(sources.insert(be.a).second);
  for (const auto& be : m.boundary) CHECK(sources.count(be.b) == 1);
}

TEST_CASE("boundary vertices satisfy the level-set equation") {
  const double t = 0.2;
  const Mesh m = generate(DomainSpec::omega(t), 0.05);
  const double level = t * t * (3.0 + t);
  for (const auto& be : m.boundary)
    for (int v : {be.a, be.b}) {
      const Vec2 p = m.vertices[v];
      CHECK(std::abs(geometry::f0t_eval(t, p.x, p.y) - level) < 1e-10);
    }
}

TEST_CASE("half mesh has its Dirichlet chain exactly on u=0") {
  const Mesh m = generate(DomainSpec::triangle(), 0.1, /*half=*/true);
  int dirichlet_edges = 0;
  for (const auto& be : m.boundary) {
    if (be.marker != BoundaryMarker::gamma_dirichlet) continue;
    ++dirichlet_edges;
    CHECK(m.vertices[be.a].x == 0.0);
    CHECK(m.vertices[be.b].x == 0.0);
  }
  CHECK(dirichlet_edges > 0);
  for (const auto& v : m.vertices) CHECK(v.x >= 0.0);
  CHECK_FALSE(m.has_group_tables());
}

TEST_CASE("refine quadruples the triangles and stays on the boundary") {
  const double t = 0.2;
  Mesh m = generate(DomainSpec::omega(t), 0.06);
  const auto q0 = quality(m);
  const Mesh r = refine(m);
  CHECK(r.triangles.size() == 4 * m.triangles.size());
  CHECK(r.h == doctest::Approx(m.h / 2.0));
  const double level = t * t * (3.0 + t);
  for (const auto& be : r.boundary)
    for (int v : {be.a, be.b})
      CHECK(std::abs(geometry::f0t_eval(t, r.vertices[v].x, r.vertices[v].y) - level) < 1e-10);
  const auto q1 = quality(r);
  // the first split still probes the rounded-vertex curvature ever more
  // finely; from then on the minimum angle settles to within a degree
  CHECK(q1.min_angle_deg > q0.min_angle_deg - 4.0);
  const Mesh r2 = refine(r);
  const auto q2 = quality(r2);
  CHECK(std::abs(q2.min_angle_deg - q1.min_angle_deg) < 1.0);
  CHECK(q2.min_angle_deg > 20.0);
  CHECK(q2.max_h == doctest::Approx(q0.max_h / 4.0).epsilon(0.15));
}

TEST_CASE("quality of reference meshes") {
  // hand-built equilateral patch reports 60 degrees
  Mesh eq;
  eq.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.5, kSqrt3 / 2.0}, {1.5, kSqrt3 / 2.0}};
  eq.triangles = {{0, 1, 2}, {1, 3, 2}};
  CHECK(quality(eq).min_angle_deg == doctest::Approx(60.0));
  // the structured fan of T0 is made of 30-60-90 wedge cells
  const Mesh m = generate(DomainSpec::triangle(), 0.1);
  CHECK(quality(m).min_angle_deg == doctest::Approx(30.0));
  // curved family stays well above the degeneracy threshold
  CHECK(quality(generate(DomainSpec::omega(0.2), 0.05)).min_angle_deg > 20.0);
}

TEST_CASE("interpolation") {
  const Mesh m = generate(DomainSpec::triangle(), 0.08);
  std::vector<double> linear(m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    linear[i] = m.vertices[i].x + 2.0 * m.vertices[i].y;

  // nodal values are reproduced exactly
  const auto at_nodes = interpolate(m, linear, std::span<const Vec2>(m.vertices));
  for (std::size_t i = 0; i < at_nodes.size(); ++i)
    CHECK(at_nodes[i] == doctest::Approx(linear[i]).epsilon(1e-13));

  // P1 reproduces linear fields everywhere
  const std::vector<Vec2> pts{{0.01, 0.02}, {-0.2, 0.1}, {0.15, -0.2}, {0.0, 0.3}};
  const auto vals = interpolate(m, linear, pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(vals[i] == doctest::Approx(pts[i].x + 2.0 * pts[i].y).epsilon(1e-12));

  CHECK_THROWS_AS(interpolate(m, linear, std::vector<Vec2>{{5.0, 5.0}}), Error);
}

TEST_CASE("interpolation error of phi0 decays at second order") {
  std::vector<Vec2> cloud;
  for (int i = 0; i < 40; ++i) {
    const double th = 2.0 * kPi * i / 40.0;
    cloud.push_back({0.17 * std::cos(th), 0.17 * std::sin(th)});
  }
  double prev = 0.0;
  std::vector<double> sups;
  Mesh m = generate(DomainSpec::triangle(), 0.08);
  for (int level = 0; level < 3; ++level) {
    std::vector<double> vals(m.vertices.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
      vals[i] = closedform::phi0_neumann(m.vertices[i].x, m.vertices[i].y);
    const auto approx = interpolate(m, vals, cloud);
    double sup = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i)
      sup = std::max(sup, std::abs(approx[i] - closedform::phi0_neumann(cloud[i].x, cloud[i].y)));
    sups.push_back(sup);
    if (level + 1 < 3) m = refine(m);
    (void)prev;
  }
  CHECK(sups[0] / sups[1] > 2.5);  // O(h^2) halving gives a factor of about 4
  CHECK(sups[1] / sups[2] > 2.5);
  CHECK(sups[0] / sups[2] > 12.0);
}

TEST_CASE("mirror symmetry about u=0 is bit-exact") {
  for (const DomainSpec& spec :
       {DomainSpec::triangle(), DomainSpec::omega(0.3), DomainSpec::rounded(0.1)}) {
    Mesh m = generate(spec, 0.07);
    m = refine(m);  // survives refinement
    const auto& perm = m.perm(geometry::Element::DC);
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      CHECK(m.vertices[perm[i]].x == -m.vertices[i].x);
      CHECK(m.vertices[perm[i]].y == m.vertices[i].y);
    }
  }
}

TEST_CASE("group permutations compose like the group") {
  const Mesh m = generate(DomainSpec::omega(0.1), 0.1);
  for (int f = 0; f < geometry::kGroupOrder; ++f)
    for (int g = 0; g < geometry::kGroupOrder; ++g) {
      const auto fg = geometry::group::compose(static_cast<geometry::Element>(f),
                                               static_cast<geometry::Element>(g));
      const auto& pf = m.perm(static_cast<geometry::Element>(f));
      const auto& pg = m.perm(static_cast<geometry::Element>(g));
      const auto& pfg = m.perm(fg);
      for (std::size_t i = 0; i < m.vertices.size(); ++i) CHECK(pfg[i] == pf[pg[i]]);
    }
}

TEST_CASE("group permutations are automorphisms of the stiffness matrix") {
  const Mesh m = generate(DomainSpec::omega(0.2), 0.12);
  auto [K, M] = fem::assemble(m);
  (void)M;
  for (geometry::Element g : {geometry::Element::R, geometry::Element::DC}) {
    const auto& perm = m.perm(g);
    for (int col = 0; col < K.outerSize(); ++col)
      for (fem::SparseSymMatrix::InnerIterator it(K, col); it; ++it) {
        const double mapped = K.coeff(perm[it.row()], perm[it.col()]);
        CHECK(mapped == doctest::Approx(it.value()).epsilon(1e-12).scale(1e-12));
      }
  }
}

TEST_CASE("mesh area converges to the polar integral at second order") {
  const DomainSpec spec = DomainSpec::omega(0.2);
  const double exact = polar_area(spec, 4096);
  Mesh m = generate(spec, 0.1);
  std::vector<double> errs;
  for (int level = 0; level < 3; ++level) {
    errs.push_back(std::abs(area(m) - exact));
    if (level + 1 < 3) m = refine(m);
  }
  const double order = std::log2(errs[0] / errs[1]);
  const double order2 = std::log2(errs[1] / errs[2]);
  CHECK(order > 1.6);
  CHECK(order2 > 1.6);
}

TEST_CASE("mesh JSON round trip and validation") {
  const Mesh m = generate(DomainSpec::omega(0.15), 0.1, /*half=*/true);
  const auto j = to_json(m);
  const Mesh back = from_json(j);
  CHECK(back.vertices.size() == m.vertices.size());
  CHECK(back.triangles.size() == m.triangles.size());
  CHECK(back.boundary.size() == m.boundary.size());
  CHECK(back.half == m.half);
  REQUIRE(back.spec.has_value());
  CHECK(back.spec->kind == geometry::DomainKind::omega_t);

  // flipped triangle orientation is rejected
  auto bad = j;
  std::swap(bad["triangles"][0][0], bad["triangles"][0][1]);
  CHECK_THROWS_AS(from_json(bad), Error);

  // missing boundary edge is rejected
  auto bad2 = j;
  bad2["boundary"].erase(0);
  CHECK_THROWS_AS(from_json(bad2), Error);

  // perturbed curved-boundary vertex is rejected
  auto bad3 = j;
  int bv = -1;
  for (const auto& be : bad3["boundary"])
    if (be[2].get<std::string>() == "neumann") {
      bv = be[0].get<int>();
      break;
    }
  REQUIRE(bv >= 0);
  bad3["vertices"][bv][0] = bad3["vertices"][bv][0].get<double>() + 1e-3;
  CHECK_THROWS_AS(from_json(bad3), Error);
}

TEST_CASE("generate rejects oversized h") {
  CHECK_THROWS_AS(generate(DomainSpec::triangle(), 10.0), Error);
}
