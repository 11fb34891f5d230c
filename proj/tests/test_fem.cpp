#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ecplab/closedform.hpp"
#include "ecplab/fem.hpp"

using namespace ecplab;
using namespace ecplab::fem;
using geometry::DomainSpec;
using geometry::kPi;
using geometry::kSqrt3;
using geometry::Vec2;
using mesh::BoundaryMarker;
using mesh::Mesh;

namespace {

// structured right-triangle mesh of the unit square (test-local oracle mesh)
Mesh unit_square(int n) {
  Mesh m;
  m.h = 1.0 / n;
  auto id = [&](int i, int j) { return i * (n + 1) + j; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      m.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  for (int i = 0; i < n; ++i) {
    m.boundary.push_back({id(i, 0), id(i + 1, 0), BoundaryMarker::gamma_neumann});
    m.boundary.push_back({id(n, i), id(n, i + 1), BoundaryMarker::gamma_neumann});
    m.boundary.push_back({id(n - i, n), id(n - i - 1, n), BoundaryMarker::gamma_neumann});
    m.boundary.push_back({id(0, n - i), id(0, n - i - 1), BoundaryMarker::gamma_neumann});
  }
  return m;
}

std::vector<double> column(const EigenResult& r, int j) {
  return {r.eigenvectors.col(j).data(), r.eigenvectors.col(j).data() + r.eigenvectors.rows()};
}

}  // namespace

TEST_CASE("reference element matrices") {
  Mesh m;
  m.h = 1.0;
  m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  m.triangles = {{0, 1, 2}};
  auto [K, M] = assemble(m);
  // textbook P1 matrices for the unit right triangle
  const double k_expect[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  const double m_scale = 0.5 / 12.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(K.coeff(i, j) == doctest::Approx(k_expect[i][j]));
      CHECK(M.coeff(i, j) == doctest::Approx(m_scale * (i == j ? 2.0 : 1.0)));
    }
}

TEST_CASE("assembly invariants: constants and the partition of unity") {
  const Mesh m = mesh::generate(DomainSpec::omega(0.2), 0.07);
  auto [K, M] = assemble(m);
  const std::vector<double> ones(m.vertices.size(), 1.0);
  CHECK(std::abs(mass_dot(K, ones, ones)) < 1e-12);
  CHECK(mass_dot(M, ones, ones) == doctest::Approx(mesh::area(m)).epsilon(1e-12));
}

TEST_CASE("unit square Neumann and Dirichlet against separation of variables") {
  // dense path
  {
    const Mesh m = unit_square(20);  // 441 dofs
    SolveOptions o;
    o.k = 3;
    const auto nr = solve(m, BoundaryCondition::neumann, o);
    CHECK(std::abs(nr.eigenvalues[0]) < 1e-9);
    CHECK(nr.eigenvalues[1] == doctest::Approx(kPi * kPi).epsilon(5e-3));
    // lambda_2 = lambda_3 = pi^2 on the square
    CHECK(nr.eigenvalues[2] == doctest::Approx(kPi * kPi).epsilon(5e-3));
  }
  // shift-invert path
  {
    const Mesh m = unit_square(52);  // 2809 dofs, above the dense threshold
    SolveOptions o;
    o.k = 2;
    const auto nr = solve(m, BoundaryCondition::neumann, o);
    CHECK(std::abs(nr.eigenvalues[0]) < 1e-9);
    CHECK(nr.eigenvalues[1] == doctest::Approx(kPi * kPi).epsilon(5e-3));
    const auto dr = solve(m, BoundaryCondition::dirichlet, o);
    CHECK(dr.eigenvalues[0] == doctest::Approx(2.0 * kPi * kPi).epsilon(5e-3));
  }
}

TEST_CASE("dense and iterative paths agree") {
  const Mesh m = unit_square(24);
  SolveOptions dense, sparse;
  dense.k = sparse.k = 4;
  sparse.dense_threshold = 10;  // force the iterative path
  const auto a = solve(m, BoundaryCondition::neumann, dense);
  const auto b = solve(m, BoundaryCondition::neumann, sparse);
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(a.eigenvalues[j] - b.eigenvalues[j]) < 1e-10 * (1.0 + a.eigenvalues[j]));
}

TEST_CASE("T0 Neumann ground state is constant") {
  const Mesh m = mesh::generate(DomainSpec::triangle(), 0.05);
  SolveOptions o;
  o.k = 2;
  const auto r = solve(m, BoundaryCondition::neumann, o);
  CHECK(std::abs(r.eigenvalues[0]) < 1e-9);
  const auto v = column(r, 0);
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  CHECK(std::abs(*mx - *mn) < 1e-6 * std::abs(*mx));
}

TEST_CASE("eigenvectors are mass-normalized with small residuals") {
  const Mesh m = mesh::generate(DomainSpec::omega(0.1), 0.05);
  auto [K, M] = assemble(m);
  SolveOptions o;
  o.k = 5;
  const auto r = solve(m, BoundaryCondition::neumann, o);
  for (int j = 0; j < 5; ++j) {
    const auto v = column(r, j);
    CHECK(mass_dot(M, v, v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.residuals[j] <= o.tol);
  }
}

TEST_CASE("nu+ extrapolates to the closed-form eigenvalue") {
  std::vector<double> vals;
  Mesh half = mesh::generate(DomainSpec::triangle(), 0.05, true);
  for (int l = 0; l < 3; ++l) {
    SolveOptions o;
    o.k = 2;
    vals.push_back(nu_plus(half, o).value);
    if (l < 2) half = mesh::refine(half);
  }
  const auto ex = richardson(vals[0], vals[1], vals[2]);
  CHECK(ex.value == doctest::Approx(closedform::phi0_eigenvalue()).epsilon(3e-3));
  CHECK(ex.observed_order > 1.5);
  CHECK(ex.observed_order < 2.5);
  CHECK(std::abs(ex.value - closedform::phi0_eigenvalue()) / closedform::phi0_eigenvalue() <
        5e-4);
}

TEST_CASE("nu- equals nu+ on symmetric domains, eigenvector positive") {
  for (const DomainSpec& spec : {DomainSpec::triangle(), DomainSpec::omega(0.2)}) {
    const Mesh half = mesh::generate(spec, 0.04, true);
    SolveOptions op, om;
    op.k = 2;
    om.k = 1;
    const auto plus = nu_plus(half, op);
    const auto minus = nu_minus(half, om);
    CHECK(std::abs(plus.value - minus.value) / plus.value < 1e-9);
    // psi > 0 away from the Dirichlet chord
    for (std::size_t i = 0; i < half.vertices.size(); ++i)
      if (half.vertices[i].x > 1e-12) CHECK(minus.vec[i] > 0.0);
  }
}

TEST_CASE("nu+ coincides with the full-domain symmetric eigenvalue") {
  const DomainSpec spec = DomainSpec::omega(0.1);
  const Mesh half = mesh::generate(spec, 0.04, true);
  const Mesh full = mesh::generate(spec, 0.04, false);
  SolveOptions o;
  o.k = 3;
  const auto plus = nu_plus(half, o);
  const auto eig = solve(full, BoundaryCondition::neumann, o);
  CHECK(plus.value == doctest::Approx(eig.eigenvalues[1]).epsilon(1e-9));
}

TEST_CASE("full spectrum gaps of T0") {
  const auto rep = full_spectrum(DomainSpec::triangle(), 0.03, 4);
  CHECK(rep.nu2_nu3_relgap < 1e-3);
  CHECK(rep.nu3_nu4_gap > 0.5 * rep.eig.eigenvalues[1]);
}

TEST_CASE("even and odd extension") {
  const DomainSpec spec = DomainSpec::omega(0.2);
  const Mesh half = mesh::generate(spec, 0.06, true);
  const Mesh full = mesh::generate(spec, 0.06, false);
  SolveOptions o;
  o.k = 2;
  const auto plus = nu_plus(half, o);
  const auto even = extend_to_full(full, half, plus.vec, Sector::sym);
  const auto& perm = full.perm(geometry::Element::DC);
  for (std::size_t i = 0; i < even.size(); ++i) CHECK(even[perm[i]] == even[i]);

  SolveOptions om;
  om.k = 1;
  const auto minus = nu_minus(half, om);
  const auto odd = extend_to_full(full, half, minus.vec, Sector::antisym);
  for (std::size_t i = 0; i < odd.size(); ++i) CHECK(odd[perm[i]] == -odd[i]);
}

TEST_CASE("symmetry projection and the T operator") {
  const DomainSpec spec = DomainSpec::triangle();
  const Mesh full = mesh::generate(spec, 0.05, false);
  const Mesh half = mesh::generate(spec, 0.05, true);
  auto [K, M] = assemble(full);

  SolveOptions om;
  om.k = 1;
  const auto minus = nu_minus(half, om);
  const auto psi = extend_to_full(full, half, minus.vec, Sector::antisym);

  // T maps the antisymmetric eigenvector into the symmetric part of the
  // same eigenspace
  const auto t_psi = t_operator(full, psi);
  const auto& perm = full.perm(geometry::Element::DC);
  for (std::size_t i = 0; i < t_psi.size(); ++i)
    CHECK(t_psi[perm[i]] == doctest::Approx(t_psi[i]).epsilon(1e-12).scale(1e-12));
  CHECK(rayleigh_quotient(K, M, t_psi) == doctest::Approx(minus.value).epsilon(1e-6));

  // T kills R-invariant vectors
  const std::vector<double> ones(full.vertices.size(), 1.0);
  for (double v : t_operator(full, ones)) CHECK(v == 0.0);

  // projections split a vector into even and odd parts
  std::vector<double> probe(full.vertices.size());
  for (std::size_t i = 0; i < probe.size(); ++i)
    probe[i] = full.vertices[i].x + 0.3 * full.vertices[i].y * full.vertices[i].y;
  const auto even = symmetry_project(full, probe, Sector::sym);
  const auto odd = symmetry_project(full, probe, Sector::antisym);
  for (std::size_t i = 0; i < probe.size(); ++i) {
    CHECK(even[i] + odd[i] == doctest::Approx(probe[i]).epsilon(1e-14));
    CHECK(even[perm[i]] == doctest::Approx(even[i]).epsilon(1e-14));
    CHECK(odd[perm[i]] == doctest::Approx(-odd[i]).epsilon(1e-14));
  }
}

TEST_CASE("richardson extrapolation") {
  // exact quadratic sequence
  const auto e = richardson(5.0 + 3.0 * 0.01, 5.0 + 3.0 * 0.0025, 5.0 + 3.0 * 0.000625);
  CHECK(e.value == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(e.observed_order == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(e.monotone);
  const auto bad = richardson(5.0, 5.2, 5.1);
  CHECK_FALSE(bad.monotone);
}

TEST_CASE("solving a permuted mesh gives the same spectrum") {
  const Mesh m = mesh::generate(DomainSpec::omega(0.1), 0.12);
  const auto& perm = m.perm(geometry::Element::R);
  Mesh p = m;
  // relabel vertex i as perm[i]
  for (std::size_t i = 0; i < m.vertices.size(); ++i) p.vertices[perm[i]] = m.vertices[i];
  for (auto& t : p.triangles)
    for (int& v : t) v = perm[v];
  for (auto& b : p.boundary) {
    b.a = perm[b.a];
    b.b = perm[b.b];
  }
  SolveOptions o;
  o.k = 4;
  const auto ra = solve(m, BoundaryCondition::neumann, o);
  const auto rb = solve(p, BoundaryCondition::neumann, o);
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(ra.eigenvalues[j] - rb.eigenvalues[j]) < 1e-12 * (ra.eigenvalues.back() + 1.0));
}

TEST_CASE("half spectra merge into the full spectrum") {
  const DomainSpec spec = DomainSpec::triangle();
  const Mesh full = mesh::generate(spec, 0.045, false);
  const Mesh half = mesh::generate(spec, 0.045, true);
  SolveOptions o;
  o.k = 6;
  const auto eig = solve(full, BoundaryCondition::neumann, o);
  const auto nn = solve(half, BoundaryCondition::neumann, o);
  const auto nd = solve(half, BoundaryCondition::mixed_nd, o);
  std::vector<double> merged;
  merged.insert(merged.end(), nn.eigenvalues.begin(), nn.eigenvalues.end());
  merged.insert(merged.end(), nd.eigenvalues.begin(), nd.eigenvalues.end());
  std::sort(merged.begin(), merged.end());
  for (int j = 0; j < 6; ++j)
    CHECK(std::abs(merged[j] - eig.eigenvalues[j]) < 1e-8 * (1.0 + eig.eigenvalues[j]));
}

TEST_CASE("impossible residual tolerance raises SolverStagnation") {
  const Mesh m = unit_square(12);
  SolveOptions o;
  o.k = 2;
  o.tol = 1e-18;
  o.max_iters = 5;
  CHECK_THROWS_AS(solve(m, BoundaryCondition::neumann, o), Error);
}

TEST_CASE("solve_lowest validates k") {
  const Mesh m = unit_square(4);
  SolveOptions o;
  o.k = 13;
  CHECK_THROWS_AS(solve(m, BoundaryCondition::neumann, o), Error);
}
