#include "ecplab/fem.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

namespace ecplab::fem {

using geometry::cross;
using geometry::Vec2;
using mesh::BoundaryMarker;

const char* bc_name(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::neumann: return "neumann";
    case BoundaryCondition::dirichlet: return "dirichlet";
    case BoundaryCondition::mixed_nd: return "mixed_nd";
  }
  return "?";
}

const char* sector_name(Sector s) {
  switch (s) {
    case Sector::full: return "full";
    case Sector::sym: return "sym";
    case Sector::antisym: return "antisym";
  }
  return "?";
}

std::pair<SparseSymMatrix, SparseSymMatrix> assemble(const Mesh& m) {
  const int n = static_cast<int>(m.vertices.size());
  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(m.triangles.size() * 9);
  tm.reserve(m.triangles.size() * 9);
  for (const auto& t : m.triangles) {
    const Vec2 a = m.vertices[t[0]], b = m.vertices[t[1]], c = m.vertices[t[2]];
    const double det = cross(b - a, c - a);  // 2 * area, positive for CCW
    const double area = 0.5 * det;
    // gradients of the barycentric basis
    const Vec2 g[3] = {{(b.y - c.y) / det, (c.x - b.x) / det},
                       {(c.y - a.y) / det, (a.x - c.x) / det},
                       {(a.y - b.y) / det, (b.x - a.x) / det}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        tk.emplace_back(t[i], t[j], area * dot(g[i], g[j]));
        tm.emplace_back(t[i], t[j], area / 12.0 * (i == j ? 2.0 : 1.0));
      }
  }
  SparseSymMatrix K(n, n), M(n, n);
  K.setFromTriplets(tk.begin(), tk.end());
  M.setFromTriplets(tm.begin(), tm.end());
  return {std::move(K), std::move(M)};
}

namespace {

Eigen::VectorXd to_vec(std::span<const double> x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

struct Reduced {
  SparseSymMatrix K, M;
  std::vector<int> keep;  // reduced index -> full index
};

Reduced reduce(const SparseSymMatrix& K, const SparseSymMatrix& M,
               std::span<const int> dirichlet) {
  const int n = static_cast<int>(K.rows());
  std::vector<char> drop(n, 0);
  for (int d : dirichlet) {
    if (d < 0 || d >= n) fail(errc::invalid_argument, "dirichlet dof out of range");
    drop[d] = 1;
  }
  Reduced r;
  std::vector<int> newid(n, -1);
  for (int i = 0; i < n; ++i)
    if (!drop[i]) {
      newid[i] = static_cast<int>(r.keep.size());
      r.keep.push_back(i);
    }
  auto shrink = [&](const SparseSymMatrix& A) {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(A.nonZeros());
    for (int col = 0; col < A.outerSize(); ++col)
      for (SparseSymMatrix::InnerIterator it(A, col); it; ++it)
        if (newid[it.row()] >= 0 && newid[it.col()] >= 0)
          t.emplace_back(newid[it.row()], newid[it.col()], it.value());
    SparseSymMatrix B(static_cast<int>(r.keep.size()), static_cast<int>(r.keep.size()));
    B.setFromTriplets(t.begin(), t.end());
    return B;
  };
  r.K = shrink(K);
  r.M = shrink(M);
  return r;
}

struct Pairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Pairs dense_lowest(const SparseSymMatrix& K, const SparseSymMatrix& M, int k) {
  Eigen::MatrixXd Kd = Eigen::MatrixXd(K), Md = Eigen::MatrixXd(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md);
  if (es.info() != Eigen::Success)
    fail(errc::solver_stagnation, "dense generalized eigensolver failed");
  Pairs p;
  p.values = es.eigenvalues().head(k);
  p.vectors = es.eigenvectors().leftCols(k);
  return p;
}

// block subspace iteration on (K + M)^{-1} M with Rayleigh-Ritz extraction
Pairs shift_invert_lowest(const SparseSymMatrix& K, const SparseSymMatrix& M, int k,
                          const SolveOptions& opts) {
  const int n = static_cast<int>(K.rows());
  const int p = std::min(n, std::max(2 * k, k + 8));
  SparseSymMatrix A = K + M;
  Eigen::SimplicialLDLT<SparseSymMatrix> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    fail(errc::solver_stagnation, "factorization of the shifted operator failed");

  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd X(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = gauss(rng);

  Eigen::VectorXd theta;
  for (int it = 0; it < opts.max_iters; ++it) {
    Eigen::MatrixXd Y = ldlt.solve(M * X);
    // M-orthonormalize
    Eigen::MatrixXd G = Y.transpose() * (M * Y);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) {
      // restart the degenerate directions
      for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) Y(i, j) = gauss(rng);
      G = Y.transpose() * (M * Y);
      llt.compute(G);
      if (llt.info() != Eigen::Success)
        fail(errc::solver_stagnation, "subspace lost rank");
    }
    const Eigen::MatrixXd U = llt.matrixU();
    Y = U.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(Y);
    // Rayleigh-Ritz
    Eigen::MatrixXd H = Y.transpose() * (K * Y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
    X = Y * es.eigenvectors();
    theta = es.eigenvalues();

    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      const Eigen::VectorXd mx = M * X.col(j);
      const double res = (K * X.col(j) - theta(j) * mx).norm() / mx.norm();
      worst = std::max(worst, res);
    }
    if (worst <= opts.tol) {
      Pairs out;
      out.values = theta.head(k);
      out.vectors = X.leftCols(k);
      return out;
    }
  }
  std::ostringstream msg;
  msg << "residual target not met within the iteration budget (tol=" << opts.tol << ")";
  fail(errc::solver_stagnation, msg.str());
}

}  // namespace

double mass_dot(const SparseSymMatrix& M, std::span<const double> a, std::span<const double> b) {
  return to_vec(a).dot(M * to_vec(b));
}

double rayleigh_quotient(const SparseSymMatrix& K, const SparseSymMatrix& M,
                         std::span<const double> x) {
  const Eigen::VectorXd v = to_vec(x);
  return v.dot(K * v) / v.dot(M * v);
}

EigenResult solve_lowest(const SparseSymMatrix& K, const SparseSymMatrix& M,
                         BoundaryCondition bc, std::span<const int> dirichlet_dofs,
                         const SolveOptions& opts) {
  if (opts.k < 1 || opts.k > 12) fail(errc::invalid_argument, "solve_lowest: k must be in 1..12");
  Reduced r = reduce(K, M, dirichlet_dofs);
  const int nfree = static_cast<int>(r.keep.size());
  if (nfree < opts.k) fail(errc::invalid_argument, "solve_lowest: fewer dofs than eigenpairs");

  Pairs p = (nfree <= opts.dense_threshold) ? dense_lowest(r.K, r.M, opts.k)
                                            : shift_invert_lowest(r.K, r.M, opts.k, opts);

  EigenResult out;
  out.bc = bc;
  out.n_dofs = nfree;
  out.eigenvalues.assign(p.values.data(), p.values.data() + opts.k);
  out.eigenvectors = Eigen::MatrixXd::Zero(K.rows(), opts.k);
  out.residuals.resize(opts.k);
  for (int j = 0; j < opts.k; ++j) {
    Eigen::VectorXd x = p.vectors.col(j);
    x /= std::sqrt(x.dot(r.M * x));
    const Eigen::VectorXd mx = r.M * x;
    out.residuals[j] = (r.K * x - p.values(j) * mx).norm() / mx.norm();
    if (out.residuals[j] > opts.tol) {
      std::ostringstream msg;
      msg << "eigenpair residual " << out.residuals[j] << " above tol " << opts.tol;
      fail(errc::solver_stagnation, msg.str());
    }
    for (int i = 0; i < nfree; ++i) out.eigenvectors(r.keep[i], j) = x(i);
  }
  return out;
}

EigenResult solve(const Mesh& m, BoundaryCondition bc, const SolveOptions& opts) {
  auto [K, M] = assemble(m);
  std::vector<int> dirichlet;
  if (bc != BoundaryCondition::neumann) {
    std::vector<char> mark(m.vertices.size(), 0);
    for (const auto& be : m.boundary) {
      const bool take = bc == BoundaryCondition::dirichlet ||
                        be.marker == BoundaryMarker::gamma_dirichlet;
      if (take) mark[be.a] = mark[be.b] = 1;
    }
    for (std::size_t i = 0; i < mark.size(); ++i)
      if (mark[i]) dirichlet.push_back(static_cast<int>(i));
    if (bc == BoundaryCondition::mixed_nd && dirichlet.empty())
      fail(errc::invalid_argument, "mixed_nd: mesh has no GammaDirichlet edges");
  }
  EigenResult out = solve_lowest(K, M, bc, dirichlet, opts);
  out.h = m.h;
  // half-domain problems represent one symmetry sector of the full domain
  if (m.half) {
    if (bc == BoundaryCondition::neumann) out.sector = Sector::sym;
    else if (bc == BoundaryCondition::mixed_nd) out.sector = Sector::antisym;
  }
  return out;
}

HalfEigen nu_plus(const Mesh& half_mesh, const SolveOptions& opts) {
  if (!half_mesh.half) fail(errc::invalid_argument, "nu_plus expects a half mesh");
  SolveOptions o = opts;
  o.k = std::max(opts.k, 2);
  EigenResult r = solve(half_mesh, BoundaryCondition::neumann, o);
  HalfEigen out;
  out.value = r.eigenvalues[1];
  out.half = half_mesh;
  out.vec.assign(r.eigenvectors.col(1).data(),
                 r.eigenvectors.col(1).data() + r.eigenvectors.rows());
  return out;
}

HalfEigen nu_plus(const geometry::DomainSpec& spec, double h, const SolveOptions& opts) {
  return nu_plus(mesh::generate(spec, h, /*half=*/true), opts);
}

HalfEigen nu_minus(const Mesh& half_mesh, const SolveOptions& opts) {
  if (!half_mesh.half) fail(errc::invalid_argument, "nu_minus expects a half mesh");
  SolveOptions o = opts;
  o.k = std::max(opts.k, 1);
  EigenResult r = solve(half_mesh, BoundaryCondition::mixed_nd, o);
  HalfEigen out;
  out.value = r.eigenvalues[0];
  out.half = half_mesh;
  out.vec.assign(r.eigenvectors.col(0).data(),
                 r.eigenvectors.col(0).data() + r.eigenvectors.rows());
  // psi restricted to the half domain is positive
  double s = 0.0;
  for (double v : out.vec) s += v;
  if (s < 0.0)
    for (double& v : out.vec) v = -v;
  return out;
}

HalfEigen nu_minus(const geometry::DomainSpec& spec, double h, const SolveOptions& opts) {
  return nu_minus(mesh::generate(spec, h, /*half=*/true), opts);
}

std::vector<double> extend_to_full(const Mesh& full, const Mesh& half,
                                   std::span<const double> values, Sector parity) {
  if (parity == Sector::full) fail(errc::invalid_argument, "extend_to_full: parity must be sym/antisym");
  if (full.half || !half.half) fail(errc::invalid_argument, "extend_to_full: need (full, half) meshes");
  if (!full.has_sector() || !half.has_sector() ||
      full.sector.vertices.size() != half.sector.vertices.size())
    fail(errc::invalid_argument, "extend_to_full: meshes come from different sector data");
  if (values.size() != half.vertices.size())
    fail(errc::invalid_argument, "extend_to_full: values size mismatch");

  // (element, sector index) -> half vertex
  const int ns = static_cast<int>(half.sector.vertices.size());
  std::array<std::vector<int>, geometry::kGroupOrder> hidx;
  for (int e = 0; e < geometry::kGroupOrder; ++e) hidx[e].assign(ns, -1);
  for (std::size_t i = 0; i < half.vertices.size(); ++i) {
    const auto& o = half.owners[i];
    hidx[static_cast<int>(half.images[o.image])][o.sector_index] = static_cast<int>(i);
  }

  std::vector<double> out(full.vertices.size());
  for (std::size_t i = 0; i < full.vertices.size(); ++i) {
    const auto& o = full.owners[i];
    const geometry::Element e = full.images[o.image];
    int hj = hidx[static_cast<int>(e)][o.sector_index];
    double sign = 1.0;
    if (hj < 0) {
      const geometry::Element mirrored = geometry::group::compose(geometry::Element::DC, e);
      hj = hidx[static_cast<int>(mirrored)][o.sector_index];
      if (parity == Sector::antisym) sign = -1.0;
    }
    if (hj < 0) fail(errc::invalid_argument, "extend_to_full: owner not present in half mesh");
    out[i] = sign * values[hj];
  }
  return out;
}

SpectrumReport full_spectrum(const geometry::DomainSpec& spec, double h, int k,
                             const SolveOptions& opts) {
  SolveOptions o = opts;
  o.k = std::max(k, 4);
  Mesh m = mesh::generate(spec, h, /*half=*/false);
  SpectrumReport rep;
  rep.eig = solve(m, BoundaryCondition::neumann, o);
  const auto& ev = rep.eig.eigenvalues;
  rep.nu2_nu3_relgap = std::abs(ev[2] - ev[1]) / ev[1];
  rep.nu3_nu4_gap = ev[3] - ev[2];
  return rep;
}

std::vector<double> symmetry_project(const Mesh& m, std::span<const double> values, Sector s) {
  if (s == Sector::full) return {values.begin(), values.end()};
  const auto& perm = m.perm(geometry::Element::DC);
  std::vector<double> out(values.size());
  const double sign = s == Sector::sym ? 1.0 : -1.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = 0.5 * (values[i] + sign * values[perm[i]]);
  return out;
}

std::vector<double> t_operator(const Mesh& m, std::span<const double> values) {
  const auto& pr = m.perm(geometry::Element::R);
  const auto& pr2 = m.perm(geometry::Element::R2);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = values[pr[i]] - values[pr2[i]];
  return out;
}

Extrapolation richardson(double at_h, double at_h2, double at_h4) {
  Extrapolation e;
  e.value = at_h4 + (at_h4 - at_h2) / 3.0;
  const double d1 = at_h - at_h2, d2 = at_h2 - at_h4;
  e.monotone = (d1 > 0 && d2 > 0 && d1 > d2) || (d1 < 0 && d2 < 0 && d1 < d2);
  e.observed_order = (d1 * d2 > 0) ? std::log2(d1 / d2) : std::numeric_limits<double>::quiet_NaN();
  return e;
}

}  // namespace ecplab::fem
