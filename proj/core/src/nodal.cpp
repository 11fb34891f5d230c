#include "ecplab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ecplab::nodal {

using geometry::cross;

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[a] = b;
  }
};

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<std::int8_t> sign_partition(const Mesh& m, std::span<const double> values,
                                        double a, double eps) {
  if (values.size() != m.vertices.size())
    fail(errc::invalid_argument, "sign_partition: values size mismatch");
  const double scale = eps * max_abs(values);
  std::vector<std::int8_t> lab(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = values[i] + a;
    lab[i] = std::abs(w) <= scale ? std::int8_t{0} : (w > 0 ? std::int8_t{1} : std::int8_t{-1});
  }
  return lab;
}

NodalReport count_nodal_domains(const Mesh& m, std::span<const double> values, double a,
                                double eps) {
  const auto lab = sign_partition(m, values, a, eps);
  const int n = static_cast<int>(m.vertices.size());
  UnionFind uf(n);
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e) {
      const int p = t[e], q = t[(e + 1) % 3];
      if (lab[p] != 0 && lab[p] == lab[q]) uf.unite(p, q);
    }

  NodalReport rep;
  rep.a = a;
  rep.eps = eps;
  rep.component_of_vertex.assign(n, -1);
  std::map<int, int> comp_id;  // root -> component index
  for (int i = 0; i < n; ++i) {
    if (lab[i] == 0) continue;
    const int root = uf.find(i);
    auto [it, inserted] = comp_id.try_emplace(root, static_cast<int>(rep.components.size()));
    if (inserted) rep.components.push_back({lab[i], 0, 0.0});
    rep.components[it->second].vertex_count++;
    rep.component_of_vertex[i] = it->second;
  }
  for (const auto& t : m.triangles) {
    const int c0 = rep.component_of_vertex[t[0]];
    if (c0 < 0) continue;
    if (rep.component_of_vertex[t[1]] != c0 || rep.component_of_vertex[t[2]] != c0) continue;
    rep.components[c0].area +=
        0.5 * cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
  }
  rep.beta0 = static_cast<int>(rep.components.size());
  for (const auto& c : rep.components) (c.sign > 0 ? rep.n_positive : rep.n_negative)++;
  return rep;
}

namespace {

// component -> component map under the D_C permutation, or nullopt if the
// permutation does not respect the partition
std::optional<std::vector<int>> mirror_component_map(const Mesh& m, const NodalReport& rep) {
  const auto& perm = m.perm(geometry::Element::DC);
  std::vector<int> image(rep.components.size(), -2);
  for (std::size_t v = 0; v < perm.size(); ++v) {
    const int c = rep.component_of_vertex[v];
    if (c < 0) continue;
    const int cm = rep.component_of_vertex[perm[v]];
    if (image[c] == -2)
      image[c] = cm;
    else if (image[c] != cm)
      return std::nullopt;
  }
  return image;
}

}  // namespace

bool mirror_equivariant(const Mesh& m, const NodalReport& rep) {
  const auto image = mirror_component_map(m, rep);
  if (!image) return false;
  for (std::size_t c = 0; c < image->size(); ++c) {
    const int ic = (*image)[c];
    if (ic < 0) return false;
    if (rep.components[c].sign != rep.components[ic].sign) return false;
  }
  return true;
}

bool mirror_exchanges_negatives(const Mesh& m, const NodalReport& rep) {
  if (rep.n_negative != 2) return false;
  const auto image = mirror_component_map(m, rep);
  if (!image) return false;
  std::vector<int> negs;
  for (std::size_t c = 0; c < rep.components.size(); ++c)
    if (rep.components[c].sign < 0) negs.push_back(static_cast<int>(c));
  return (*image)[negs[0]] == negs[1] && (*image)[negs[1]] == negs[0];
}

std::vector<std::vector<Vec2>> extract_level_set(const Mesh& m, std::span<const double> values,
                                                 double c) {
  if (values.size() != m.vertices.size())
    fail(errc::invalid_argument, "extract_level_set: values size mismatch");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (!(c > *mn && c < *mx))
    fail(errc::invalid_argument, "extract_level_set: level not strictly inside the value range");

  auto above = [&](int v) { return values[v] > c; };
  using EdgeKey = std::pair<int, int>;
  auto key_of = [](int a, int b) { return EdgeKey{std::min(a, b), std::max(a, b)}; };

  struct Segment {
    EdgeKey e0, e1;
  };
  std::vector<Segment> segments;
  std::map<EdgeKey, Vec2> crossing;
  for (const auto& t : m.triangles) {
    std::vector<EdgeKey> cuts;
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      if (above(a) == above(b)) continue;
      const EdgeKey k = key_of(a, b);
      if (!crossing.count(k)) {
        const double s = (c - values[a]) / (values[b] - values[a]);
        crossing[k] = m.vertices[a] + s * (m.vertices[b] - m.vertices[a]);
      }
      cuts.push_back(k);
    }
    if (cuts.size() == 2) segments.push_back({cuts[0], cuts[1]});
  }

  // chain segments through shared edge crossings
  std::map<EdgeKey, std::vector<int>> at_edge;
  for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
    at_edge[segments[i].e0].push_back(i);
    at_edge[segments[i].e1].push_back(i);
  }
  std::vector<char> used(segments.size(), 0);
  std::vector<std::vector<Vec2>> polylines;

  auto walk = [&](int start, EdgeKey from) {
    std::vector<Vec2> line{crossing[from]};
    int seg = start;
    EdgeKey cur = from;
    while (seg >= 0 && !used[seg]) {
      used[seg] = 1;
      cur = segments[seg].e0 == cur ? segments[seg].e1 : segments[seg].e0;
      line.push_back(crossing[cur]);
      int next = -1;
      for (int cand : at_edge[cur])
        if (!used[cand]) next = cand;
      seg = next;
    }
    return line;
  };

  // open arcs first: start at crossings that belong to a single segment
  for (const auto& [k, segs] : at_edge) {
    if (segs.size() != 1 || used[segs[0]]) continue;
    polylines.push_back(walk(segs[0], k));
  }
  // remaining closed loops
  for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
    if (used[i]) continue;
    polylines.push_back(walk(i, segments[i].e0));
  }
  return polylines;
}

std::vector<CourantRow> courant_check(const Mesh& m, const fem::EigenResult& eig,
                                      double cluster_relgap) {
  std::vector<CourantRow> rows;
  int cluster_start = 0;
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
    if (k > 0) {
      const double gap = eig.eigenvalues[k] - eig.eigenvalues[k - 1];
      if (gap > cluster_relgap * std::max(std::abs(eig.eigenvalues[k]), 1.0))
        cluster_start = static_cast<int>(k);
    }
    std::vector<double> v(eig.eigenvectors.col(k).data(),
                          eig.eigenvectors.col(k).data() + eig.eigenvectors.rows());
    const NodalReport rep = count_nodal_domains(m, v, 0.0);
    CourantRow row;
    row.index = static_cast<int>(k) + 1;
    row.eigenvalue = eig.eigenvalues[k];
    row.least_index = cluster_start + 1;
    row.beta0 = rep.beta0;
    row.pass = rep.beta0 <= row.least_index;
    rows.push_back(row);
  }
  return rows;
}

bool gladwell_zhu_check(const Mesh& m, std::span<const double> phi_n, int n,
                        std::span<const double> a_grid, std::vector<GladwellZhuRow>* rows) {
  bool ok = true;
  for (double a : a_grid) {
    if (!(a > 0.0)) fail(errc::invalid_argument, "gladwell_zhu_check: offsets must be positive");
    const NodalReport rep = count_nodal_domains(m, phi_n, a);
    if (rows) rows->push_back({a, rep.n_positive});
    if (rep.n_positive > n - 1) ok = false;
  }
  return ok;
}

WindowScan find_three_domain_window(const Mesh& m, std::span<const double> phi, double a_min,
                                    double a_max, int n_steps, double eps) {
  if (!(a_max > a_min) || n_steps < 2)
    fail(errc::invalid_argument, "find_three_domain_window: bad offset grid");
  WindowScan out;
  int run_start = -1;
  int best_len = 0;
  std::array<double, 2> best{};
  for (int i = 0; i < n_steps; ++i) {
    const double a = a_min + (a_max - a_min) * (i + 1) / (n_steps + 1);
    const NodalReport rep = count_nodal_domains(m, phi, a, eps);
    out.rows.push_back({a, rep.beta0, rep.n_positive, rep.n_negative});
    const bool hit = rep.beta0 == 3 && rep.n_positive == 1 && rep.n_negative == 2;
    if (hit && run_start < 0) run_start = i;
    if ((!hit || i == n_steps - 1) && run_start >= 0) {
      const int run_end = hit ? i : i - 1;
      if (run_end - run_start + 1 > best_len) {
        best_len = run_end - run_start + 1;
        best = {out.rows[run_start].a, out.rows[run_end].a};
      }
      run_start = -1;
    }
  }
  if (best_len > 0) out.window = best;
  return out;
}

}  // namespace ecplab::nodal
