#include "ecplab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace ecplab::mesh {

using geometry::boundary_inverse_radius;
using geometry::DomainKind;
using geometry::kPi;
using geometry::kSqrt3;
namespace group = geometry::group;

namespace {

constexpr std::array<Element, 6> kFullImages = {Element::I,  Element::DA, Element::DB,
                                                Element::DC, Element::R,  Element::R2};
constexpr std::array<Element, 3> kHalfImages = {Element::I, Element::DA, Element::DB};

double det2(const geometry::Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

double max_sector_rho(const DomainSpec& spec) {
  double best = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double th = -kPi / 6.0 + (kPi / 3.0) * i / 64.0;
    best = std::max(best, geometry::rho(spec, th));
  }
  return best;
}

// structured fan of the reference wedge of T0 (triangle O-B-M_A), mapped
// radially onto the target domain
SectorData build_sector(const DomainSpec& spec, int n) {
  const Vec2 b = geometry::vertex_b();
  const Vec2 ma = 0.5 * (geometry::vertex_b() + geometry::vertex_c());
  const DomainSpec t0 = DomainSpec::triangle();

  SectorData s;
  std::vector<std::vector<int>> ring(n + 1);
  for (int j = 0; j <= n; ++j) {
    ring[j].resize(j + 1);
    for (int k = 0; k <= j; ++k) {
      Vec2 p{0.0, 0.0};
      if (j > 0) {
        const double t = static_cast<double>(k) / j;
        const Vec2 chord = (1.0 - t) * b + t * ma;
        const double scale = static_cast<double>(j) / n;
        p = scale * chord;
        const double theta = std::atan2(p.y, p.x);
        const double ratio = geometry::rho(spec, theta) / geometry::rho(t0, theta);
        p = ratio * p;
      }
      ring[j][k] = static_cast<int>(s.vertices.size());
      s.vertices.push_back(p);
      Ray r = Ray::none;
      if (j == 0)
        r = Ray::origin;
      else if (k == 0)
        r = Ray::lower;
      else if (k == j)
        r = Ray::upper;
      s.ray.push_back(r);
    }
  }
  for (int j = 1; j <= n; ++j) {
    for (int k = 0; k < j; ++k) {
      s.triangles.push_back({ring[j][k], ring[j][k + 1], ring[j - 1][k]});
      if (k < j - 1)
        s.triangles.push_back({ring[j][k + 1], ring[j - 1][k + 1], ring[j - 1][k]});
    }
  }
  s.outer = ring[n];
  return s;
}

struct Unfolder {
  const SectorData& sector;
  std::vector<Element> images;
  // canonical (image_index, sector_index) -> global id
  std::vector<std::vector<int>> gid;  // [image][sector_index]

  int image_index(Element e) const {
    for (std::size_t i = 0; i < images.size(); ++i)
      if (images[i] == e) return static_cast<int>(i);
    return -1;
  }

  // canonical owner of the (possibly shared) vertex instance
  std::pair<int, int> canon(int img, int k) const {
    const Ray r = sector.ray[k];
    if (r == Ray::origin) return {0, k};
    int best = img;
    Element partner = Element::I;
    if (r == Ray::lower)
      partner = group::compose(images[img], Element::DB);
    else if (r == Ray::upper)
      partner = group::compose(images[img], Element::DA);
    else
      return {img, k};
    const int other = image_index(partner);
    if (other >= 0 && other < best) best = other;
    return {best, k};
  }
};

Mesh unfold(const DomainSpec& spec, double h, bool half, SectorData sector) {
  Mesh m;
  m.spec = spec;
  m.h = h;
  m.half = half;
  m.images.assign(half ? kHalfImages.begin() : kFullImages.begin(),
                  half ? kHalfImages.end() : kFullImages.end());
  Unfolder uf{sector, m.images, {}};
  const int ni = static_cast<int>(m.images.size());
  const int ns = static_cast<int>(sector.vertices.size());
  uf.gid.assign(ni, std::vector<int>(ns, -1));

  for (int img = 0; img < ni; ++img) {
    for (int k = 0; k < ns; ++k) {
      const auto [ci, ck] = uf.canon(img, k);
      if (uf.gid[ci][ck] < 0) {
        uf.gid[ci][ck] = static_cast<int>(m.vertices.size());
        Vec2 pos = group::apply(m.images[ci], sector.vertices[ck]);
        // vertices mapped onto the mirror line {u=0} sit there exactly
        const Element e = m.images[ci];
        const Ray r = sector.ray[ck];
        if ((e == Element::DA && r == Ray::lower) || (e == Element::DB && r == Ray::upper))
          pos.x = 0.0;
        m.vertices.push_back(pos);
        m.owners.push_back({static_cast<std::uint8_t>(ci), ck});
      }
      uf.gid[img][k] = uf.gid[ci][ck];
    }
  }
  for (int img = 0; img < ni; ++img) {
    const bool flip = det2(group::matrix(m.images[img])) < 0.0;
    for (const auto& t : sector.triangles) {
      const int a = uf.gid[img][t[0]], b = uf.gid[img][t[1]], c = uf.gid[img][t[2]];
      m.triangles.push_back(flip ? std::array<int, 3>{a, c, b} : std::array<int, 3>{a, b, c});
    }
  }

  // boundary = unmatched directed triangle edges (CCW, domain on the left)
  std::map<std::pair<int, int>, int> dir;
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e) dir[{t[e], t[(e + 1) % 3]}]++;
  auto on_axis = [&](int v) {
    const auto& o = m.owners[v];
    const Ray r = sector.ray[o.sector_index];
    if (r == Ray::origin) return true;
    const Element e = m.images[o.image];
    return (e == Element::DA && r == Ray::lower) || (e == Element::DB && r == Ray::upper);
  };
  for (const auto& [edge, count] : dir) {
    (void)count;
    if (dir.find({edge.second, edge.first}) != dir.end()) continue;
    BoundaryEdge be{edge.first, edge.second, BoundaryMarker::gamma_neumann};
    if (half && on_axis(edge.first) && on_axis(edge.second))
      be.marker = BoundaryMarker::gamma_dirichlet;
    m.boundary.push_back(be);
  }

  if (!half) {
    for (int g = 0; g < geometry::kGroupOrder; ++g) {
      auto& perm = m.group_perm[g];
      perm.resize(m.vertices.size());
      for (int img = 0; img < ni; ++img) {
        const Element mapped = group::compose(kFullImages[g], m.images[img]);
        const int ti = uf.image_index(mapped);
        for (int k = 0; k < ns; ++k)
          if (uf.gid[img][k] >= 0) perm[uf.gid[img][k]] = uf.gid[ti][k];
      }
    }
  }

  m.sector = std::move(sector);
  return m;
}

double tri_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
  auto angle = [](Vec2 p, Vec2 q, Vec2 r) {
    const Vec2 v1 = q - p, v2 = r - p;
    const double d = dot(v1, v2) / (norm(v1) * norm(v2));
    return std::acos(std::clamp(d, -1.0, 1.0));
  };
  const double m = std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
  return m * 180.0 / kPi;
}

void check_quality(const Mesh& m) {
  const Quality q = quality(m);
  if (q.min_angle_deg < 5.0)
    fail(errc::degenerate_triangle,
         "mesh quality collapsed: min angle " + std::to_string(q.min_angle_deg) + " deg");
}

}  // namespace

const std::vector<int>& Mesh::perm(Element g) const {
  if (!has_group_tables()) fail(errc::no_group_tables, "mesh has no group tables");
  return group_perm[static_cast<int>(g)];
}

Mesh generate(const DomainSpec& spec, double h, bool half) {
  const double max_rho = max_sector_rho(spec);
  if (!(h > 0.0) || h > 2.0 * max_rho / 4.0)
    fail(errc::invalid_argument, "generate: require 0 < h <= diameter/4");
  const int n = std::max(2, static_cast<int>(std::ceil(max_rho / h)));
  Mesh m = unfold(spec, h, half, build_sector(spec, n));
  check_quality(m);
  return m;
}

namespace {

// 4-split of the stored sector; outer midpoints are projected radially onto
// the exact boundary
SectorData refine_sector(const DomainSpec& spec, const SectorData& s) {
  SectorData out;
  out.vertices = s.vertices;
  out.ray = s.ray;
  std::map<std::pair<int, int>, int> midpoint;
  std::map<std::pair<int, int>, bool> is_outer;
  for (std::size_t i = 0; i + 1 < s.outer.size(); ++i) {
    const int a = std::min(s.outer[i], s.outer[i + 1]);
    const int b = std::max(s.outer[i], s.outer[i + 1]);
    is_outer[{a, b}] = true;
  }
  auto mid_of = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (s.vertices[a] + s.vertices[b]);
    Ray r = Ray::none;
    const Ray ra = s.ray[a] == Ray::origin ? s.ray[b] : s.ray[a];
    const Ray rb = s.ray[b] == Ray::origin ? s.ray[a] : s.ray[b];
    if (ra == rb && ra != Ray::none) r = ra;
    if (is_outer.count(key)) {
      const double theta = std::atan2(p.y, p.x);
      const double rr = geometry::rho(spec, theta);
      p = {rr * std::cos(theta), rr * std::sin(theta)};
    }
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(p);
    out.ray.push_back(r);
    midpoint[key] = id;
    return id;
  };
  for (const auto& t : s.triangles) {
    const int ab = mid_of(t[0], t[1]);
    const int bc = mid_of(t[1], t[2]);
    const int ca = mid_of(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  for (std::size_t i = 0; i + 1 < s.outer.size(); ++i) {
    out.outer.push_back(s.outer[i]);
    out.outer.push_back(mid_of(s.outer[i], s.outer[i + 1]));
  }
  out.outer.push_back(s.outer.back());
  return out;
}

Mesh refine_plain(const Mesh& m) {
  Mesh out;
  out.spec = m.spec;
  out.h = m.h / 2.0;
  out.half = m.half;
  out.vertices = m.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  std::map<std::pair<int, int>, BoundaryMarker> bmark;
  for (const auto& be : m.boundary) bmark[std::minmax(be.a, be.b)] = be.marker;
  auto mid_of = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (m.vertices[a] + m.vertices[b]);
    auto bit = bmark.find(key);
    if (bit != bmark.end() && bit->second == BoundaryMarker::gamma_neumann && m.spec) {
      const double theta = std::atan2(p.y, p.x);
      const double rr = geometry::rho(*m.spec, theta);
      p = {rr * std::cos(theta), rr * std::sin(theta)};
    }
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(p);
    midpoint[key] = id;
    return id;
  };
  for (const auto& t : m.triangles) {
    const int ab = mid_of(t[0], t[1]);
    const int bc = mid_of(t[1], t[2]);
    const int ca = mid_of(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  for (const auto& be : m.boundary) {
    const int mid = midpoint.at(std::minmax(be.a, be.b));
    out.boundary.push_back({be.a, mid, be.marker});
    out.boundary.push_back({mid, be.b, be.marker});
  }
  return out;
}

}  // namespace

Mesh refine(const Mesh& m) {
  if (!m.has_sector() || !m.spec) {
    Mesh out = refine_plain(m);
    check_quality(out);
    return out;
  }
  Mesh out = unfold(*m.spec, m.h / 2.0, m.half, refine_sector(*m.spec, m.sector));
  check_quality(out);
  return out;
}

Quality quality(const Mesh& m) {
  Quality q;
  q.n_vertices = static_cast<int>(m.vertices.size());
  q.n_triangles = static_cast<int>(m.triangles.size());
  q.min_angle_deg = 180.0;
  for (const auto& t : m.triangles) {
    q.min_angle_deg = std::min(
        q.min_angle_deg, tri_min_angle(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]));
    for (int e = 0; e < 3; ++e)
      q.max_h = std::max(q.max_h, norm(m.vertices[t[e]] - m.vertices[t[(e + 1) % 3]]));
  }
  return q;
}

double area(const Mesh& m) {
  double a = 0.0;
  for (const auto& t : m.triangles)
    a += 0.5 * cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
  return a;
}

std::vector<std::pair<int, int>> edges(const Mesh& m) {
  std::vector<std::pair<int, int>> out;
  out.reserve(m.triangles.size() * 3 / 2 + m.vertices.size());
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      if (a < b) out.emplace_back(a, b);
      else out.emplace_back(b, a);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// interpolation
// ---------------------------------------------------------------------------

namespace {

struct Locator {
  const Mesh& m;
  std::unordered_map<std::int64_t, int> neighbor;  // directed edge -> triangle

  static std::int64_t key(int a, int b) {
    return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }

  explicit Locator(const Mesh& mesh) : m(mesh) {
    for (int ti = 0; ti < static_cast<int>(m.triangles.size()); ++ti) {
      const auto& t = m.triangles[ti];
      for (int e = 0; e < 3; ++e) neighbor[key(t[e], t[(e + 1) % 3])] = ti;
    }
  }

  // barycentric coordinates of p in triangle ti
  std::array<double, 3> bary(int ti, Vec2 p) const {
    const auto& t = m.triangles[ti];
    const Vec2 a = m.vertices[t[0]], b = m.vertices[t[1]], c = m.vertices[t[2]];
    const double d = cross(b - a, c - a);
    const double l1 = cross(b - p, c - p) / d;
    const double l2 = cross(c - p, a - p) / d;
    return {l1, l2, 1.0 - l1 - l2};
  }

  int locate(Vec2 p, int start) const {
    int ti = start;
    for (int step = 0; step < static_cast<int>(m.triangles.size()) + 8; ++step) {
      const auto l = bary(ti, p);
      int worst = 0;
      for (int i = 1; i < 3; ++i)
        if (l[i] < l[worst]) worst = i;
      if (l[worst] >= -1e-12) return ti;
      // step across the edge opposite to the most negative coordinate
      const auto& t = m.triangles[ti];
      const int a = t[(worst + 1) % 3], b = t[(worst + 2) % 3];
      auto it = neighbor.find(key(b, a));
      if (it == neighbor.end()) return -1;
      ti = it->second;
    }
    return -1;
  }
};

}  // namespace

std::vector<double> interpolate(const Mesh& from, std::span<const double> values,
                                std::span<const Vec2> points) {
  if (values.size() != from.vertices.size())
    fail(errc::invalid_argument, "interpolate: values size mismatch");
  Locator loc(from);
  std::vector<double> out(points.size());
  int start = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    int ti = loc.locate(points[i], start);
    if (ti < 0) {
      // walk can exit through a boundary notch; fall back to a full scan
      double best = -1e300;
      for (int t = 0; t < static_cast<int>(from.triangles.size()); ++t) {
        const auto l = loc.bary(t, points[i]);
        const double m = std::min({l[0], l[1], l[2]});
        if (m > best) {
          best = m;
          ti = t;
        }
      }
      if (best < -1e-9) fail(errc::point_outside, "interpolate: point outside the mesh");
    }
    start = ti;
    const auto l = loc.bary(ti, points[i]);
    const auto& t = from.triangles[ti];
    out[i] = l[0] * values[t[0]] + l[1] * values[t[1]] + l[2] * values[t[2]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

nlohmann::json to_json(const Mesh& m) {
  nlohmann::json j;
  j["h"] = m.h;
  j["half"] = m.half;
  auto& jv = j["vertices"] = nlohmann::json::array();
  for (const auto& v : m.vertices) jv.push_back({v.x, v.y});
  auto& jt = j["triangles"] = nlohmann::json::array();
  for (const auto& t : m.triangles) jt.push_back({t[0], t[1], t[2]});
  auto& jb = j["boundary"] = nlohmann::json::array();
  for (const auto& b : m.boundary)
    jb.push_back({b.a, b.b, b.marker == BoundaryMarker::gamma_dirichlet ? "dirichlet" : "neumann"});
  if (m.spec) {
    j["spec"]["kind"] = geometry::kind_name(m.spec->kind);
    j["spec"]["param"] = m.spec->param;
  }
  return j;
}

Mesh from_json(const nlohmann::json& j) {
  Mesh m;
  try {
    m.h = j.at("h").get<double>();
    m.half = j.value("half", false);
    for (const auto& v : j.at("vertices"))
      m.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    for (const auto& t : j.at("triangles"))
      m.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    for (const auto& b : j.at("boundary")) {
      const std::string marker = b.at(2).get<std::string>();
      if (marker != "neumann" && marker != "dirichlet")
        fail(errc::io_error, "mesh json: unknown boundary marker " + marker);
      m.boundary.push_back({b.at(0).get<int>(), b.at(1).get<int>(),
                            marker == "dirichlet" ? BoundaryMarker::gamma_dirichlet
                                                  : BoundaryMarker::gamma_neumann});
    }
    if (j.contains("spec")) {
      const std::string kind = j["spec"].at("kind").get<std::string>();
      const double param = j["spec"].value("param", 0.0);
      if (kind == "TriangleT0") m.spec = DomainSpec::triangle();
      else if (kind == "OmegaT") m.spec = DomainSpec::omega(param);
      else if (kind == "LevelSetF0") m.spec = DomainSpec::level_set(param);
      else if (kind == "RoundedTriangle") m.spec = DomainSpec::rounded(param);
      else fail(errc::io_error, "mesh json: unknown spec kind " + kind);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(errc::io_error, std::string("mesh json: ") + e.what());
  }

  // invariants
  const int nv = static_cast<int>(m.vertices.size());
  for (const auto& t : m.triangles) {
    for (int i : t)
      if (i < 0 || i >= nv) fail(errc::io_error, "mesh json: triangle index out of range");
    const double a2 =
        cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
    if (!(a2 > 0.0)) fail(errc::io_error, "mesh json: non-positive triangle area");
  }
  std::map<std::pair<int, int>, int> dir;
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e) dir[{t[e], t[(e + 1) % 3]}]++;
  std::map<std::pair<int, int>, int> expected;
  for (const auto& [edge, cnt] : dir) {
    if (cnt > 1) fail(errc::io_error, "mesh json: non-manifold edge");
    if (!dir.count({edge.second, edge.first})) expected[edge] = 1;
  }
  std::map<int, int> outdeg;
  for (const auto& b : m.boundary) {
    if (b.a < 0 || b.a >= nv || b.b < 0 || b.b >= nv)
      fail(errc::io_error, "mesh json: boundary index out of range");
    if (!expected.count({b.a, b.b}))
      fail(errc::io_error, "mesh json: boundary edge not on the triangulation boundary");
    outdeg[b.a]++;
  }
  if (m.boundary.size() != expected.size())
    fail(errc::io_error, "mesh json: boundary does not cover the triangulation boundary");
  for (const auto& [v, d] : outdeg)
    if (d != 1) fail(errc::io_error, "mesh json: boundary is not a union of simple loops");
  if (m.spec) {
    // boundary vertices of curved edges must satisfy the level-set equation
    for (const auto& b : m.boundary) {
      if (b.marker != BoundaryMarker::gamma_neumann) continue;
      for (int v : {b.a, b.b}) {
        const double theta = std::atan2(m.vertices[v].y, m.vertices[v].x);
        const double rr = geometry::rho(*m.spec, theta);
        if (std::abs(norm(m.vertices[v]) - rr) > 1e-9)
          fail(errc::io_error, "mesh json: boundary vertex off the exact boundary");
      }
    }
  }
  return m;
}

}  // namespace ecplab::mesh
