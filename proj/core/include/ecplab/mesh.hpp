#pragma once

// Conforming G0-symmetric triangulations. A fundamental 1/6-wedge of the
// domain is meshed by a mapped structured fan and unfolded by the group, so
// that G0 acts on the full mesh by exact vertex permutations and the mesh is
// bit-exactly mirror symmetric about {u=0}.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ecplab/geometry.hpp"

namespace ecplab::mesh {

using geometry::DomainSpec;
using geometry::Element;
using geometry::Vec2;

enum class BoundaryMarker : std::uint8_t { gamma_neumann, gamma_dirichlet };

struct BoundaryEdge {
  int a = 0, b = 0;  // directed so the domain lies on the left
  BoundaryMarker marker = BoundaryMarker::gamma_neumann;
};

// classification of a wedge vertex relative to the bounding mirror rays
enum class Ray : std::uint8_t { none = 0, lower = 1, upper = 2, origin = 3 };

struct SectorData {
  std::vector<Vec2> vertices;  // wedge coordinates, theta in [-pi/6, pi/6]
  std::vector<std::array<int, 3>> triangles;  // CCW
  std::vector<Ray> ray;
  std::vector<int> outer;  // outer-ring vertex chain, lower ray to upper ray
};

struct VertexOwner {
  std::uint8_t image = 0;  // index into Mesh::images
  int sector_index = 0;
};

struct Quality {
  double min_angle_deg = 0.0;
  double max_h = 0.0;
  int n_vertices = 0;
  int n_triangles = 0;
};

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW
  std::vector<BoundaryEdge> boundary;
  double h = 0.0;
  bool half = false;
  std::optional<DomainSpec> spec;

  // unfolding structure; empty for meshes loaded from JSON
  std::vector<Element> images;
  std::vector<VertexOwner> owners;
  SectorData sector;

  // vertex permutations, one per group element; full symmetric meshes only
  std::array<std::vector<int>, geometry::kGroupOrder> group_perm;

  bool has_group_tables() const { return !group_perm[0].empty(); }
  bool has_sector() const { return !sector.vertices.empty(); }
  const std::vector<int>& perm(Element g) const;
};

// Structured mesh of `spec` with nominal edge length h. With half=true only
// the three wedges covering {u >= 0} are instantiated and the edges on {u=0}
// are marked GammaDirichlet (the solver applies the marker per boundary
// condition).
Mesh generate(const DomainSpec& spec, double h, bool half = false);

// Uniform 4-split. New boundary midpoints are re-projected onto the exact
// boundary along the ray from the origin; symmetry tables are rebuilt.
Mesh refine(const Mesh& m);

Quality quality(const Mesh& m);

double area(const Mesh& m);

// unique undirected edges
std::vector<std::pair<int, int>> edges(const Mesh& m);

// P1 interpolation at arbitrary interior points (point location by walking)
std::vector<double> interpolate(const Mesh& from, std::span<const double> values,
                                std::span<const Vec2> points);

nlohmann::json to_json(const Mesh& m);
Mesh from_json(const nlohmann::json& j);  // validates invariants on load

}  // namespace ecplab::mesh
