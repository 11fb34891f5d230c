#pragma once

// Nodal analysis of vertex fields: sign partitioning of {phi + a >< 0},
// connected-component counting, level-set extraction and the Courant /
// Gladwell-Zhu bounds.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ecplab/fem.hpp"
#include "ecplab/mesh.hpp"

namespace ecplab::nodal {

using geometry::Vec2;
using mesh::Mesh;

// labels in {-1, 0, +1}; |v + a| <= eps * max|v| is labeled 0
std::vector<std::int8_t> sign_partition(const Mesh& m, std::span<const double> values,
                                        double a, double eps);

struct Component {
  int sign = 0;  // +1 or -1
  int vertex_count = 0;
  double area = 0.0;  // triangles fully inside the component; mixed ones count to none
};

struct NodalReport {
  double a = 0.0;
  double eps = 0.0;
  std::vector<Component> components;
  int beta0 = 0;
  int n_positive = 0;
  int n_negative = 0;
  std::vector<int> component_of_vertex;  // -1 for zero-labeled vertices
};

NodalReport count_nodal_domains(const Mesh& m, std::span<const double> values, double a,
                                double eps = 1e-10);

// true when the D_C permutation maps every component of the report onto a
// component of the same sign (and exchanges the negative pair, if there are
// exactly two negative components)
bool mirror_equivariant(const Mesh& m, const NodalReport& rep);
bool mirror_exchanges_negatives(const Mesh& m, const NodalReport& rep);

// marching-triangles level set {values = c}; open arcs end on the boundary,
// the rest are closed loops
std::vector<std::vector<Vec2>> extract_level_set(const Mesh& m, std::span<const double> values,
                                                 double c);

struct CourantRow {
  int index = 0;  // 1-based eigenvalue index
  double eigenvalue = 0.0;
  int least_index = 0;  // least index of the eigenvalue cluster
  int beta0 = 0;
  bool pass = false;
};

// beta0(phi_k) <= least index of the eigenvalue cluster, clusters resolved by
// a relative gap threshold
std::vector<CourantRow> courant_check(const Mesh& m, const fem::EigenResult& eig,
                                      double cluster_relgap = 1e-3);

struct GladwellZhuRow {
  double a = 0.0;
  int n_positive = 0;
};

// phi_n + a (a > 0) has at most (n-1) positive components
bool gladwell_zhu_check(const Mesh& m, std::span<const double> phi_n, int n,
                        std::span<const double> a_grid,
                        std::vector<GladwellZhuRow>* rows = nullptr);

struct OffsetScanRow {
  double a = 0.0;
  int beta0 = 0;
  int n_positive = 0;
  int n_negative = 0;
};

struct WindowScan {
  std::optional<std::array<double, 2>> window;  // maximal run with (3, 1+, 2-)
  std::vector<OffsetScanRow> rows;
};

// scans n_steps offsets strictly inside (a_min, a_max) and returns the
// maximal contiguous interval where beta0 = 3 with one positive and two
// negative components
WindowScan find_three_domain_window(const Mesh& m, std::span<const double> phi, double a_min,
                                    double a_max, int n_steps, double eps = 1e-10);

}  // namespace ecplab::nodal
