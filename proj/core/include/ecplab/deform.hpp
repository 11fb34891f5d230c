#pragma once

// Deformation experiments along the family Omega_t: eigenvalue continuity in
// d_r, eigenfunction convergence on a central compact, and the
// three-nodal-domain verification for phi_t + a.

#include <array>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ecplab/fem.hpp"
#include "ecplab/nodal.hpp"

namespace ecplab::deform {

struct DeformConfig {
  std::vector<double> t_grid{0.3, 0.2, 0.1, 0.05};  // descending
  double h = 0.037;   // base mesh size; levels h, h/2, ..., h/2^(levels-1)
  int levels = 3;
  double s0 = 1.5;    // q0 = s0 - 1, p0 = 2/(2 - s0), reported for context
  double compact_radius = 0.2;  // radius of the compact K about the origin
  double eps_loc_frac = 0.1;    // localization epsilon as fraction of max|phi|
  int offset_steps = 200;
  std::array<double, 3> count_eps{1e-12, 1e-10, 1e-8};
  int dr_grid = 1024;
  int threads = 0;  // 0: hardware, always capped by ECPLAB_THREADS

  double q0() const { return s0 - 1.0; }
  double p0() const { return 2.0 / (2.0 - s0); }
  void validate() const;
};

struct DeformRow {
  double t = 0.0;
  double d_r = 0.0;
  // Richardson-extrapolated values and the per-level raw values
  double nu_plus = 0.0, nu_minus = 0.0;
  std::vector<double> nu_plus_levels, nu_minus_levels;
  double nu_gap = 0.0;           // |nu+ - nu-|
  double nu_diff_to_t0 = 0.0;    // |nu+(t) - nu+(T0)|
  double sup_k = 0.0;            // sup over K of |phi_t - phi0|
  double sign_dot = 0.0;         // <phi_t, phi0>_M on the full mesh
  bool sign_ok = false;
  std::optional<std::array<double, 2>> window;         // finest mesh
  std::optional<std::array<double, 2>> window_coarse;  // one refinement below
  double window_overlap = 0.0;   // relative overlap of the two windows
  int beta0_mid = 0;
  int n_positive_mid = 0, n_negative_mid = 0;
  bool negatives_mirrored = false;
  bool chord_positive = false;     // phi_t + a > 0 near the bisector chord [C C(t)]
  bool probes_negative = false;    // probe points near A and B in distinct negative parts
  bool localization_ok = false;    // {phi0 + a <= -eps} inside {phi_t + a < 0}, and + side
  bool count_stable_eps = false;
  bool count_stable_refine = false;
  bool t0_offset_in_window = false;  // reported: the T0 window midpoint lies in this row's window
  bool gladwell_zhu_ok = false;
  double delta1 = 0.0;             // first Dirichlet eigenvalue (raw, finest mesh)
  bool polya_ok = false;           // nu2 < delta1
};

struct DeformReport {
  DeformConfig cfg;
  // T0 baseline
  double nu_plus_t0 = 0.0, nu_minus_t0 = 0.0;
  std::vector<double> nu_plus_t0_levels;
  double disc_err_nu = 0.0;   // |finest raw - extrapolated| for nu+(T0)
  double sup_k_t0 = 0.0;      // t=0 row: pure discretization error of the phi pipeline
  std::optional<std::array<double, 2>> window_t0;
  std::vector<DeformRow> rows;  // sorted by ascending t
  double fitted_exponent = 0.0;  // log-log slope of |nu+(t)-nu+(T0)| vs d_r
};

// eigenvalue-continuity columns only
DeformReport run_continuity(const DeformConfig& cfg);
// eigenfunction sup-distance columns only
DeformReport run_convergence(const DeformConfig& cfg);
// window detection, nodal counts and the localization checks
DeformReport run_ecp(const DeformConfig& cfg);
// everything in one sweep
DeformReport run_all(const DeformConfig& cfg);

struct RoundedReport {
  double corner_radius = 0.0;
  double h = 0.0;
  double nu2 = 0.0;  // second Neumann eigenvalue, symmetric sector (raw, finest)
  std::optional<std::array<double, 2>> window;
  int beta0_mid = 0;
  int beta0_at_small_a = 0;  // expected 2 below the window
};

RoundedReport run_rounded_triangle(double corner_radius, double h, int offsets);

nlohmann::json report_to_json(const DeformReport& rep);
std::vector<std::vector<double>> report_to_csv_rows(const DeformReport& rep);
std::vector<std::string> report_csv_header();
std::string report_summary(const DeformReport& rep);

DeformConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const DeformConfig& cfg);

// worker-pool width: explicit request capped by ECPLAB_THREADS and job count
int thread_budget(int requested, int jobs);

}  // namespace ecplab::deform
