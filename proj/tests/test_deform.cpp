#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include <nlohmann/json.hpp>

#include "ecplab/deform.hpp"
#include "ecplab/fem.hpp"

using namespace ecplab;
using namespace ecplab::deform;

TEST_CASE("config validation") {
  DeformConfig ok;
  CHECK_NOTHROW(ok.validate());

  DeformConfig empty;
  empty.t_grid.clear();
  CHECK_THROWS_AS(empty.validate(), Error);

  DeformConfig ascending;
  ascending.t_grid = {0.1, 0.2};
  CHECK_THROWS_AS(ascending.validate(), Error);

  DeformConfig bad_s0;
  bad_s0.s0 = 2.5;
  CHECK_THROWS_AS(bad_s0.validate(), Error);

  DeformConfig big_k;
  big_k.compact_radius = 0.3;  // above 0.9 * inradius of T0
  CHECK_THROWS_AS(big_k.validate(), Error);

  CHECK(ok.q0() == doctest::Approx(0.5));
  CHECK(ok.p0() == doctest::Approx(4.0));
}

TEST_CASE("config json round trip") {
  DeformConfig cfg;
  cfg.t_grid = {0.2, 0.1};
  cfg.h = 0.09;
  cfg.offset_steps = 60;
  const auto j = config_to_json(cfg);
  const DeformConfig back = config_from_json(j);
  CHECK(back.t_grid == cfg.t_grid);
  CHECK(back.h == cfg.h);
  CHECK(back.offset_steps == cfg.offset_steps);

  nlohmann::json bad = j;
  bad["t_grid"] = "nope";
  CHECK_THROWS_AS(config_from_json(bad), Error);
}

TEST_CASE("thread budget respects the environment cap") {
  setenv("ECPLAB_THREADS", "2", 1);
  CHECK(thread_budget(8, 16) == 2);
  CHECK(thread_budget(1, 16) == 1);
  unsetenv("ECPLAB_THREADS");
  CHECK(thread_budget(3, 16) == 3);
  CHECK(thread_budget(3, 2) == 2);
}

TEST_CASE("a coarse ecp run finds the three-domain window") {
  DeformConfig cfg;
  cfg.t_grid = {0.1};
  cfg.h = 0.08;
  cfg.levels = 2;
  cfg.offset_steps = 80;
  cfg.threads = 1;
  const DeformReport rep = run_ecp(cfg);
  REQUIRE(rep.rows.size() == 1);
  const auto& row = rep.rows[0];
  CHECK(row.t == 0.1);
  CHECK(row.d_r > 0.0);
  REQUIRE(row.window.has_value());
  CHECK(row.beta0_mid == 3);
  CHECK(row.n_positive_mid == 1);
  CHECK(row.n_negative_mid == 2);
  CHECK(row.negatives_mirrored);
  CHECK(row.chord_positive);
  CHECK(row.probes_negative);
  CHECK(row.sign_ok);
  CHECK(row.gladwell_zhu_ok);
  CHECK(row.polya_ok);
  CHECK(row.count_stable_eps);
  CHECK(row.window_overlap > 0.4);
  CHECK(row.localization_ok);  // the closed form localizes the sign sets at t <= 0.1

  // the t=0 baseline window exists and its midpoint still works at this t
  REQUIRE(rep.window_t0.has_value());
  CHECK(row.t0_offset_in_window);
}

TEST_CASE("continuity columns on a tiny grid") {
  DeformConfig cfg;
  cfg.t_grid = {0.3, 0.1};
  cfg.h = 0.1;
  cfg.levels = 3;
  cfg.threads = 1;
  const DeformReport rep = run_continuity(cfg);
  REQUIRE(rep.rows.size() == 2);
  // rows ascend in t and the difference to T0 grows with t
  CHECK(rep.rows[0].t < rep.rows[1].t);
  CHECK(rep.rows[0].nu_diff_to_t0 < rep.rows[1].nu_diff_to_t0);
  for (const auto& r : rep.rows) {
    CHECK(r.nu_gap / r.nu_plus < 1e-6);
    CHECK(r.nu_plus < rep.nu_plus_t0);
  }
  CHECK(rep.fitted_exponent > 0.0);
  const auto j = report_to_json(rep);
  CHECK(j.contains("rows"));
  CHECK(j["rows"].size() == 2);
  CHECK(j.contains("fitted_exponent"));
}

TEST_CASE("rounded triangle pipeline") {
  const RoundedReport rep = run_rounded_triangle(0.1, 0.05, 120);
  REQUIRE(rep.window.has_value());
  CHECK(rep.beta0_mid == 3);
  CHECK(rep.beta0_at_small_a == 2);
  CHECK(rep.nu2 > 0.0);
}

TEST_CASE("vanishing corner radius approaches the triangle eigenvalue") {
  const RoundedReport small = run_rounded_triangle(0.02, 0.04, 40);
  fem::SolveOptions o;
  o.k = 2;
  const auto plus = fem::nu_plus(ecplab::mesh::generate(
      ecplab::geometry::DomainSpec::triangle(), 0.04, true), o);
  CHECK(std::abs(small.nu2 - plus.value) / plus.value < 0.01);
}
