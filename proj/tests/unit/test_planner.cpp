#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "edgeckpt/error.hpp"
#include "edgeckpt/planner.hpp"
#include "edgeckpt/tables.hpp"

using namespace edgeckpt;

TEST_CASE("chain profile peak occupancy") {
  for (int l : {2, 3, 18, 34, 50}) {
    const ChainProfile profile(l);
    CHECK(profile.max_slots() == l - 1);
    CHECK(profile.peak_live(l - 1) == l);  // full storage
    CHECK(profile.peak_live(1) == 2);
    for (int c = 2; c <= profile.max_slots(); ++c) {
      CHECK(profile.peak_live(c) >= profile.peak_live(c - 1));
      CHECK(profile.peak_live(c) <= c + 1);
    }
  }
  CHECK(ChainProfile(1).peak_live(1) == 2);
}

TEST_CASE("sweep endpoints") {
  SweepConfig config;
  config.variants = {builtin_params(18), builtin_params(152)};
  config.rho_grid = {1.0, 1.5, 3.0, 100.0};
  const auto curves = sweep(config);
  REQUIRE(curves.size() == 2);

  const auto& r18 = curves[0].points.front();
  CHECK(r18.slots == 17);
  CHECK(r18.peak_live == 18);
  CHECK(r18.peak_mb == memory_total(builtin_params(18), 1, 224));
  CHECK(r18.peak_mb == doctest::Approx(230.05).epsilon(1e-4));
  CHECK(r18.feasible);

  const auto& r152 = curves[1].points.front();
  CHECK(r152.peak_mb == doctest::Approx(1410.62).epsilon(1e-4));
  CHECK(r152.feasible);
}

TEST_CASE("sweep approaches one slot at large rho") {
  const auto p = builtin_params(18);
  SweepConfig config;
  config.variants = {p};
  config.batch = 8;
  config.image = 500;
  config.rho_grid = {1.0, 2.0, 50.0};
  const auto curve = sweep(config).front();
  const auto& last = curve.points.back();
  CHECK(last.slots == 1);
  CHECK(last.peak_live == 2);
  CHECK(last.peak_mb == doctest::Approx(p.weight_mb + 2 * 8 * p.per_layer_act(500)));
  CHECK_FALSE(curve.points.front().feasible);
}

TEST_CASE("sweep curves are monotone") {
  for (int k : {1, 8}) {
    for (int w : {224, 500}) {
      SweepConfig config;
      config.variants = builtin_params();
      config.batch = k;
      config.image = w;
      for (const auto& curve : sweep(config)) {
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
          CHECK(curve.points[i].peak_mb <= curve.points[i - 1].peak_mb);
          CHECK(curve.points[i].slots <= curve.points[i - 1].slots);
        }
      }
    }
  }
}

TEST_CASE("sweep config validation") {
  SweepConfig config;
  config.variants = {builtin_params(18)};
  config.rho_grid = {};
  CHECK_THROWS_AS(sweep(config), Error);
  config.rho_grid = {0.9, 1.2};
  CHECK_THROWS_AS(sweep(config), Error);
  config.rho_grid = {1.2, 1.2};
  CHECK_THROWS_AS(sweep(config), Error);
  config.rho_grid = {1.0};
  config.backward_ratio = 0.0;
  CHECK_THROWS_AS(sweep(config), Error);
  config.backward_ratio = 1.0;
  config.variants = {ModelParams{}};
  CHECK_THROWS_AS(sweep(config), Error);

  const auto grid = default_rho_grid();
  CHECK(grid.size() == 41);
  CHECK(grid.front() == 1.0);
  CHECK(grid.back() == doctest::Approx(3.0));
}

TEST_CASE("rho_threshold examples") {
  const DeviceBudget two_gb;
  CHECK(rho_threshold(builtin_params(18), 1, 224, two_gb, 1.0) == 1.0);

  const double r152 = rho_threshold(builtin_params(152), 8, 500, two_gb, 1.0);
  CHECK(r152 >= 1.4);
  CHECK(r152 <= 2.2);

  try {
    rho_threshold(builtin_params(152), 50, 1500, DeviceBudget(16.0), 1.0);
    FAIL("expected never-fits");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNeverFits);
  }
}

TEST_CASE("rho_threshold is the first feasible grid point") {
  const DeviceBudget two_gb;
  for (const auto& p : builtin_params()) {
    for (double b : {1.0, 2.0}) {
      const double star = rho_threshold(p, 8, 500, two_gb, b);
      SweepConfig config;
      config.variants = {p};
      config.batch = 8;
      config.image = 500;
      config.backward_ratio = b;
      config.rho_grid = default_rho_grid();
      config.rho_grid.push_back(star);
      std::sort(config.rho_grid.begin(), config.rho_grid.end());
      config.rho_grid.erase(std::unique(config.rho_grid.begin(), config.rho_grid.end()),
                            config.rho_grid.end());
      const auto curve = sweep(config).front();
      double first_feasible = -1;
      for (const auto& pt : curve.points) {
        if (pt.feasible) {
          first_feasible = pt.rho;
          break;
        }
      }
      CHECK(first_feasible == star);
    }
  }
}

TEST_CASE("feasibility report reproduces no-checkpointing shading") {
  const auto params = builtin_params();
  const DeviceBudget two_gb;
  std::vector<Scenario> scenarios;
  for (int k : {1, 3, 5, 10, 30, 50}) scenarios.push_back({k, 224});
  const std::vector<double> rhos = {1.0, 2.0};
  const auto rows = feasibility_report(params, two_gb, scenarios, rhos);
  REQUIRE(rows.size() == 30);
  for (const auto& row : rows) {
    const auto cell = find_cell(row.variant, row.batch, row.image);
    REQUIRE(cell);
    CHECK(row.fits_without_checkpointing == !cell->shaded());
    CHECK(row.full_mb == memory_total(builtin_params(row.variant), row.batch, row.image));
    REQUIRE(row.slots_at_rho.size() == 2);
    CHECK(row.slots_at_rho[0].second == row.depth - 1);
    if (row.fits_without_checkpointing) {
      CHECK(row.rho_star == 1.0);
    }
  }

  std::vector<Scenario> t3;
  for (int w : {224, 350, 500, 650}) t3.push_back({8, w});
  for (const auto& row : feasibility_report(params, two_gb, t3)) {
    const auto cell = find_cell(row.variant, row.batch, row.image);
    REQUIRE(cell);
    CHECK(row.fits_without_checkpointing == !cell->shaded());
  }

  CHECK(feasibility_report(params, two_gb, std::vector<Scenario>{}).empty());
}

TEST_CASE("sweep CSV layout") {
  SweepConfig config;
  config.variants = {builtin_params(18)};
  config.rho_grid = {1.0, 2.0};
  const auto curves = sweep(config);
  std::ostringstream out;
  write_sweep_csv(out, curves);
  CHECK(out.str() ==
        "variant,depth,batch,image,rho,slots,peak_live,peak_mb,feasible\n"
        "18,18,1,224,1.00,17,18,230.05,1\n"
        "18,18,1,224,2.00,3,4,187.27,1\n");
}
