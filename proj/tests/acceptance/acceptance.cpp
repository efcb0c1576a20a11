// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "edgeckpt/chain.hpp"
#include "edgeckpt/cost_model.hpp"
#include "edgeckpt/error.hpp"
#include "edgeckpt/planner.hpp"
#include "edgeckpt/revolve.hpp"
#include "edgeckpt/tables.hpp"
#include "edgeckpt/uniform.hpp"

namespace {

using namespace edgeckpt;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records the first few failures; later ones only flip the verdict.
  template <typename... Ts>
  void fail(const Ts&... parts) {
    if (failures++ < 3) {
      if (failures > 1) detail << "; ";
      (detail << ... << parts);
    }
    pass = false;
  }
  int failures = 0;
};

double relative_error(const TableCell& cell) {
  const auto p = builtin_params(cell.sample.variant);
  double predicted = memory_total(p, cell.sample.batch, cell.sample.image);
  if (cell.unit == PublishedUnit::kGigabytes) predicted /= 1024.0;
  return std::abs(predicted - cell.published) / cell.published;
}

void table_accuracy(Outcome& o, std::initializer_list<int> tables) {
  double worst = 0.0;
  std::string worst_at;
  int cells = 0;
  for (int t : tables) {
    for (const auto& cell : table_cells(t)) {
      ++cells;
      const double rel = relative_error(cell);
      const auto& s = cell.sample;
      const std::string at = "T" + std::to_string(t) + " R" + std::to_string(s.variant) + " k=" +
                             std::to_string(s.batch) + " w=" + std::to_string(s.image);
      if (rel > worst) {
        worst = rel;
        worst_at = at;
      }
      if (rel > table_tolerance(t)) {
        o.fail(at, " off by ", 100.0 * rel, "%");
      }
    }
  }
  if (o.pass) {
    o.detail << cells << " cells, worst " << 100.0 * worst << "% at " << worst_at;
  } else {
    o.detail << " (" << o.failures << " of " << cells << " cells over tolerance)";
  }
}

// 1. Table 1 within 0.5%.
void criterion1(Outcome& o) { table_accuracy(o, {1}); }

// 2. Tables 2 and 3 within 2% under (w/224)^2 scaling.
void criterion2(Outcome& o) { table_accuracy(o, {2, 3}); }

// 3. Shading at 2048 MB matches every published flag.
void criterion3(Outcome& o) {
  const DeviceBudget two_gb;
  int cells = 0;
  for (const auto& cell : builtin_tables()) {
    ++cells;
    const auto& s = cell.sample;
    const bool shaded = !fits(builtin_params(s.variant), s.batch, s.image, two_gb);
    if (shaded != cell.shaded()) {
      o.fail("T", cell.table, " R", s.variant, " k=", s.batch, " w=", s.image);
    }
  }
  if (o.pass) o.detail << cells << " cells, 0 mismatches";
}

// 4. Uniform memory formula equals the replayed peak; optimum >= 2*sqrt(l) - 1.
void criterion4(Outcome& o) {
  int replays = 0;
  for (int l = 2; l <= 200; ++l) {
    for (int s = 2; s <= l; ++s) {
      const auto stats = execute(uniform_schedule(l, s));
      ++replays;
      if (!stats.legal) {
        o.fail("l=", l, " s=", s, " illegal");
      } else if (stats.peak_live != uniform_memory(l, s)) {
        o.fail("l=", l, " s=", s, " peak ", stats.peak_live, " vs ", uniform_memory(l, s));
      }
    }
  }
  int tight = 0;
  for (int l = 2; l <= 10000; ++l) {
    const auto best = uniform_min_memory(l);
    const double bound = 2.0 * std::sqrt(static_cast<double>(l)) - 1.0;
    if (best.memory_units < bound) {
      o.fail("l=", l, " min ", best.memory_units, " < ", bound);
    }
    if (best.memory_units < 2.0 * std::sqrt(static_cast<double>(l))) ++tight;
  }
  if (o.pass) {
    o.detail << replays << " replays exact; bound holds for l<=10000 (" << tight
             << " lengths fall below 2*sqrt(l))";
  }
}

// 5. DP equals brute force (l<=10, c<=4) and the closed form (l<=500, c<=20).
void criterion5(Outcome& o) {
  int brute = 0;
  for (int l = 1; l <= kBruteForceMaxLength; ++l) {
    for (int c = 1; c <= kBruteForceMaxSlots; ++c) {
      ++brute;
      const auto dp = min_advances(l, c);
      const auto bf = brute_force_min_advances(l, c);
      if (dp != bf) o.fail("l=", l, " c=", c, " dp ", dp, " brute ", bf);
    }
  }
  const DpTable table(500, 20);
  for (int l = 1; l <= 500; ++l) {
    for (int c = 1; c <= 20; ++c) {
      const auto dp = table.min_advances(l, c);
      const auto cf = closed_form_advances(l, c);
      if (dp != cf) o.fail("l=", l, " c=", c, " dp ", dp, " closed ", cf);
    }
  }
  if (o.pass) o.detail << brute << " brute-force pairs, 10000 closed-form pairs";
}

// 6. Random revolve schedules replay at the DP optimum within c slots.
void criterion6(Outcome& o) {
  std::mt19937 rng(20240601);
  const DpTable table(152, 151);
  for (int trial = 0; trial < 200; ++trial) {
    const int l = std::uniform_int_distribution<int>(2, 152)(rng);
    const int c = std::uniform_int_distribution<int>(1, l - 1)(rng);
    const auto stats = execute(revolve_schedule(table, l, c));
    if (!stats.legal) {
      o.fail("l=", l, " c=", c, " illegal: ", stats.violation->rule);
    } else if (stats.advances != table.min_advances(l, c)) {
      o.fail("l=", l, " c=", c, " advances ", stats.advances, " vs ", table.min_advances(l, c));
    } else if (stats.peak_slots > c) {
      o.fail("l=", l, " c=", c, " peak_slots ", stats.peak_slots);
    }
  }
  if (o.pass) o.detail << "200 random pairs, seed 20240601";
}

// 7. Curves are monotone, rho=1 is full storage, and batch 8 / image 500
// crosses 2048 MB inside [1.4, 2.2] for b in {1, 2}.
void criterion7(Outcome& o) {
  const auto params = builtin_params();
  const DeviceBudget two_gb;

  for (const auto& cell : builtin_tables()) {
    const auto& s = cell.sample;
    SweepConfig config;
    config.variants = {builtin_params(s.variant)};
    config.batch = s.batch;
    config.image = s.image;
    config.rho_grid = {1.0};
    const auto& point = sweep(config).front().points.front();
    const double full = memory_total(config.variants.front(), s.batch, s.image);
    if (point.peak_mb != full) {
      o.fail("R", s.variant, " k=", s.batch, " w=", s.image, " rho=1 gives ", point.peak_mb,
             " not ", full);
    }
  }

  std::ostringstream joint;
  joint.precision(4);
  for (double b : {1.0, 2.0}) {
    SweepConfig config;
    config.variants = params;
    config.batch = 8;
    config.image = 500;
    config.backward_ratio = b;
    for (const auto& curve : sweep(config)) {
      const auto& pts = curve.points;
      for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].peak_mb > pts[i - 1].peak_mb || pts[i].slots > pts[i - 1].slots) {
          o.fail("R", curve.params.variant, " b=", b, " not monotone at rho=", pts[i].rho);
        }
      }
      if (pts.front().feasible) {
        o.fail("R", curve.params.variant, " b=", b, " already fits at rho=1");
      }
    }

    double worst = 0.0;
    int worst_variant = 0;
    for (const auto& p : params) {
      double star = 0.0;
      try {
        star = rho_threshold(p, 8, 500, two_gb, b);
      } catch (const Error& e) {
        o.fail("R", p.variant, " b=", b, " ", e.what());
        continue;
      }
      if (star > 2.2) o.fail("R", p.variant, " b=", b, " rho*=", star, " > 2.2");
      if (star > worst) {
        worst = star;
        worst_variant = p.variant;
      }
    }
    if (worst < 1.4 || worst > 2.2) {
      o.fail("b=", b, " all-variant rho*=", worst, " outside [1.4, 2.2]");
    }
    joint << (b == 1.0 ? "" : ", ") << "b=" << b << " rho*=" << worst << " (R" << worst_variant
          << ")";
  }
  if (o.pass) o.detail << "80 endpoints exact; " << joint.str();
}

// 8. min_slots_for_rho returns the least slot count within budget.
void criterion8(Outcome& o) {
  for (double b : {1.0, 2.0}) {
    for (int l = 2; l <= 152; ++l) {
      const int c = min_slots_for_rho(l, 1.0, b);
      if (c != l - 1) o.fail("l=", l, " b=", b, " rho=1 gives ", c);
    }
  }
  std::mt19937 rng(8);
  const DpTable table(152, 151);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int l = std::uniform_int_distribution<int>(2, 152)(rng);
    const double rho = std::uniform_real_distribution<double>(1.0, 4.0)(rng);
    const double b = trial % 2 == 0 ? 1.0 : 2.0;
    const double baseline = baseline_time(l, b);
    const auto time = [&](int c) { return schedule_time(l, table.min_advances(l, c), b); };
    const int c = min_slots_for_rho(table, l, rho, b);
    ++checked;
    if (!within_budget(time(c), rho, baseline)) {
      o.fail("l=", l, " rho=", rho, " c=", c, " over budget");
    }
    if (c > 1 && within_budget(time(c - 1), rho, baseline)) {
      o.fail("l=", l, " rho=", rho, " c-1=", c - 1, " also within budget");
    }
  }
  if (o.pass) o.detail << "rho=1 exact for l<=152; " << checked << " random (l, rho) pairs";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<void(Outcome&)> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "table 1 within 0.5%", criterion1},
      {2, "tables 2-3 within 2%", criterion2},
      {3, "shading at 2048 MB", criterion3},
      {4, "uniform formula and 2*sqrt(l)-1 bound", criterion4},
      {5, "revolve DP optimality", criterion5},
      {6, "revolve schedule replay", criterion6},
      {7, "recompute-factor curves", criterion7},
      {8, "min_slots_for_rho contract", criterion8},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    o.detail.precision(4);
    const auto start = std::chrono::steady_clock::now();
    try {
      c.check(o);
    } catch (const std::exception& e) {
      o.fail("exception: ", e.what());
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    failed += o.pass ? 0 : 1;
    std::printf("%s criterion %d: %s [%.2fs] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                took.count(), o.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
