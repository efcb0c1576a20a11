#include <random>

#include "doctest.h"
#include "edgeckpt/chain.hpp"
#include "edgeckpt/error.hpp"
#include "edgeckpt/revolve.hpp"

using namespace edgeckpt;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an edgeckpt::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("beta") {
  CHECK(beta(3, 3) == 20);
  for (int c = 0; c < 30; ++c) {
    CHECK(beta(c, 0) == 1);
  }
  for (int r = 0; r < 30; ++r) {
    CHECK(beta(1, r) == r + 1);
  }
  CHECK(beta(8, 3) == 165);
  CHECK(beta(9, 2) == 55);
  // Pascal's rule as an independent check.
  for (int c = 1; c < 25; ++c) {
    for (int r = 1; r < 25; ++r) {
      CHECK(beta(c, r) == beta(c - 1, r) + beta(c, r - 1));
    }
  }
  CHECK(beta(30, 30) == 118264581564861424LL);
  CHECK(code_of([] { beta(40, 40); }) == ErrorCode::kOverflow);
  CHECK(code_of([] { beta(-1, 2); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("min_advances examples") {
  CHECK(min_advances(3, 2) == 2);
  CHECK(min_advances(3, 1) == 3);
  CHECK(min_advances(1, 1) == 0);
  for (int l = 2; l <= 30; ++l) {
    CHECK(min_advances(l, l - 1) == l - 1);
    CHECK(min_advances(l, l + 5) == l - 1);
  }
  CHECK(code_of([] { min_advances(5, 0); }) == ErrorCode::kInfeasible);
}

TEST_CASE("closed form examples") {
  CHECK(closed_form_advances(3, 2) == 2);
  CHECK(closed_form_advances(3, 1) == 3);
  CHECK(closed_form_advances(152, 8) == 401);
  CHECK(min_advances(152, 8) == 401);
}

TEST_CASE("DP agrees with brute force and closed form") {
  for (int l = 1; l <= kBruteForceMaxLength; ++l) {
    for (int c = 1; c <= kBruteForceMaxSlots; ++c) {
      CHECK_MESSAGE(min_advances(l, c) == brute_force_min_advances(l, c),
                    "l=" << l << " c=" << c);
    }
  }
  const DpTable table(200, 20);
  for (int l = 1; l <= 200; ++l) {
    for (int c = 1; c <= 20; ++c) {
      CHECK(table.min_advances(l, c) == closed_form_advances(l, c));
    }
  }
}

TEST_CASE("DP table shape") {
  const DpTable table(120, 119);
  for (int c = 1; c <= 119; ++c) {
    CHECK(table.min_advances(1, c) == 0);
  }
  for (int l = 2; l <= 120; ++l) {
    for (int c = 1; c < 119; ++c) {
      CHECK(table.min_advances(l, c + 1) <= table.min_advances(l, c));
      if (c < l - 1) {
        CHECK(table.min_advances(l, c) > table.min_advances(l - 1, c));
      }
      // Full storage is reached exactly when beta(c, 1) = c + 1 >= l.
      CHECK((table.min_advances(l, c) == l - 1) == (c + 1 >= l));
    }
  }
  CHECK_THROWS_AS(table.min_advances(121, 3), Error);
}

TEST_CASE("revolve_schedule examples") {
  const auto one = revolve_schedule(1, 1);
  CHECK(one.actions == std::vector<Action>{Action::reverse(1)});

  const auto s32 = execute(revolve_schedule(3, 2));
  CHECK(s32.legal);
  CHECK(s32.advances == 2);
  CHECK(s32.peak_slots == 2);

  const auto s103 = execute(revolve_schedule(10, 3));
  CHECK(s103.legal);
  CHECK(s103.advances == min_advances(10, 3));
  CHECK(s103.peak_slots <= 3);

  CHECK(code_of([] { revolve_schedule(5, 0); }) == ErrorCode::kInfeasible);
}

TEST_CASE("revolve_schedule is deterministic") {
  // Smallest-j tie breaking.
  CHECK(format_schedule(revolve_schedule(4, 2)) ==
        "l=4 c=2\n"
        "A 1\nS 1 1\nA 2\nA 3\nB 4\nR 1\nA 2\nB 3\nR 1\nB 2\nD 1\nR 0\nB 1\n");
}

TEST_CASE("revolve schedules replay at the DP optimum") {
  for (int l = 1; l <= 60; ++l) {
    const DpTable table(l, std::max(1, l - 1));
    for (int c = 1; c <= std::max(1, l - 1); ++c) {
      const auto stats = execute(revolve_schedule(table, l, c));
      REQUIRE_MESSAGE(stats.legal, "l=" << l << " c=" << c);
      CHECK(stats.advances == table.min_advances(l, c));
      CHECK(stats.peak_slots <= c);
    }
  }
}

TEST_CASE("min_slots_for_rho examples") {
  for (int l = 2; l <= 40; ++l) {
    CHECK(min_slots_for_rho(l, 1.0, 1.0) == l - 1);
  }
  CHECK(min_slots_for_rho(1, 1.0, 1.0) == 1);
  CHECK(min_slots_for_rho(3, 7.0 / 6.0, 1.0) == 1);

  // Frozen from a linear scan of the closed form.
  CHECK(min_slots_for_rho(152, 1.6, 1.0) == 14);
  CHECK(min_slots_for_rho(152, 1.6, 2.0) == 8);
  CHECK(min_advances(152, 8) - 151 > 182);

  CHECK(code_of([] { min_slots_for_rho(10, 0.9, 1.0); }) == ErrorCode::kInfeasibleBudget);
  CHECK(code_of([] { min_slots_for_rho(10, 1.5, 0.0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("min_slots_for_rho matches a linear scan") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int l = std::uniform_int_distribution<int>(2, 152)(rng);
    const double rho = std::uniform_real_distribution<double>(1.0, 4.0)(rng);
    const double b = trial % 2 == 0 ? 1.0 : 2.0;
    int scan = -1;
    for (int c = 1; c <= l - 1; ++c) {
      const double time = (l + closed_form_advances(l, c) - (l - 1)) + b * l;
      if (time <= rho * (1 + b) * l * (1 + 1e-12)) {
        scan = c;
        break;
      }
    }
    REQUIRE(scan > 0);
    CHECK(min_slots_for_rho(l, rho, b) == scan);
  }
}
