#pragma once

// Optimal binomial checkpointing for a homogeneous chain.
//
// t(l, c) is the fewest advances that reverse l steps with c slots (x_0 is
// held in one of them). Splitting after the first j steps gives
//
//   t(l, c) = min_{1 <= j < l} [ j + t(l - j, c - 1) + t(j, c) ],
//   t(1, c) = 0,  t(l > 1, 0) = infinity,
//
// which agrees with the closed form r*l - beta(c + 1, r - 1), where r is the
// smallest repetition count with beta(c, r) >= l.

#include <cstdint>
#include <vector>

#include "edgeckpt/chain.hpp"

namespace edgeckpt {

/// C(c + r, r): the longest chain reversible with c slots when no step is
/// advanced more than r times. Throws kOverflow instead of wrapping.
std::int64_t beta(int c, int r);

/// Memoised t(l, c) and its smallest-j argmin for l <= max_length,
/// c <= max_slots. Immutable after construction.
class DpTable {
 public:
  DpTable(int max_length, int max_slots);

  int max_length() const noexcept { return max_length_; }
  int max_slots() const noexcept { return max_slots_; }

  /// Slot counts above l - 1 are treated as l - 1. Throws kInfeasible for
  /// c == 0 with l > 1.
  std::int64_t min_advances(int length, int slots) const;

  /// Number of steps advanced before the first store; 0 when length == 1.
  int split(int length, int slots) const;

 private:
  int effective_slots(int length, int slots) const;
  std::size_t at(int length, int slots) const {
    return static_cast<std::size_t>(length) * (max_slots_ + 1) + slots;
  }

  int max_length_;
  int max_slots_;
  std::vector<std::int64_t> cost_;
  std::vector<int> split_;
};

std::int64_t min_advances(int length, int slots);

std::int64_t closed_form_advances(int length, int slots);

/// Recursive schedule following the DP argmin. execute() on the result is
/// legal, uses exactly min_advances(l, c) advances and at most c slots.
Schedule revolve_schedule(int length, int slots);
Schedule revolve_schedule(const DpTable& table, int length, int slots);

/// Forward plus backward work when reversing with `advances` advances:
/// (l + extra) + b*l with extra = advances - (l - 1).
double schedule_time(int length, std::int64_t advances, double backward_ratio);

/// Work of the no-checkpointing run, (1 + b) * l.
double baseline_time(int length, double backward_ratio);

/// time <= rho * baseline, with a 1e-12 relative slack for rounding.
bool within_budget(double time, double rho, double baseline);

/// Smallest c >= 1 whose optimal schedule stays within rho times the
/// no-checkpointing work. Binary search over c in [1, max(1, l - 1)].
/// Throws kInfeasibleBudget when even full storage exceeds the budget.
int min_slots_for_rho(int length, double rho, double backward_ratio = 1.0);
int min_slots_for_rho(const DpTable& table, int length, double rho,
                      double backward_ratio = 1.0);

}  // namespace edgeckpt
