#include "edgeckpt/revolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "edgeckpt/error.hpp"

namespace edgeckpt {
namespace {

constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max() / 4;

void require_chain(int length, int slots) {
  if (length < 1) {
    throw Error(ErrorCode::kInvalidArgument, "chain length must be >= 1");
  }
  if (slots < 0) {
    throw Error(ErrorCode::kInvalidArgument, "slot count must be >= 0");
  }
  if (slots == 0 && length > 1) {
    throw Error(ErrorCode::kInfeasible, "cannot reverse " + std::to_string(length) +
                                            " steps with 0 checkpoint slots");
  }
}

class Emitter {
 public:
  Emitter(const DpTable& table, Schedule& schedule)
      : table_(table), out_(schedule.actions), free_(schedule.slots, true) {
    free_[0] = false;
  }

  void reverse(int base, int length, int slots, int base_slot) {
    if (current_ != base) {
      out_.push_back(Action::restore(base_slot));
      current_ = base;
    }
    if (length == 1) {
      out_.push_back(Action::reverse(base + 1));
      current_ = -1;
      return;
    }
    const int j = table_.split(length, slots);
    for (int i = 1; i <= j; ++i) {
      out_.push_back(Action::advance(base + i));
    }
    current_ = base + j;
    if (length - j == 1) {
      out_.push_back(Action::reverse(base + length));
      current_ = -1;
    } else {
      const int slot = take_slot();
      out_.push_back(Action::store(slot, base + j));
      reverse(base + j, length - j, slots - 1, slot);
      out_.push_back(Action::discard(slot));
      free_[slot] = true;
    }
    reverse(base, j, slots, base_slot);
  }

 private:
  int take_slot() {
    const auto it = std::find(free_.begin(), free_.end(), true);
    *it = false;
    return static_cast<int>(it - free_.begin());
  }

  const DpTable& table_;
  std::vector<Action>& out_;
  std::vector<bool> free_;
  int current_ = 0;
};

}  // namespace

std::int64_t beta(int c, int r) {
  if (c < 0 || r < 0) {
    throw Error(ErrorCode::kInvalidArgument, "beta needs c >= 0 and r >= 0");
  }
  // C(c + r, r) built as prod_{i=1..r} (c + i) / i, exact at every step.
  std::int64_t result = 1;
  for (int i = 1; i <= r; ++i) {
    const std::int64_t g = std::gcd(result, static_cast<std::int64_t>(i));
    const std::int64_t reduced = result / g;
    const std::int64_t factor = (static_cast<std::int64_t>(c) + i) / (i / g);
    if (reduced > std::numeric_limits<std::int64_t>::max() / factor) {
      throw Error(ErrorCode::kOverflow, "beta(" + std::to_string(c) + ", " +
                                            std::to_string(r) + ") exceeds 64 bits");
    }
    result = reduced * factor;
  }
  return result;
}

DpTable::DpTable(int max_length, int max_slots)
    : max_length_(max_length), max_slots_(max_slots) {
  if (max_length < 1 || max_slots < 0) {
    throw Error(ErrorCode::kInvalidArgument, "DP table needs max_length >= 1, max_slots >= 0");
  }
  const std::size_t cells = static_cast<std::size_t>(max_length + 1) * (max_slots + 1);
  cost_.assign(cells, kUnreachable);
  split_.assign(cells, 0);
  for (int c = 0; c <= max_slots; ++c) {
    cost_[at(1, c)] = 0;
  }
  for (int c = 1; c <= max_slots; ++c) {
    for (int l = 2; l <= max_length; ++l) {
      std::int64_t best = kUnreachable;
      int best_j = 0;
      for (int j = 1; j < l; ++j) {
        const std::int64_t right = cost_[at(l - j, c - 1)];
        if (right >= kUnreachable) continue;
        const std::int64_t total = j + right + cost_[at(j, c)];
        if (total < best) {
          best = total;
          best_j = j;
        }
      }
      cost_[at(l, c)] = best;
      split_[at(l, c)] = best_j;
    }
  }
}

int DpTable::effective_slots(int length, int slots) const {
  require_chain(length, slots);
  if (length > max_length_) {
    throw Error(ErrorCode::kInvalidArgument, "length " + std::to_string(length) +
                                                 " is outside the DP table");
  }
  const int c = std::min(slots, std::max(1, length - 1));
  if (c > max_slots_) {
    throw Error(ErrorCode::kInvalidArgument, "slot count " + std::to_string(slots) +
                                                 " is outside the DP table");
  }
  return c;
}

std::int64_t DpTable::min_advances(int length, int slots) const {
  if (length == 1 && slots == 0) return 0;
  return cost_[at(length, effective_slots(length, slots))];
}

int DpTable::split(int length, int slots) const {
  if (length == 1) return 0;
  return split_[at(length, effective_slots(length, slots))];
}

std::int64_t min_advances(int length, int slots) {
  require_chain(length, slots);
  if (length == 1) return 0;
  const int c = std::min(slots, length - 1);
  return DpTable(length, c).min_advances(length, c);
}

std::int64_t closed_form_advances(int length, int slots) {
  require_chain(length, slots);
  if (length == 1) return 0;
  // Step beta(slots, r) -> beta(slots, r + 1) in place; the division is exact.
  int r = 0;
  std::int64_t b = 1;
  while (b < length) {
    b = b * (slots + r + 1) / (r + 1);
    ++r;
  }
  return static_cast<std::int64_t>(r) * length - beta(slots + 1, r - 1);
}

Schedule revolve_schedule(int length, int slots) {
  require_chain(length, slots);
  const int c = std::min(slots, std::max(1, length - 1));
  const DpTable table(length, c);
  return revolve_schedule(table, length, slots);
}

Schedule revolve_schedule(const DpTable& table, int length, int slots) {
  require_chain(length, slots);
  Schedule schedule{length, slots, {}};
  Emitter emitter(table, schedule);
  emitter.reverse(0, length, std::min(slots, std::max(1, length - 1)), 0);
  return schedule;
}

double schedule_time(int length, std::int64_t advances, double backward_ratio) {
  const double l = length;
  const double extra = static_cast<double>(advances - (length - 1));
  return (l + extra) + backward_ratio * l;
}

double baseline_time(int length, double backward_ratio) {
  return (1.0 + backward_ratio) * length;
}

bool within_budget(double time, double rho, double baseline) {
  return time <= rho * baseline * (1.0 + 1e-12);
}

int min_slots_for_rho(int length, double rho, double backward_ratio) {
  if (length < 1) {
    throw Error(ErrorCode::kInvalidArgument, "chain length must be >= 1");
  }
  const DpTable table(length, std::max(1, length - 1));
  return min_slots_for_rho(table, length, rho, backward_ratio);
}

int min_slots_for_rho(const DpTable& table, int length, double rho, double backward_ratio) {
  if (!std::isfinite(rho)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must be finite");
  }
  if (!(backward_ratio > 0.0) || !std::isfinite(backward_ratio)) {
    throw Error(ErrorCode::kInvalidArgument, "backward ratio must be > 0");
  }
  const double baseline = baseline_time(length, backward_ratio);
  const auto ok = [&](int c) {
    return within_budget(schedule_time(length, table.min_advances(length, c), backward_ratio),
                         rho, baseline);
  };
  int lo = 1;
  int hi = std::max(1, length - 1);
  if (!ok(hi)) {
    throw Error(ErrorCode::kInfeasibleBudget,
                "no slot count keeps l=" + std::to_string(length) + " within rho=" +
                    std::to_string(rho));
  }
  // time is non-increasing in c, so the feasible set is [answer, hi].
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace edgeckpt
