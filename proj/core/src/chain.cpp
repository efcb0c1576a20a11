#include "edgeckpt/chain.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <limits>

#include "edgeckpt/error.hpp"

namespace edgeckpt {
namespace {

constexpr int kNone = -1;

class Simulator {
 public:
  explicit Simulator(const Schedule& schedule)
      : length_(schedule.length),
        slots_(static_cast<std::size_t>(schedule.slots), kNone),
        next_reverse_(schedule.length) {
    slots_[0] = 0;
    occupied_ = 1;
    peak_slots_ = 1;
  }

  // Returns the violated rule, or an empty string.
  std::string step(const Action& a) {
    switch (a.kind) {
      case ActionKind::kAdvance:
        if (a.index < 1 || a.index > length_) return "advance index out of range";
        if (current_ != a.index - 1) return current_mismatch(a.index - 1);
        current_ = a.index;
        ++advances_;
        return {};
      case ActionKind::kStore:
        if (!slot_in_range(a.slot)) return "slot out of range";
        if (slots_[a.slot] != kNone) return "store into occupied slot";
        if (current_ == kNone || current_ != a.index) return "store of a state that is not current";
        slots_[a.slot] = a.index;
        ++occupied_;
        peak_slots_ = std::max(peak_slots_, occupied_);
        return {};
      case ActionKind::kRestore:
        if (!slot_in_range(a.slot)) return "slot out of range";
        if (slots_[a.slot] == kNone) return "restore from empty slot";
        current_ = slots_[a.slot];
        return {};
      case ActionKind::kReverse:
        if (a.index != next_reverse_) {
          return "reverse out of order: expected step " + std::to_string(next_reverse_);
        }
        if (current_ != a.index - 1) return current_mismatch(a.index - 1);
        current_ = kNone;
        --next_reverse_;
        ++reverses_;
        return {};
      case ActionKind::kDiscard:
        if (!slot_in_range(a.slot)) return "slot out of range";
        if (slots_[a.slot] == kNone) return "discard of empty slot";
        slots_[a.slot] = kNone;
        --occupied_;
        return {};
    }
    return "unknown action";
  }

  bool finished() const { return next_reverse_ == 0; }
  int next_reverse() const { return next_reverse_; }
  ExecStats stats() const {
    ExecStats s;
    s.advances = advances_;
    s.reverses = reverses_;
    s.peak_slots = peak_slots_;
    s.peak_live = peak_slots_ + 1;
    return s;
  }

 private:
  bool slot_in_range(int slot) const {
    return slot >= 0 && slot < static_cast<int>(slots_.size());
  }

  std::string current_mismatch(int wanted) const {
    const std::string have = current_ == kNone ? "none" : "x_" + std::to_string(current_);
    return "current state is " + have + ", need x_" + std::to_string(wanted);
  }

  int length_;
  std::vector<int> slots_;
  int occupied_ = 0;
  int current_ = 0;
  int next_reverse_;
  std::int64_t advances_ = 0;
  int reverses_ = 0;
  int peak_slots_ = 0;
};

}  // namespace

std::string to_string(const Action& action) {
  switch (action.kind) {
    case ActionKind::kAdvance: return "A " + std::to_string(action.index);
    case ActionKind::kStore:
      return "S " + std::to_string(action.slot) + ' ' + std::to_string(action.index);
    case ActionKind::kRestore: return "R " + std::to_string(action.slot);
    case ActionKind::kReverse: return "B " + std::to_string(action.index);
    case ActionKind::kDiscard: return "D " + std::to_string(action.slot);
  }
  return "?";
}

ExecStats execute(const Schedule& schedule) {
  if (schedule.length < 1 || schedule.slots < 1) {
    throw Error(ErrorCode::kInvalidArgument, "schedule needs l >= 1 and c >= 1");
  }
  Simulator sim(schedule);
  for (std::size_t p = 0; p < schedule.actions.size(); ++p) {
    if (auto rule = sim.step(schedule.actions[p]); !rule.empty()) {
      auto stats = sim.stats();
      stats.violation = Violation{p, schedule.actions[p], std::move(rule)};
      return stats;
    }
  }
  auto stats = sim.stats();
  if (!sim.finished()) {
    stats.violation = Violation{schedule.actions.size(), std::nullopt,
                                "schedule ends before step " +
                                    std::to_string(sim.next_reverse()) + " is reversed"};
    return stats;
  }
  stats.legal = true;
  return stats;
}

double recompute_factor(const ExecStats& stats, int length, double backward_ratio) {
  if (!stats.legal || stats.reverses != length) {
    throw Error(ErrorCode::kUndefinedFactor, "recompute factor needs a legal replay");
  }
  if (!(backward_ratio > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "backward ratio must be > 0");
  }
  const double l = length;
  const double extra = static_cast<double>(stats.advances - (length - 1));
  return ((l + extra) + backward_ratio * l) / (l + backward_ratio * l);
}

std::int64_t brute_force_min_advances(int length, int slots) {
  if (length < 1 || slots < 1) {
    throw Error(ErrorCode::kInvalidArgument, "oracle needs l >= 1 and c >= 1");
  }
  if (length > kBruteForceMaxLength || slots > kBruteForceMaxSlots) {
    throw Error(ErrorCode::kOracleScope, "brute force is limited to l <= 10 and c <= 4");
  }
  // State: current state index (or none), set of stored indices, next step to
  // reverse. Slot labels are interchangeable, so a bitmask suffices.
  const int states = length + 1;
  const int masks = 1 << states;
  const auto encode = [&](int current, unsigned mask, int next) {
    return ((current + 1) * masks + static_cast<int>(mask)) * states + next;
  };
  const int total = (states + 1) * masks * states;
  std::vector<std::int64_t> dist(static_cast<std::size_t>(total),
                                 std::numeric_limits<std::int64_t>::max());
  struct Node {
    int current;
    unsigned mask;
    int next;
  };
  std::deque<Node> queue;
  const int start = encode(0, 1u, length);
  dist[start] = 0;
  queue.push_back({0, 1u, length});

  while (!queue.empty()) {
    const Node n = queue.front();
    queue.pop_front();
    const std::int64_t d = dist[encode(n.current, n.mask, n.next)];
    if (n.next == 0) {
      return d;
    }
    const auto relax = [&](int current, unsigned mask, int next, int cost) {
      const int key = encode(current, mask, next);
      if (d + cost < dist[key]) {
        dist[key] = d + cost;
        if (cost == 0) {
          queue.push_front({current, mask, next});
        } else {
          queue.push_back({current, mask, next});
        }
      }
    };
    if (n.current != kNone) {
      if (n.current < length) {
        relax(n.current + 1, n.mask, n.next, 1);
      }
      const unsigned bit = 1u << n.current;
      if (!(n.mask & bit) && std::popcount(n.mask) < slots) {
        relax(n.current, n.mask | bit, n.next, 0);
      }
      if (n.current == n.next - 1) {
        relax(kNone, n.mask, n.next - 1, 0);
      }
    }
    for (int i = 0; i < states; ++i) {
      const unsigned bit = 1u << i;
      if (n.mask & bit) {
        relax(i, n.mask, n.next, 0);
        relax(n.current, n.mask & ~bit, n.next, 0);
      }
    }
  }
  throw Error(ErrorCode::kInfeasible, "no legal schedule exists");
}

}  // namespace edgeckpt
