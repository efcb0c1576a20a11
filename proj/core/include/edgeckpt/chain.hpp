#pragma once

// Abstract adjoint chain of l unit-cost steps x_0 -> x_1 -> ... -> x_l.
//
// Accounting:
//  * c checkpoint slots, numbered [0, c). x_0 starts in slot 0.
//  * One transient buffer outside the slots holds the current state.
//  * Reverse(i) is the combined forward+backward of step i. It needs x_{i-1}
//    as the current state and consumes it; the chain is reversed in the
//    order i = l, l-1, ..., 1.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edgeckpt {

enum class ActionKind { kAdvance, kStore, kRestore, kReverse, kDiscard };

struct Action {
  ActionKind kind = ActionKind::kAdvance;
  int index = -1;  // state/step index; Advance, Store, Reverse
  int slot = -1;   // Store, Restore, Discard

  static Action advance(int i) { return {ActionKind::kAdvance, i, -1}; }
  static Action store(int slot, int i) { return {ActionKind::kStore, i, slot}; }
  static Action restore(int slot) { return {ActionKind::kRestore, -1, slot}; }
  static Action reverse(int i) { return {ActionKind::kReverse, i, -1}; }
  static Action discard(int slot) { return {ActionKind::kDiscard, -1, slot}; }

  friend bool operator==(const Action&, const Action&) = default;
};

/// The one-line text form: `A i`, `S slot i`, `R slot`, `B i`, `D slot`.
std::string to_string(const Action& action);

struct Schedule {
  int length = 0;  // l
  int slots = 0;   // c, including the slot pinned to x_0
  std::vector<Action> actions;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct Violation {
  std::size_t position = 0;  // index into Schedule::actions; == size() if the schedule ends early
  std::optional<Action> action;
  std::string rule;
};

struct ExecStats {
  std::int64_t advances = 0;
  int reverses = 0;
  int peak_slots = 0;
  int peak_live = 0;  // peak_slots + the transient current-state buffer
  bool legal = false;
  std::optional<Violation> violation;
};

/// Replays `schedule` on the state machine. Illegal actions are reported in
/// the result, never thrown. Throws kInvalidArgument only for a malformed
/// header (length < 1 or slots < 1).
ExecStats execute(const Schedule& schedule);

/// Forward work of the schedule relative to full storage, given backward cost
/// `backward_ratio` times a forward step:
///   rho = ((l + extra) + b*l) / (l + b*l),   extra = advances - (l - 1).
/// Throws kUndefinedFactor for illegal stats.
double recompute_factor(const ExecStats& stats, int length, double backward_ratio = 1.0);

/// Exhaustive 0-1 BFS over simulator states for the fewest advances that
/// reverse a chain of `length` steps with `slots` slots. Shares nothing with
/// the dynamic-programming scheduler. Limited to length <= 10, slots <= 4.
std::int64_t brute_force_min_advances(int length, int slots);

inline constexpr int kBruteForceMaxLength = 10;
inline constexpr int kBruteForceMaxSlots = 4;

/// Schedule text format: header `l=<int> c=<int>`, then one action per line.
/// Blank lines and '#' comments are ignored by the parser.
std::string format_schedule(const Schedule& schedule);
Schedule parse_schedule(std::string_view text);

}  // namespace edgeckpt
