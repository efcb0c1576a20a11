#pragma once

// Segment-uniform checkpointing as done by framework "sequential checkpoint"
// helpers: split the chain into s segments of floor(l/s) steps with the
// remainder in the last one, keep only the inputs of the first s-1 segments
// on the way forward, and keep every state of the last segment.

#include "edgeckpt/chain.hpp"

namespace edgeckpt {

struct UniformPlan {
  int length = 0;
  int segments = 0;
  int memory_units = 0;
  Schedule schedule;
};

struct UniformOptimum {
  int segments = 0;
  int memory_units = 0;
};

/// Peak activation units, s - 1 + (l - floor(l/s) * (s - 1)).
/// Throws kInvalidSegments unless 2 <= s <= l.
int uniform_memory(int length, int segments);

/// The schedule reaches its peak at the end of the first sweep, with
/// s - 1 segment inputs and the trailing segment resident; the final state
/// x_{l-1} sits in the transient buffer, so execute().peak_live equals
/// uniform_memory(l, s). Uses uniform_memory(l, s) - 1 slots.
Schedule uniform_schedule(int length, int segments);

UniformPlan plan_uniform(int length, int segments);

/// Exhaustive minimum over s in [2, l]; ties go to the smaller s.
/// Throws kInvalidLength for l < 2.
UniformOptimum uniform_min_memory(int length);

}  // namespace edgeckpt
