#include "edgeckpt/uniform.hpp"

#include <vector>

#include "edgeckpt/error.hpp"

namespace edgeckpt {
namespace {

void require_segments(int length, int segments) {
  if (segments < 2 || segments > length) {
    throw Error(ErrorCode::kInvalidSegments, "segments must satisfy 2 <= s <= l (l=" +
                                                 std::to_string(length) +
                                                 ", s=" + std::to_string(segments) + ")");
  }
}

// Hands out the lowest free slot and remembers which slot holds which state.
class SlotBook {
 public:
  SlotBook(int slots, int length)
      : free_(static_cast<std::size_t>(slots), true),
        where_(static_cast<std::size_t>(length) + 1, -1) {
    free_[0] = false;
    where_[0] = 0;
  }

  int store(std::vector<Action>& out, int state) {
    int slot = 0;
    while (!free_[slot]) ++slot;
    free_[slot] = false;
    where_[state] = slot;
    out.push_back(Action::store(slot, state));
    return slot;
  }

  void discard(std::vector<Action>& out, int state) {
    const int slot = where_[state];
    free_[slot] = true;
    where_[state] = -1;
    out.push_back(Action::discard(slot));
  }

  int slot_of(int state) const { return where_[state]; }

 private:
  std::vector<bool> free_;
  std::vector<int> where_;
};

// Reverses steps last..first+1 given that states first..last-2 are stored
// and x_{last-1} is current. Frees each slot once its state is consumed.
void reverse_stored_run(std::vector<Action>& out, SlotBook& book, int first, int last) {
  for (int i = last; i > first; --i) {
    if (i != last) {
      out.push_back(Action::restore(book.slot_of(i - 1)));
    }
    out.push_back(Action::reverse(i));
    if (book.slot_of(i - 1) >= 0) {
      book.discard(out, i - 1);
    }
  }
}

}  // namespace

int uniform_memory(int length, int segments) {
  require_segments(length, segments);
  const int seg = length / segments;
  return segments - 1 + (length - seg * (segments - 1));
}

Schedule uniform_schedule(int length, int segments) {
  const int units = uniform_memory(length, segments);
  const int seg = length / segments;
  const int tail_start = seg * (segments - 1);

  Schedule schedule{length, units - 1, {}};
  auto& out = schedule.actions;
  SlotBook book(schedule.slots, length);

  // Forward sweep: keep segment inputs, then every state of the tail except
  // the last one, which stays current.
  for (int i = 1; i < length; ++i) {
    out.push_back(Action::advance(i));
    const bool segment_input = i < tail_start && i % seg == 0;
    const bool in_tail = i >= tail_start && i < length - 1;
    if (segment_input || in_tail) {
      book.store(out, i);
    }
  }
  reverse_stored_run(out, book, tail_start, length);

  for (int k = segments - 2; k >= 0; --k) {
    const int begin = k * seg;
    const int end = begin + seg;
    out.push_back(Action::restore(book.slot_of(begin)));
    for (int i = begin + 1; i < end; ++i) {
      out.push_back(Action::advance(i));
      if (i < end - 1) {
        book.store(out, i);
      }
    }
    reverse_stored_run(out, book, begin, end);
  }
  return schedule;
}

UniformPlan plan_uniform(int length, int segments) {
  UniformPlan plan;
  plan.length = length;
  plan.segments = segments;
  plan.memory_units = uniform_memory(length, segments);
  plan.schedule = uniform_schedule(length, segments);
  return plan;
}

UniformOptimum uniform_min_memory(int length) {
  if (length < 2) {
    throw Error(ErrorCode::kInvalidLength, "uniform checkpointing needs l >= 2");
  }
  UniformOptimum best{2, uniform_memory(length, 2)};
  for (int s = 3; s <= length; ++s) {
    const int units = uniform_memory(length, s);
    if (units < best.memory_units) {
      best = {s, units};
    }
  }
  return best;
}

}  // namespace edgeckpt
