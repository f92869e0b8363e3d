#pragma once

#include <vector>

#include "enpar/game.hpp"

namespace enpar {

// Winning-jump probabilities for the boundary levels N+1..N+R, per state.
struct JumpTable {
  long long N = 1;
  int R = 0;
  int num_states = 0;
  std::vector<Rat> values;  // (level-(N+1))*num_states + s

  static JumpTable make(long long N, int R, int num_states, const Rat& fill = Rat(0)) {
    JumpTable t;
    t.N = N;
    t.R = R;
    t.num_states = num_states;
    t.values.assign(static_cast<size_t>(R) * num_states, fill);
    return t;
  }
  Rat& at(int s, long long level) {
    return values[static_cast<size_t>(level - (N + 1)) * num_states + s];
  }
  const Rat& at(int s, long long level) const {
    return values[static_cast<size_t>(level - (N + 1)) * num_states + s];
  }
};

// The finite parity game that encodes the energy level up to N, with random
// jump gadgets at levels N+1..N+R paying the given winning probabilities and
// a losing gadget at level 0. Product size is (N+R+1)*|S| + 2 exactly.
struct EnergyUnfolding {
  long long N = 1;
  int R = 0;
  int base_states = 0;
  GameGraph product;
  int win_id = -1, lose_id = -1;
  JumpTable jumps;

  int index(int s, long long level) const {
    return static_cast<int>(level) * base_states + s;
  }
  bool is_sink(int pid) const { return pid == win_id || pid == lose_id; }
  int base_state_of(int pid) const { return pid % base_states; }
  long long level_of(int pid) const { return pid / base_states; }
};

EnergyUnfolding build_unfolding(const GameGraph& g, long long N, const JumpTable& jumps);

// G': jump values are the Gain values of the base states, at every boundary level.
EnergyUnfolding build_G_prime(const GameGraph& g, long long N, const ValueVector& gain_values);

// G[N]: jump values supplied by an external oracle. Test object.
EnergyUnfolding build_G_N_for_test(const GameGraph& g, long long N, const JumpTable& true_values);

// Saturating truncation: energy tracked in 1..cap with both players keeping
// control at every level; dropping to <= 0 hits a losing sink; climbing past
// cap either clamps (pessimistic for Maximizer) or wins (optimistic).
enum class CapMode { Clamp, WinSink };

struct SaturatedUnfolding {
  long long cap = 1;
  CapMode mode = CapMode::Clamp;
  int base_states = 0;
  GameGraph product;
  int lose_id = -1;
  int win_id = -1;  // -1 in Clamp mode

  int index(int s, long long level) const {  // level 1..cap
    return static_cast<int>(level - 1) * base_states + s;
  }
  bool is_sink(int pid) const { return pid == win_id || pid == lose_id; }
  int base_state_of(int pid) const { return pid % base_states; }
  long long level_of(int pid) const { return pid / base_states + 1; }
};

SaturatedUnfolding build_saturated(const GameGraph& g, long long cap, CapMode mode);

}  // namespace enpar
