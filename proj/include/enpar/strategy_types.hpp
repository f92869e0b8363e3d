#pragma once

#include <vector>

#include "enpar/game.hpp"

namespace enpar {

// Memoryless deterministic strategy: one chosen outgoing edge per owned state.
struct StrategyMD {
  Owner owner = Owner::Maximizer;
  std::vector<int> choice;  // state -> edge id, -1 on states not owned/covered

  int chosen(int s) const { return s < static_cast<int>(choice.size()) ? choice[s] : -1; }
};

// Finite-memory deterministic strategy transducer (modes, initial mode,
// update on observed edges, next-move on owned states).
struct StrategyFD {
  Owner owner = Owner::Maximizer;
  int num_modes = 1;
  int m0 = 0;
  std::vector<std::vector<int>> update;  // [mode][edge] -> mode
  std::vector<std::vector<int>> nxt;     // [mode][state] -> edge id, -1 if not owned

  int next_mode(int m, int edge) const { return update[m][edge]; }
  int move(int m, int s) const { return nxt[m][s]; }
};

StrategyFD fd_from_md(const GameGraph& g, const StrategyMD& md);

// Totality check: nxt defined on every (mode, owned state), update on every
// (mode, edge), all targets in range, every chosen edge leaves its state.
void check_strategy(const GameGraph& g, const StrategyFD& f);

// Certified bracket of a value obtained from finite truncations.
struct ValueInterval {
  Rat lo = 0, hi = 1;
  long long cap_used = 0;
  bool cap_limited = false;
};

}  // namespace enpar
