#pragma once

#include <cstdint>
#include <vector>

#include "enpar/game.hpp"
#include "enpar/strategy_types.hpp"

namespace enpar {

enum class SolveMode { Enumerate, Improve };

struct SolveBudget {
  uint64_t max_strategies = 1ull << 20;
  int max_improve_rounds = 64;
};

// Fix an MD strategy: owned states of its side become chance vertices with a
// single probability-one successor. Same state space; dropped edges compact.
GameGraph fix_md(const GameGraph& g, const StrategyMD& s, std::vector<int>* edge_to_base);

struct ParitySolution {
  ValueVector values;
  StrategyMD sigma;  // Maximizer optimal MD
  StrategyMD pi;     // Minimizer optimal MD
  // Mutual best-response recomputations; both equal `values` exactly.
  ValueVector certificate_max;  // best response against pi
  ValueVector certificate_min;  // best response against sigma
};

// Exact even-parity values and optimal MD strategies for both players.
// Enumerate exhausts Minimizer (and Maximizer) MD strategies; Improve runs
// alternating strategy improvement and accepts only on an exact mutual
// best-response certificate, falling back to Enumerate otherwise.
ParitySolution solve_parity_game(const GameGraph& g, SolveMode mode, const SolveBudget& = {});

// Opponent-optimal values and strategy against a fixed MD strategy.
std::pair<ValueVector, StrategyMD> best_response_parity(const GameGraph& g,
                                                        const StrategyMD& fixed,
                                                        Owner fixed_player);

struct ReachGameSolution {
  ValueVector values;
  StrategyMD sigma;
  StrategyMD pi;
};
ReachGameSolution solve_reach_game(const GameGraph& g, const std::vector<char>& target,
                                   SolveMode mode, const SolveBudget& = {});

}  // namespace enpar
