#pragma once

#include <vector>

#include "enpar/game.hpp"
#include "enpar/strategy_types.hpp"

namespace enpar {

struct GainSolution;     // gain.hpp
struct EnergyUnfolding;  // unfold.hpp

// The MDP obtained by fixing one player's FD strategy (product with the
// transducer). Built over the reachable part from (m0, start).
struct FixedProduct {
  GameGraph product;
  int start = 0;                 // product id of (m0, start_state)
  std::vector<int> base_state;   // product id -> base state
  std::vector<int> mode;         // product id -> strategy mode
  std::vector<int> base_edge;    // product edge id -> base edge id
};
FixedProduct fix_fd_strategy(const GameGraph& g, const StrategyFD& fixed, int start_state);

struct EvalOptions {
  long long start_cap = 16;
  long long cap_limit = 1 << 12;
};

// Certified bracket of P(EN(cfg.energy) and even parity) under a fixed
// strategy pair, by exact solves of saturating truncations with doubling cap.
ValueInterval evaluate_pair(const GameGraph& g, const StrategyFD& sigma, const StrategyFD& pi,
                            const Configuration& cfg, const Rat& tol,
                            const EvalOptions& opts = {});

// Opponent-optimal bracket with one side fixed: fixed.owner names the side
// that is fixed; the other side optimizes adversarially (min when Maximizer
// is fixed, max when Minimizer is fixed).
ValueInterval best_response_energy_parity(const GameGraph& g, const StrategyFD& fixed,
                                          const Configuration& cfg, const Rat& tol,
                                          const EvalOptions& opts = {});

// epsilon-optimal strategy assembled per the pipeline: play the unfolded
// parity-game optimum while the tracked energy stays below N, then switch
// permanently to the Gain-optimal strategy.
struct AssembledStrategy {
  StrategyFD fd;
  long long N = 0;
  long long mode_count = 0;
  bool switched_immediately = false;
};

AssembledStrategy assemble_sigma_eps(const GameGraph& g, long long N,
                                     const EnergyUnfolding& gprime, const StrategyMD& sigma_hat,
                                     const GainSolution& gain, const Configuration& initial);

AssembledStrategy assemble_pi_eps(const GameGraph& g, long long N, const EnergyUnfolding& gprime,
                                  const StrategyMD& pi_hat, const GainSolution& gain,
                                  const Configuration& initial);

// Trivial total strategy (lowest-id edge everywhere); used on value-zero
// branches where any valid strategy is optimal.
StrategyFD arbitrary_strategy(const GameGraph& g, Owner owner);

}  // namespace enpar
