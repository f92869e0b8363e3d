#pragma once

#include <vector>

#include "enpar/game.hpp"
#include "enpar/graph.hpp"

namespace enpar {

// Exact multichain policy iteration for expected mean payoff on a view.
// Evaluation solves gain and bias with the P* h = 0 pinning; improvement
// is gain-first, bias on gain-ties, switching only on strict improvement.
struct MpSolution {
  ValueVector gain;          // per local state
  ValueVector bias;          // per local state
  std::vector<int> choice;   // per local state -> global edge id (-1 on random)
};

MpSolution howard_mean_payoff(const SubMdp& v, bool maximize);

// View of a MEC: its states, only its internal edges.
SubMdp mec_view(const GameGraph& g, const Mec& m);

// Extremal mean payoff achievable inside a MEC; uniform across the MEC.
Rat mec_extremal_mean_payoff(const GameGraph& g, const Mec& m, bool maximize,
                             MpSolution* solution_out = nullptr);

// Brute-force oracle: enumerate all MD policies on the view and take the
// extremal BSCC mean payoff. Test harness use only; exponential.
Rat enumerate_extremal_mean_payoff(const SubMdp& v, bool maximize);

}  // namespace enpar
