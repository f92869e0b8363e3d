#pragma once

#include <vector>

#include "enpar/game.hpp"
#include "enpar/graph.hpp"
#include "enpar/strategy_types.hpp"

namespace enpar {

// A Markov chain induced on a game by resolving owned states with an MD
// choice. choice == nullptr views a pure chain.
struct ChainView {
  const GameGraph* g = nullptr;
  const std::vector<int>* choice = nullptr;

  ChainView(const GameGraph& game, const std::vector<int>* md = nullptr)
      : g(&game), choice(md) {}

  // f(edge_id, to, prob)
  template <class F>
  void for_succ(int s, F&& f) const {
    if (g->owner(s) == Owner::Random) {
      for (int e : g->out[s]) f(e, g->edges[e].to, *g->edges[e].prob);
    } else {
      int e = (*choice)[s];
      f(e, g->edges[e].to, Rat(1));
    }
  }
};

// Bottom strongly connected components of a chain.
std::vector<std::vector<int>> bscc_decompose(const ChainView& chain);
std::vector<std::vector<int>> bscc_decompose(const GameGraph& chain);

// Exact absorption probabilities into the target set.
ValueVector chain_reach_values(const ChainView& chain, const std::vector<char>& target);

// Probability that the minimum color seen infinitely often is even.
ValueVector chain_parity_values(const ChainView& chain);

// Stationary distribution of an irreducible closed component (global ids).
std::vector<Rat> stationary_distribution(const ChainView& chain, const std::vector<int>& comp);

// Expected total reward per step from each state of a recurrent component,
// i.e. sum of p*reward over the resolved successor distribution.
Rat expected_step_reward(const ChainView& chain, int s);

struct ReachSolution {
  ValueVector values;
  StrategyMD strategy;
};

// Exact optimal reachability for a single-controller game (MDP) by policy
// iteration with exact linear solves. The controller's direction is given by
// `maximize`; qualitative 0/1 sets are pinned up front.
ReachSolution reach_value(const GameGraph& mdp, const std::vector<char>& target, bool maximize);

inline ReachSolution max_reach_value(const GameGraph& mdp, const std::vector<char>& target) {
  return reach_value(mdp, target, true);
}
inline ReachSolution min_reach_value(const GameGraph& mdp, const std::vector<char>& target) {
  return reach_value(mdp, target, false);
}

// Value of an MD strategy in the induced chain, with target semantics.
ValueVector evaluate_md_reach(const GameGraph& mdp, const std::vector<int>& choice,
                              const std::vector<char>& target);

}  // namespace enpar
