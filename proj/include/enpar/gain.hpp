#pragma once

#include <vector>

#include "enpar/game.hpp"
#include "enpar/mdp_gain.hpp"
#include "enpar/ssg.hpp"
#include "enpar/strategy_types.hpp"
#include "enpar/unfold.hpp"

namespace enpar {

// One almost-surely winning mean-payoff/parity component lifted to the game,
// with everything needed to play inside it (base edge ids).
struct GameBComponent {
  int d = 0;
  std::vector<char> member;
  int visit_target = -1;
  std::vector<int> mp_choice;     // per state, base edge id or -1
  std::vector<int> visit_choice;  // per state, base edge id or -1
  long long period = 1;
  bool pure_md = false;
};

struct GainSolution {
  ValueVector values;
  StrategyMD pi_star;

  // Analysis of the MDP obtained by fixing pi_star (same state space).
  ValueVector fixed_values;
  std::vector<char> b_core;
  std::vector<int> b_comp_of;
  std::vector<GameBComponent> b_comps;

  // Game-level storage-energy-parity region: clamped unfolding solved as a
  // game, so the banded strategy is sound against every Minimizer.
  long long a_k = 0, a_cap = 0;
  std::vector<long long> a_entry;  // minimal winning credit per state, -1 if none
  std::vector<char> in_a;
  SaturatedUnfolding a_unf;
  StrategyMD a_strategy;  // Maximizer optimal MD on the unfolding product

  std::vector<StrategyFD> sigma_star;  // per start state, best-response verified
  bool certified = false;
};

struct GainOptions {
  SolveMode mode = SolveMode::Enumerate;
  SolveBudget budget;
  int synth_retries = 2;
  bool synthesize = true;
};

// Gain values of the game, the uniformly optimal MD Minimizer strategy, and
// (unless disabled) verified optimal FD Maximizer strategies per start state.
GainSolution ssg_gain_value(const GameGraph& g, const GainOptions& opts = {});

// The two-phase FD strategy for one start state, best-response verified.
// Raises SynthesisGapDetected when no candidate attains the solution value.
StrategyFD synthesize_sigma_star(const GameGraph& g, int s, const GainSolution& sol,
                                 const GainOptions& opts = {});

// Exact worst-case Gain value of a fixed Maximizer strategy from a state.
Rat verified_gain_value(const GameGraph& g, const StrategyFD& sigma, int start);

}  // namespace enpar
