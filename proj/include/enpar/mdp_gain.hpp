#pragma once

#include <vector>

#include "enpar/game.hpp"
#include "enpar/graph.hpp"
#include "enpar/mdp.hpp"
#include "enpar/meanpayoff.hpp"
#include "enpar/unfold.hpp"

namespace enpar {

struct EspOptions {
  bool self_check = true;  // recompute at twice the cap and compare
};

// Almost-sure winning set for the storage-bounded energy-parity objective at
// initial credit k, computed on the Clamp-mode saturated unfolding with
// cap = k + |S|*R. Carries the product witness used to assemble strategies.
struct EspResult {
  long long k = 0, cap = 0;
  std::vector<char> set;               // base states winning at credit k
  std::vector<long long> min_credit;   // per base state, least winning level (-1 none)
  SaturatedUnfolding unfolding;
  std::vector<char> product_as;        // winning product states
  std::vector<int> product_choice;     // MD witness on the product (edge ids)
};
EspResult as_energy_storage_parity(const GameGraph& mdp, long long k, const EspOptions& = {});

// One almost-surely winning component for MP>0 together with even parity:
// a MEC of the color>=d restriction containing color d with positive maximal
// mean payoff, plus the data needed to play inside it.
struct BComponent {
  int d = 0;
  Mec comp;
  Rat mp_value;
  MpSolution mp;                  // max-mp policy, local to the component view
  int visit_target = -1;          // a d-colored member
  std::vector<int> visit_choice;  // global MD choices heading to the target
  std::vector<Rat> visit_hit_time;  // expected steps to the target, per member
  long long period = 1;           // mp-policy steps per visiting cycle
  bool pure_md = false;           // target already recurrent under the mp policy
};

struct SetBResult {
  std::vector<char> set;        // as_reach of the component union
  std::vector<char> core;       // union of component states
  std::vector<int> comp_of;     // state -> component index or -1
  std::vector<BComponent> comps;
  AsReach reach;                // choices funneling into the core
};
SetBResult set_B(const GameGraph& mdp);

// Maximal probability of Gain: exact reachability of A union B, with the
// witnesses both phases of an optimal FD strategy are assembled from.
struct MdpGainSolution {
  ValueVector values;
  StrategyMD reach_strategy;
  std::vector<char> in_A, in_B;
  EspResult esp;
  SetBResult b;
  long long k_max = 0;
  bool sweep_disagreed = false;  // stabilization went past the |S|*R default
};
MdpGainSolution mdp_gain_value(const GameGraph& mdp);

}  // namespace enpar
