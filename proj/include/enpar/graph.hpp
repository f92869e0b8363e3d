#pragma once

#include <functional>
#include <vector>

#include "enpar/game.hpp"

namespace enpar {

// Restriction of a game to a state/edge subset, with local indexing.
// Edges are kept only when both endpoints are kept. Algorithms that need
// random-branching closure (MEC decomposition) enforce it themselves.
struct SubMdp {
  const GameGraph* g = nullptr;
  std::vector<int> states;            // global ids, ascending
  std::vector<int> local_of;          // global -> local index or -1
  std::vector<std::vector<int>> out;  // local -> kept global edge ids

  int size() const { return static_cast<int>(states.size()); }

  static SubMdp whole(const GameGraph& g);
  static SubMdp restrict_states(const GameGraph& g, const std::vector<char>& keep);
  // Further restriction by a local-state mask.
  SubMdp restrict(const std::vector<char>& keep_local) const;
};

// Strongly connected components of the view's graph. Returns component ids
// per local state; ids are in reverse topological order (edges go from
// higher-numbered components to lower or stay inside).
std::vector<int> sccs(const SubMdp& v, int* count);

// Least set A containing base such that a state joins A when
//   existential(s)  and some kept edge leads into A, or
//   !existential(s) and all kept edges lead into A.
// States without kept edges join only via the base.
std::vector<char> attractor(const SubMdp& v, const std::vector<char>& base_local,
                            const std::function<bool(int /*global state*/)>& existential);

// Maximal end components: strongly connected, closed under the full random
// branching of the underlying game, every state keeps an internal move.
struct Mec {
  std::vector<int> states;  // global ids
  std::vector<int> edges;   // global edge ids usable inside
};
std::vector<Mec> mec_decompose(const SubMdp& v);

// Almost-sure reachability winning set for `reacher` (its states existential,
// the other player's adversarial), with a witnessing choice on reacher's
// states inside the set. Target states are treated as absorbing wins.
struct AsReach {
  std::vector<char> set;
  std::vector<int> choice;  // reacher-owned state -> edge id staying in set, -1 elsewhere
};
AsReach as_reach(const GameGraph& g, const std::vector<char>& target, Owner reacher);

// States from which `reacher` can reach the target with positive probability
// (adversary universal, random existential).
std::vector<char> positive_reach(const GameGraph& g, const std::vector<char>& target,
                                 Owner reacher);

// Plain backward reachability over all edges.
std::vector<char> can_reach(const GameGraph& g, const std::vector<char>& target);

}  // namespace enpar
