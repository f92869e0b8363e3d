#pragma once

#include <optional>
#include <string>
#include <vector>

#include "enpar/rational.hpp"

namespace enpar {

enum class Owner : uint8_t { Maximizer, Minimizer, Random };

const char* owner_name(Owner o);

struct StateRecord {
  Owner owner = Owner::Random;
  int color = 0;
};

struct EdgeRecord {
  int from = 0;
  int to = 0;
  int reward = 0;
  // Present exactly on edges out of random states.
  std::optional<Rat> prob;
};

struct ValidationLimits {
  int max_color = 16;  // d_max
};

// Finite simple stochastic game. States are dense 0..n-1; edges are pairs
// (no parallel edges), with integer rewards and exact rational probabilities
// on random states' edges. Immutable after validate(); safe to share
// read-only across workers.
struct GameGraph {
  std::vector<StateRecord> states;
  std::vector<EdgeRecord> edges;

  // Derived by validate().
  std::vector<std::vector<int>> out;  // state -> outgoing edge ids
  int max_abs_reward = 0;             // R
  bool validated = false;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  Owner owner(int s) const { return states[s].owner; }
  int color(int s) const { return states[s].color; }

  int add_state(Owner o, int color);
  int add_edge(int from, int to, int reward);
  int add_edge(int from, int to, int reward, const Rat& prob);
};

// Checks all model invariants and builds the adjacency index.
// Throws Err::{DanglingEdge, EmptySuccessorSet, BadDistribution,
// ColorOutOfRange, DuplicateEdge}.
void validate(GameGraph& g, const ValidationLimits& lim = {});

// Same game with Maximizer and Minimizer swapped. Involution.
GameGraph dual(const GameGraph& g);

// Every color incremented by one; reduces odd-parity questions to even.
GameGraph shift_colors(const GameGraph& g);

bool structurally_equal(const GameGraph& a, const GameGraph& b);

// Edge id of (from, to), or -1.
int find_edge(const GameGraph& g, int from, int to);

bool is_mdp(const GameGraph& g);        // at most one player owns states
bool is_chain(const GameGraph& g);      // no owned states
// The single player that owns states, for MDPs; Random for chains.
Owner mdp_controller(const GameGraph& g);

struct Configuration {
  int state = 0;
  long long energy = 0;  // non-negative
};

using ValueVector = std::vector<Rat>;

}  // namespace enpar
