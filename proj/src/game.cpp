#include "enpar/game.hpp"

#include <algorithm>
#include <set>

#include "enpar/error.hpp"

namespace enpar {

const char* owner_name(Owner o) {
  switch (o) {
    case Owner::Maximizer: return "max";
    case Owner::Minimizer: return "min";
    case Owner::Random: return "rand";
  }
  return "?";
}

int GameGraph::add_state(Owner o, int color) {
  states.push_back({o, color});
  validated = false;
  return num_states() - 1;
}

int GameGraph::add_edge(int from, int to, int reward) {
  edges.push_back({from, to, reward, std::nullopt});
  validated = false;
  return num_edges() - 1;
}

int GameGraph::add_edge(int from, int to, int reward, const Rat& prob) {
  edges.push_back({from, to, reward, prob});
  validated = false;
  return num_edges() - 1;
}

void validate(GameGraph& g, const ValidationLimits& lim) {
  const int n = g.num_states();
  g.out.assign(n, {});
  g.max_abs_reward = 0;

  for (int s = 0; s < n; ++s) {
    if (g.states[s].color < 0 || g.states[s].color > lim.max_color)
      fail(Err::ColorOutOfRange, "state " + std::to_string(s) + " has color " +
                                     std::to_string(g.states[s].color) +
                                     " outside [0," + std::to_string(lim.max_color) + "]");
  }

  std::set<std::pair<int, int>> seen;
  for (int e = 0; e < g.num_edges(); ++e) {
    const EdgeRecord& ed = g.edges[e];
    if (ed.from < 0 || ed.from >= n || ed.to < 0 || ed.to >= n)
      fail(Err::DanglingEdge, "edge " + std::to_string(e) + " endpoints (" +
                                  std::to_string(ed.from) + "," + std::to_string(ed.to) +
                                  ") out of range");
    if (!seen.insert({ed.from, ed.to}).second)
      fail(Err::DuplicateEdge, "duplicate edge (" + std::to_string(ed.from) + "," +
                                   std::to_string(ed.to) + ")");
    g.out[ed.from].push_back(e);
    g.max_abs_reward = std::max(g.max_abs_reward, std::abs(ed.reward));
  }

  for (int s = 0; s < n; ++s) {
    if (g.out[s].empty())
      fail(Err::EmptySuccessorSet, "state " + std::to_string(s) + " has no outgoing edge");
    if (g.owner(s) == Owner::Random) {
      Rat sum = 0;
      for (int e : g.out[s]) {
        const auto& p = g.edges[e].prob;
        if (!p)
          fail(Err::BadDistribution, "edge (" + std::to_string(s) + "," +
                                         std::to_string(g.edges[e].to) +
                                         ") out of a random state has no probability");
        if (sgn(*p) <= 0)
          fail(Err::BadDistribution, "edge (" + std::to_string(s) + "," +
                                         std::to_string(g.edges[e].to) +
                                         ") has nonpositive probability " + rat_to_string(*p));
        sum += *p;
      }
      if (sum != 1)
        fail(Err::BadDistribution, "probabilities out of random state " + std::to_string(s) +
                                       " sum to " + rat_to_string(sum));
    } else {
      for (int e : g.out[s]) {
        if (g.edges[e].prob)
          fail(Err::BadDistribution, "edge (" + std::to_string(s) + "," +
                                         std::to_string(g.edges[e].to) +
                                         ") out of a player state carries a probability");
      }
    }
  }
  g.validated = true;
}

GameGraph dual(const GameGraph& g) {
  GameGraph d = g;
  for (auto& st : d.states) {
    if (st.owner == Owner::Maximizer)
      st.owner = Owner::Minimizer;
    else if (st.owner == Owner::Minimizer)
      st.owner = Owner::Maximizer;
  }
  return d;
}

GameGraph shift_colors(const GameGraph& g) {
  GameGraph d = g;
  for (auto& st : d.states) st.color += 1;
  return d;
}

bool structurally_equal(const GameGraph& a, const GameGraph& b) {
  if (a.num_states() != b.num_states() || a.num_edges() != b.num_edges()) return false;
  for (int s = 0; s < a.num_states(); ++s) {
    if (a.states[s].owner != b.states[s].owner) return false;
    if (a.states[s].color != b.states[s].color) return false;
  }
  for (int e = 0; e < a.num_edges(); ++e) {
    const auto& x = a.edges[e];
    const auto& y = b.edges[e];
    if (x.from != y.from || x.to != y.to || x.reward != y.reward) return false;
    if (x.prob.has_value() != y.prob.has_value()) return false;
    if (x.prob && *x.prob != *y.prob) return false;
  }
  return true;
}

int find_edge(const GameGraph& g, int from, int to) {
  for (int e : g.out[from])
    if (g.edges[e].to == to) return e;
  return -1;
}

bool is_mdp(const GameGraph& g) {
  bool has_max = false, has_min = false;
  for (const auto& st : g.states) {
    has_max |= st.owner == Owner::Maximizer;
    has_min |= st.owner == Owner::Minimizer;
  }
  return !(has_max && has_min);
}

bool is_chain(const GameGraph& g) {
  for (const auto& st : g.states)
    if (st.owner != Owner::Random) return false;
  return true;
}

Owner mdp_controller(const GameGraph& g) {
  for (const auto& st : g.states)
    if (st.owner != Owner::Random) return st.owner;
  return Owner::Random;
}

}  // namespace enpar
