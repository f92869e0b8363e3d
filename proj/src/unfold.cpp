#include "enpar/unfold.hpp"

#include <algorithm>
#include <map>

#include "enpar/error.hpp"

namespace enpar {

EnergyUnfolding build_unfolding(const GameGraph& g, long long N, const JumpTable& jumps) {
  if (!g.validated) fail(Err::Internal, "build_unfolding: unvalidated base game");
  if (N < 1) fail(Err::BadJumpTable, "cutoff N must be at least 1");
  const int n = g.num_states();
  const int R = g.max_abs_reward;
  if (jumps.N != N || jumps.R != R || jumps.num_states != n ||
      jumps.values.size() != static_cast<size_t>(R) * n)
    fail(Err::BadJumpTable, "jump table domain must be exactly S x {N+1..N+R}");
  for (const Rat& v : jumps.values)
    if (sgn(v) < 0 || v > 1)
      fail(Err::BadJumpTable, "jump value " + rat_to_string(v) + " outside [0,1]");

  EnergyUnfolding u;
  u.N = N;
  u.R = R;
  u.base_states = n;
  u.jumps = jumps;

  GameGraph& p = u.product;
  for (long long level = 0; level <= N + R; ++level) {
    for (int s = 0; s < n; ++s) {
      Owner o = (level >= 1 && level <= N) ? g.owner(s) : Owner::Random;
      p.add_state(o, g.color(s));
    }
  }
  u.win_id = p.add_state(Owner::Random, 0);
  u.lose_id = p.add_state(Owner::Random, 1);

  for (long long level = 1; level <= N; ++level) {
    for (int s = 0; s < n; ++s) {
      int from = u.index(s, level);
      for (int e : g.out[s]) {
        long long to_level = level + g.edges[e].reward;
        if (to_level < 0) to_level = 0;
        if (to_level > N + R) fail(Err::Internal, "build_unfolding: level overshoot");
        int to = u.index(g.edges[e].to, to_level);
        if (g.owner(s) == Owner::Random)
          p.add_edge(from, to, g.edges[e].reward, *g.edges[e].prob);
        else
          p.add_edge(from, to, g.edges[e].reward);
      }
    }
  }
  for (int s = 0; s < n; ++s) p.add_edge(u.index(s, 0), u.lose_id, 0, Rat(1));
  for (long long level = N + 1; level <= N + R; ++level) {
    for (int s = 0; s < n; ++s) {
      const Rat& v = jumps.at(s, level);
      int from = u.index(s, level);
      if (v == 1) {
        p.add_edge(from, u.win_id, 0, Rat(1));
      } else if (is_zero(v)) {
        p.add_edge(from, u.lose_id, 0, Rat(1));
      } else {
        p.add_edge(from, u.win_id, 0, v);
        p.add_edge(from, u.lose_id, 0, Rat(1) - v);
      }
    }
  }
  p.add_edge(u.win_id, u.win_id, 0, Rat(1));
  p.add_edge(u.lose_id, u.lose_id, 0, Rat(1));

  validate(u.product);
  if (u.product.num_states() != (N + R + 1) * n + 2)
    fail(Err::Internal, "build_unfolding: size formula violated");
  return u;
}

EnergyUnfolding build_G_prime(const GameGraph& g, long long N, const ValueVector& gain_values) {
  if (static_cast<int>(gain_values.size()) != g.num_states())
    fail(Err::BadJumpTable, "gain value vector does not match the state set");
  JumpTable t = JumpTable::make(N, g.max_abs_reward, g.num_states());
  for (long long level = N + 1; level <= N + g.max_abs_reward; ++level)
    for (int s = 0; s < g.num_states(); ++s) t.at(s, level) = gain_values[s];
  return build_unfolding(g, N, t);
}

EnergyUnfolding build_G_N_for_test(const GameGraph& g, long long N, const JumpTable& true_values) {
  return build_unfolding(g, N, true_values);
}

SaturatedUnfolding build_saturated(const GameGraph& g, long long cap, CapMode mode) {
  if (!g.validated) fail(Err::Internal, "build_saturated: unvalidated base game");
  if (cap < 1) fail(Err::Internal, "build_saturated: cap must be at least 1");
  const int n = g.num_states();

  SaturatedUnfolding u;
  u.cap = cap;
  u.mode = mode;
  u.base_states = n;

  GameGraph& p = u.product;
  for (long long level = 1; level <= cap; ++level)
    for (int s = 0; s < n; ++s) p.add_state(g.owner(s), g.color(s));
  u.lose_id = p.add_state(Owner::Random, 1);
  if (mode == CapMode::WinSink) u.win_id = p.add_state(Owner::Random, 0);

  for (long long level = 1; level <= cap; ++level) {
    for (int s = 0; s < n; ++s) {
      int from = u.index(s, level);
      // Several base edges can collapse onto the same sink; merge them.
      std::map<int, std::pair<int, Rat>> merged;  // to -> (reward, prob mass)
      for (int e : g.out[s]) {
        long long to_level = level + g.edges[e].reward;
        int to;
        if (to_level <= 0)
          to = u.lose_id;
        else if (to_level > cap)
          to = (mode == CapMode::WinSink) ? u.win_id : u.index(g.edges[e].to, cap);
        else
          to = u.index(g.edges[e].to, to_level);
        Rat mass = g.owner(s) == Owner::Random ? *g.edges[e].prob : Rat(0);
        auto [it, fresh] = merged.try_emplace(to, g.edges[e].reward, mass);
        if (!fresh) it->second.second += mass;
      }
      for (auto& [to, rw] : merged) {
        if (g.owner(s) == Owner::Random)
          p.add_edge(from, to, rw.first, rw.second);
        else
          p.add_edge(from, to, rw.first);
      }
    }
  }
  p.add_edge(u.lose_id, u.lose_id, 0, Rat(1));
  if (u.win_id >= 0) p.add_edge(u.win_id, u.win_id, 0, Rat(1));

  validate(u.product);
  return u;
}

}  // namespace enpar
