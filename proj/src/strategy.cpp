#include "enpar/strategy.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "enpar/error.hpp"
#include "enpar/gain.hpp"
#include "enpar/mdp.hpp"
#include "enpar/mdp_parity.hpp"
#include "enpar/unfold.hpp"

namespace enpar {

StrategyFD fd_from_md(const GameGraph& g, const StrategyMD& md) {
  StrategyFD f;
  f.owner = md.owner;
  f.num_modes = 1;
  f.m0 = 0;
  f.update.assign(1, std::vector<int>(g.num_edges(), 0));
  f.nxt.assign(1, std::vector<int>(g.num_states(), -1));
  for (int s = 0; s < g.num_states(); ++s)
    if (g.owner(s) == md.owner) f.nxt[0][s] = md.choice[s];
  return f;
}

void check_strategy(const GameGraph& g, const StrategyFD& f) {
  if (f.num_modes <= 0 || f.m0 < 0 || f.m0 >= f.num_modes)
    fail(Err::Internal, "strategy: bad mode space");
  if (static_cast<int>(f.update.size()) != f.num_modes ||
      static_cast<int>(f.nxt.size()) != f.num_modes)
    fail(Err::Internal, "strategy: table shape mismatch");
  for (int m = 0; m < f.num_modes; ++m) {
    if (static_cast<int>(f.update[m].size()) != g.num_edges() ||
        static_cast<int>(f.nxt[m].size()) != g.num_states())
      fail(Err::Internal, "strategy: table shape mismatch");
    for (int e = 0; e < g.num_edges(); ++e)
      if (f.update[m][e] < 0 || f.update[m][e] >= f.num_modes)
        fail(Err::Internal, "strategy: update out of range");
    for (int s = 0; s < g.num_states(); ++s) {
      if (g.owner(s) == f.owner) {
        int e = f.nxt[m][s];
        if (e < 0 || e >= g.num_edges() || g.edges[e].from != s)
          fail(Err::Internal, "strategy: nxt not total on owned states");
      }
    }
  }
}

StrategyFD arbitrary_strategy(const GameGraph& g, Owner owner) {
  StrategyMD md;
  md.owner = owner;
  md.choice.assign(g.num_states(), -1);
  for (int s = 0; s < g.num_states(); ++s)
    if (g.owner(s) == owner) md.choice[s] = g.out[s][0];
  return fd_from_md(g, md);
}

FixedProduct fix_fd_strategy(const GameGraph& g, const StrategyFD& fixed, int start_state) {
  check_strategy(g, fixed);
  FixedProduct fp;
  std::map<std::pair<int, int>, int> index;  // (mode, state) -> product id
  std::deque<std::pair<int, int>> queue;

  auto intern = [&](int m, int s) {
    auto [it, fresh] = index.try_emplace({m, s}, static_cast<int>(fp.base_state.size()));
    if (fresh) {
      Owner o = g.owner(s);
      if (o == fixed.owner) o = Owner::Random;  // choice resolved below
      fp.product.add_state(o, g.color(s));
      fp.base_state.push_back(s);
      fp.mode.push_back(m);
      queue.push_back({m, s});
    }
    return it->second;
  };

  fp.start = intern(fixed.m0, start_state);
  while (!queue.empty()) {
    auto [m, s] = queue.front();
    queue.pop_front();
    int from = index[{m, s}];
    if (g.owner(s) == fixed.owner) {
      int e = fixed.move(m, s);
      int to = intern(fixed.next_mode(m, e), g.edges[e].to);
      fp.product.add_edge(from, to, g.edges[e].reward, Rat(1));
      fp.base_edge.push_back(e);
    } else {
      for (int e : g.out[s]) {
        int to = intern(fixed.next_mode(m, e), g.edges[e].to);
        if (g.owner(s) == Owner::Random)
          fp.product.add_edge(from, to, g.edges[e].reward, *g.edges[e].prob);
        else
          fp.product.add_edge(from, to, g.edges[e].reward);
        fp.base_edge.push_back(e);
      }
    }
  }
  validate(fp.product);
  return fp;
}

namespace {

// Energy-unfolded finite chain/MDP over the reachable part, with a losing
// sink at level <= 0 and either clamping or a winning sink above the cap.
struct EnergyProduct {
  GameGraph game;
  int start = -1;
  int win_id = -1, lose_id = -1;
};

EnergyProduct energy_unfold_reachable(const GameGraph& m, int start, long long e0, long long cap,
                                      bool optimistic) {
  EnergyProduct ep;
  ep.lose_id = ep.game.add_state(Owner::Random, 1);
  if (optimistic) ep.win_id = ep.game.add_state(Owner::Random, 0);
  std::map<std::pair<int, long long>, int> index;
  std::deque<std::pair<int, long long>> queue;

  auto intern = [&](int s, long long lvl) {
    auto [it, fresh] = index.try_emplace({s, lvl}, ep.game.num_states());
    if (fresh) {
      ep.game.add_state(m.owner(s), m.color(s));
      queue.push_back({s, lvl});
    }
    return it->second;
  };

  if (e0 <= 0) {
    ep.start = ep.lose_id;
  } else {
    ep.start = intern(start, std::min(e0, cap));
  }
  while (!queue.empty()) {
    auto [s, lvl] = queue.front();
    queue.pop_front();
    int from = index[{s, lvl}];
    std::map<int, std::pair<int, Rat>> merged;
    for (int e : m.out[s]) {
      long long nl = lvl + m.edges[e].reward;
      int to;
      if (nl <= 0)
        to = ep.lose_id;
      else if (nl > cap)
        to = optimistic ? ep.win_id : intern(m.edges[e].to, cap);
      else
        to = intern(m.edges[e].to, nl);
      Rat mass = m.owner(s) == Owner::Random ? *m.edges[e].prob : Rat(0);
      auto [it, fresh] = merged.try_emplace(to, m.edges[e].reward, mass);
      if (!fresh) it->second.second += mass;
    }
    for (auto& [to, rw] : merged) {
      if (m.owner(s) == Owner::Random)
        ep.game.add_edge(from, to, rw.first, rw.second);
      else
        ep.game.add_edge(from, to, rw.first);
    }
  }
  ep.game.add_edge(ep.lose_id, ep.lose_id, 0, Rat(1));
  if (optimistic) ep.game.add_edge(ep.win_id, ep.win_id, 0, Rat(1));
  validate(ep.game);
  return ep;
}

Rat parity_value_at(const GameGraph& mdp, int start, bool maximize) {
  if (maximize) {
    return mdp_parity_value(mdp).values[start];
  }
  GameGraph flipped = shift_colors(dual(mdp));
  validate(flipped);
  return Rat(1) - mdp_parity_value(flipped).values[start];
}

}  // namespace

ValueInterval evaluate_pair(const GameGraph& g, const StrategyFD& sigma, const StrategyFD& pi,
                            const Configuration& cfg, const Rat& tol, const EvalOptions& opts) {
  if (sigma.owner != Owner::Maximizer || pi.owner != Owner::Minimizer)
    fail(Err::Internal, "evaluate_pair: strategies on the wrong sides");
  // Fix both strategies: a product transducer over (sigma mode, pi mode).
  // Composing sequentially keeps the code simple: fix sigma first, then lift
  // pi to the product (its updates observe product edges via base edges).
  FixedProduct ps = fix_fd_strategy(g, sigma, cfg.state);
  StrategyFD pi_lifted;
  pi_lifted.owner = Owner::Minimizer;
  pi_lifted.num_modes = pi.num_modes;
  pi_lifted.m0 = pi.m0;
  pi_lifted.update.assign(pi.num_modes, std::vector<int>(ps.product.num_edges(), 0));
  pi_lifted.nxt.assign(pi.num_modes, std::vector<int>(ps.product.num_states(), -1));
  for (int m = 0; m < pi.num_modes; ++m) {
    for (int e = 0; e < ps.product.num_edges(); ++e)
      pi_lifted.update[m][e] = pi.update[m][ps.base_edge[e]];
    for (int s = 0; s < ps.product.num_states(); ++s) {
      if (ps.product.owner(s) != Owner::Minimizer) continue;
      int base_s = ps.base_state[s];
      int base_e = pi.nxt[m][base_s];
      int found = -1;
      for (int e : ps.product.out[s])
        if (ps.base_edge[e] == base_e) found = e;
      if (found < 0) fail(Err::Internal, "evaluate_pair: product edge lookup failed");
      pi_lifted.nxt[m][s] = found;
    }
  }
  FixedProduct chain = fix_fd_strategy(ps.product, pi_lifted, ps.start);

  long long cap = std::max(opts.start_cap, cfg.energy + 1);
  ValueInterval best;
  best.lo = 0;
  best.hi = 1;
  while (true) {
    EnergyProduct lo_p = energy_unfold_reachable(chain.product, chain.start, cfg.energy, cap, false);
    EnergyProduct hi_p = energy_unfold_reachable(chain.product, chain.start, cfg.energy, cap, true);
    Rat lo = chain_parity_values(ChainView(lo_p.game))[lo_p.start];
    Rat hi = chain_parity_values(ChainView(hi_p.game))[hi_p.start];
    best.lo = lo;
    best.hi = hi;
    best.cap_used = cap;
    if (best.hi - best.lo <= tol) return best;
    if (cap > opts.cap_limit) {
      best.cap_limited = true;
      return best;
    }
    cap *= 2;
  }
}

ValueInterval best_response_energy_parity(const GameGraph& g, const StrategyFD& fixed,
                                          const Configuration& cfg, const Rat& tol,
                                          const EvalOptions& opts) {
  FixedProduct fp = fix_fd_strategy(g, fixed, cfg.state);
  const bool opponent_maximizes = fixed.owner == Owner::Minimizer;

  long long cap = std::max(opts.start_cap, cfg.energy + 1);
  ValueInterval best;
  while (true) {
    EnergyProduct lo_p = energy_unfold_reachable(fp.product, fp.start, cfg.energy, cap, false);
    EnergyProduct hi_p = energy_unfold_reachable(fp.product, fp.start, cfg.energy, cap, true);
    best.lo = parity_value_at(lo_p.game, lo_p.start, opponent_maximizes);
    best.hi = parity_value_at(hi_p.game, hi_p.start, opponent_maximizes);
    best.cap_used = cap;
    if (best.hi - best.lo <= tol) return best;
    if (cap > opts.cap_limit) {
      best.cap_limited = true;
      return best;
    }
    cap *= 2;
  }
}

namespace {

// Mode layout for assembled strategies: 0 = dead (energy hit zero), 1..N-1 =
// tracked energy, then per-state blocks for the post-switch strategies.
struct AssembleLayout {
  long long N;
  std::vector<int> star_base;  // per base state; single block for pi_eps
  int total_modes;
};

}  // namespace

AssembledStrategy assemble_sigma_eps(const GameGraph& g, long long N,
                                     const EnergyUnfolding& gprime, const StrategyMD& sigma_hat,
                                     const GainSolution& gain, const Configuration& initial) {
  if (initial.energy > N) fail(Err::Internal, "assemble_sigma_eps: start energy above N");
  const int n = g.num_states();
  AssembleLayout lay;
  lay.N = N;
  lay.star_base.resize(n);
  int next = static_cast<int>(N);  // 0 = dead, 1..N-1 = energy j
  for (int s = 0; s < n; ++s) {
    lay.star_base[s] = next;
    next += gain.sigma_star[s].num_modes;
  }
  lay.total_modes = next;

  AssembledStrategy out;
  out.N = N;
  out.mode_count = lay.total_modes;
  StrategyFD& f = out.fd;
  f.owner = Owner::Maximizer;
  f.num_modes = lay.total_modes;
  f.update.assign(lay.total_modes, std::vector<int>(g.num_edges(), 0));
  f.nxt.assign(lay.total_modes, std::vector<int>(g.num_states(), -1));

  // Dead mode: stay dead, play anything valid.
  for (int e = 0; e < g.num_edges(); ++e) f.update[0][e] = 0;
  for (int s = 0; s < n; ++s)
    if (g.owner(s) == Owner::Maximizer) f.nxt[0][s] = g.out[s][0];

  // Energy-tracking modes.
  for (long long j = 1; j < N; ++j) {
    int m = static_cast<int>(j);
    for (int e = 0; e < g.num_edges(); ++e) {
      long long j2 = j + g.edges[e].reward;
      if (j2 <= 0)
        f.update[m][e] = 0;
      else if (j2 >= N) {
        int to = g.edges[e].to;
        f.update[m][e] = lay.star_base[to] + gain.sigma_star[to].m0;
      } else {
        f.update[m][e] = static_cast<int>(j2);
      }
    }
    for (int s = 0; s < n; ++s) {
      if (g.owner(s) != Owner::Maximizer) continue;
      int pe = sigma_hat.choice[gprime.index(s, j)];
      if (pe < 0) fail(Err::Internal, "assemble_sigma_eps: missing product choice");
      int to_base = gprime.base_state_of(gprime.product.edges[pe].to);
      int base_edge = find_edge(g, s, to_base);
      if (base_edge < 0) fail(Err::EnergyTrackOverflow, "product edge has no base counterpart");
      f.nxt[m][s] = base_edge;
    }
  }

  // Post-switch blocks: embed each sigma_star(s') verbatim.
  for (int s2 = 0; s2 < n; ++s2) {
    const StrategyFD& st = gain.sigma_star[s2];
    int base = lay.star_base[s2];
    for (int m = 0; m < st.num_modes; ++m) {
      for (int e = 0; e < g.num_edges(); ++e) f.update[base + m][e] = base + st.update[m][e];
      for (int s = 0; s < n; ++s) f.nxt[base + m][s] = st.nxt[m][s];
    }
  }

  if (initial.energy <= 0) {
    f.m0 = 0;
  } else if (initial.energy >= N) {
    f.m0 = lay.star_base[initial.state] + gain.sigma_star[initial.state].m0;
    out.switched_immediately = true;
  } else {
    f.m0 = static_cast<int>(initial.energy);
  }
  check_strategy(g, f);
  return out;
}

AssembledStrategy assemble_pi_eps(const GameGraph& g, long long N, const EnergyUnfolding& gprime,
                                  const StrategyMD& pi_hat, const GainSolution& gain,
                                  const Configuration& initial) {
  if (initial.energy > N) fail(Err::Internal, "assemble_pi_eps: start energy above N");
  const int n = g.num_states();
  const int star = static_cast<int>(N);  // single block: pi_star is MD
  const int total = star + 1;

  AssembledStrategy out;
  out.N = N;
  out.mode_count = total;
  StrategyFD& f = out.fd;
  f.owner = Owner::Minimizer;
  f.num_modes = total;
  f.update.assign(total, std::vector<int>(g.num_edges(), 0));
  f.nxt.assign(total, std::vector<int>(g.num_states(), -1));

  for (int e = 0; e < g.num_edges(); ++e) {
    f.update[0][e] = 0;
    f.update[star][e] = star;
  }
  for (int s = 0; s < n; ++s)
    if (g.owner(s) == Owner::Minimizer) {
      f.nxt[0][s] = g.out[s][0];
      f.nxt[star][s] = gain.pi_star.choice[s];
    }

  for (long long j = 1; j < N; ++j) {
    int m = static_cast<int>(j);
    for (int e = 0; e < g.num_edges(); ++e) {
      long long j2 = j + g.edges[e].reward;
      if (j2 <= 0)
        f.update[m][e] = 0;
      else if (j2 >= N)
        f.update[m][e] = star;
      else
        f.update[m][e] = static_cast<int>(j2);
    }
    for (int s = 0; s < n; ++s) {
      if (g.owner(s) != Owner::Minimizer) continue;
      int pe = pi_hat.choice[gprime.index(s, j)];
      if (pe < 0) fail(Err::Internal, "assemble_pi_eps: missing product choice");
      int to_base = gprime.base_state_of(gprime.product.edges[pe].to);
      int base_edge = find_edge(g, s, to_base);
      if (base_edge < 0) fail(Err::EnergyTrackOverflow, "product edge has no base counterpart");
      f.nxt[m][s] = base_edge;
    }
  }

  if (initial.energy <= 0) {
    f.m0 = 0;
  } else if (initial.energy >= N) {
    f.m0 = star;
    out.switched_immediately = true;
  } else {
    f.m0 = static_cast<int>(initial.energy);
  }
  check_strategy(g, f);
  return out;
}

}  // namespace enpar
