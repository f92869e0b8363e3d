#include "enpar/mdp.hpp"

#include <algorithm>
#include <deque>

#include "enpar/error.hpp"
#include "enpar/linalg.hpp"

namespace enpar {

namespace {

// Local SCC over the resolved chain edges.
std::vector<int> chain_sccs(const ChainView& chain, int* count) {
  const GameGraph& g = *chain.g;
  SubMdp v;
  v.g = &g;
  v.local_of.resize(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) {
    v.local_of[s] = s;
    v.states.push_back(s);
  }
  v.out.resize(g.num_states());
  for (int s = 0; s < g.num_states(); ++s)
    chain.for_succ(s, [&](int e, int, const Rat&) { v.out[s].push_back(e); });
  return sccs(v, count);
}

std::vector<char> chain_backward_reach(const ChainView& chain, const std::vector<char>& target) {
  const GameGraph& g = *chain.g;
  std::vector<std::vector<int>> preds(g.num_states());
  for (int s = 0; s < g.num_states(); ++s)
    chain.for_succ(s, [&](int, int to, const Rat&) { preds[to].push_back(s); });
  std::vector<char> in(g.num_states(), 0);
  std::deque<int> q;
  for (int s = 0; s < g.num_states(); ++s)
    if (target[s]) {
      in[s] = 1;
      q.push_back(s);
    }
  while (!q.empty()) {
    int w = q.front();
    q.pop_front();
    for (int u : preds[w])
      if (!in[u]) {
        in[u] = 1;
        q.push_back(u);
      }
  }
  return in;
}

}  // namespace

std::vector<std::vector<int>> bscc_decompose(const ChainView& chain) {
  const GameGraph& g = *chain.g;
  int ncomp = 0;
  std::vector<int> comp = chain_sccs(chain, &ncomp);
  std::vector<char> bottom(ncomp, 1);
  for (int s = 0; s < g.num_states(); ++s)
    chain.for_succ(s, [&](int, int to, const Rat&) {
      if (comp[to] != comp[s]) bottom[comp[s]] = 0;
    });
  std::vector<std::vector<int>> result(ncomp);
  for (int s = 0; s < g.num_states(); ++s)
    if (bottom[comp[s]]) result[comp[s]].push_back(s);
  std::vector<std::vector<int>> out;
  for (auto& c : result)
    if (!c.empty()) out.push_back(std::move(c));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> bscc_decompose(const GameGraph& chain) {
  if (!is_chain(chain)) fail(Err::Internal, "bscc_decompose expects a chain");
  return bscc_decompose(ChainView(chain));
}

ValueVector chain_reach_values(const ChainView& chain, const std::vector<char>& target) {
  const GameGraph& g = *chain.g;
  const int n = g.num_states();

  // Value 0: no path to the target. Value 1: no path to a value-0 state
  // (target treated as absorbing).
  std::vector<char> pos = chain_backward_reach(chain, target);
  std::vector<char> zero(n, 0);
  for (int s = 0; s < n; ++s) zero[s] = !pos[s];
  // Reaching `zero` while avoiding target: restrict propagation.
  std::vector<std::vector<int>> preds(n);
  for (int s = 0; s < n; ++s) {
    if (target[s]) continue;  // absorbing win: play ends for reach purposes
    chain.for_succ(s, [&](int, int to, const Rat&) { preds[to].push_back(s); });
  }
  std::vector<char> may_fail(n, 0);
  std::deque<int> q;
  for (int s = 0; s < n; ++s)
    if (zero[s]) {
      may_fail[s] = 1;
      q.push_back(s);
    }
  while (!q.empty()) {
    int w = q.front();
    q.pop_front();
    for (int u : preds[w])
      if (!may_fail[u] && !target[u]) {
        may_fail[u] = 1;
        q.push_back(u);
      }
  }

  ValueVector values(n, Rat(0));
  std::vector<int> sys_index(n, -1);
  std::vector<int> mid;
  for (int s = 0; s < n; ++s) {
    if (target[s])
      values[s] = 1;
    else if (!may_fail[s])
      values[s] = 1;
    else if (zero[s])
      values[s] = 0;
    else {
      sys_index[s] = static_cast<int>(mid.size());
      mid.push_back(s);
    }
  }
  if (mid.empty()) return values;

  const int m = static_cast<int>(mid.size());
  std::vector<std::vector<std::pair<int, Rat>>> rows(m);
  std::vector<Rat> rhs(m, Rat(0));
  for (int i = 0; i < m; ++i) {
    int s = mid[i];
    rows[i].push_back({i, Rat(1)});
    chain.for_succ(s, [&](int, int to, const Rat& p) {
      if (sys_index[to] >= 0)
        rows[i].push_back({sys_index[to], -p});
      else
        rhs[i] += p * values[to];
    });
  }
  std::vector<Rat> x = solve_linear_sparse(m, std::move(rows), std::move(rhs));
  for (int i = 0; i < m; ++i) values[mid[i]] = x[i];
  return values;
}

ValueVector chain_parity_values(const ChainView& chain) {
  const GameGraph& g = *chain.g;
  auto bsccs = bscc_decompose(chain);
  std::vector<char> good(g.num_states(), 0);
  for (const auto& c : bsccs) {
    int mincol = g.color(c[0]);
    for (int s : c) mincol = std::min(mincol, g.color(s));
    if (mincol % 2 == 0)
      for (int s : c) good[s] = 1;
  }
  return chain_reach_values(chain, good);
}

std::vector<Rat> stationary_distribution(const ChainView& chain, const std::vector<int>& comp) {
  const int m = static_cast<int>(comp.size());
  std::vector<int> local(chain.g->num_states(), -1);
  for (int i = 0; i < m; ++i) local[comp[i]] = i;
  // mu^T P = mu^T restricted to the component, with sum(mu) = 1 replacing the
  // last (redundant) balance equation.
  std::vector<std::vector<std::pair<int, Rat>>> rows(m);
  std::vector<Rat> rhs(m, Rat(0));
  for (int j = 0; j < m - 1; ++j) rows[j].push_back({j, Rat(-1)});
  for (int i = 0; i < m; ++i) {
    chain.for_succ(comp[i], [&](int, int to, const Rat& p) {
      int j = local[to];
      if (j < 0) fail(Err::Internal, "stationary_distribution: component not closed");
      if (j < m - 1) rows[j].push_back({i, p});
    });
  }
  for (int i = 0; i < m; ++i) rows[m - 1].push_back({i, Rat(1)});
  rhs[m - 1] = 1;
  return solve_linear_sparse(m, std::move(rows), std::move(rhs));
}

Rat expected_step_reward(const ChainView& chain, int s) {
  Rat r = 0;
  chain.for_succ(s, [&](int e, int, const Rat& p) { r += p * Rat(chain.g->edges[e].reward); });
  return r;
}

ValueVector evaluate_md_reach(const GameGraph& mdp, const std::vector<int>& choice,
                              const std::vector<char>& target) {
  return chain_reach_values(ChainView(mdp, &choice), target);
}

ReachSolution reach_value(const GameGraph& g, const std::vector<char>& target, bool maximize) {
  if (!is_mdp(g)) fail(Err::Internal, "reach_value expects a single-controller game");
  const int n = g.num_states();
  Owner controller = mdp_controller(g);
  if (controller == Owner::Random) {
    ReachSolution r;
    r.values = chain_reach_values(ChainView(g), target);
    r.strategy.owner = maximize ? Owner::Maximizer : Owner::Minimizer;
    r.strategy.choice.assign(n, -1);
    return r;
  }

  std::vector<int> choice(n, -1);
  std::vector<char> pinned(n, 0);  // states whose value and choice are fixed
  ValueVector values(n, Rat(0));

  if (maximize) {
    AsReach as = as_reach(g, target, controller);
    std::vector<char> pos = can_reach(g, target);
    for (int s = 0; s < n; ++s) {
      if (as.set[s]) {
        values[s] = 1;
        pinned[s] = 1;
        choice[s] = as.choice[s];
      } else if (!pos[s]) {
        values[s] = 0;
        pinned[s] = 1;
      }
    }
  } else {
    // Safe set: controller avoids the target surely. Greatest closed set.
    SubMdp whole = SubMdp::whole(g);
    std::vector<char> base(n, 0);
    for (int s = 0; s < n; ++s) base[s] = target[s];
    // Least set containing target closed under forced entry: controller
    // universal, random existential.
    std::vector<char> forced =
        attractor(whole, base, [&](int s) { return g.owner(s) == Owner::Random; });
    std::vector<char> safe(n, 0);
    for (int s = 0; s < n; ++s) safe[s] = !forced[s];
    // Value < 1 iff the controller can steer to the safe set avoiding targets.
    std::vector<char> keep(n, 0);
    for (int s = 0; s < n; ++s) keep[s] = !target[s];
    SubMdp nontarget = SubMdp::restrict_states(g, keep);
    std::vector<char> safe_local(nontarget.size(), 0);
    for (int i = 0; i < nontarget.size(); ++i) safe_local[i] = safe[nontarget.states[i]];
    std::vector<char> escape_local =
        attractor(nontarget, safe_local, [&](int) { return true; });
    std::vector<char> below_one(n, 0);
    for (int i = 0; i < nontarget.size(); ++i)
      if (escape_local[i]) below_one[nontarget.states[i]] = 1;
    for (int s = 0; s < n; ++s) {
      if (safe[s] && !target[s]) {
        values[s] = 0;
        pinned[s] = 1;
        if (g.owner(s) == controller) {
          for (int e : g.out[s])
            if (safe[g.edges[e].to]) {
              choice[s] = e;
              break;
            }
        }
      } else if (!below_one[s] && !target[s]) {
        values[s] = 1;
        pinned[s] = 1;
      }
    }
  }

  // Remaining controller states start on their lowest-id edge.
  for (int s = 0; s < n; ++s)
    if (g.owner(s) == controller && choice[s] == -1) choice[s] = g.out[s][0];

  std::vector<char> eval_target(n, 0);
  for (int s = 0; s < n; ++s) eval_target[s] = target[s] || (pinned[s] && values[s] == 1);

  const int max_rounds = 100000;
  for (int round = 0; round < max_rounds; ++round) {
    ValueVector v = chain_reach_values(ChainView(g, &choice), eval_target);
    // Pinned zero states keep value zero regardless of the current choice
    // elsewhere; pinned one states are targets. Improvement only on free states.
    bool switched = false;
    for (int s = 0; s < n; ++s) {
      if (g.owner(s) != controller || pinned[s] || target[s]) continue;
      int best = choice[s];
      Rat best_v = v[g.edges[best].to];
      for (int e : g.out[s]) {
        const Rat& cand = v[g.edges[e].to];
        if ((maximize && cand > best_v) || (!maximize && cand < best_v)) {
          best = e;
          best_v = cand;
        }
      }
      if (best != choice[s]) {
        choice[s] = best;
        switched = true;
      }
    }
    if (!switched) {
      // The returned strategy's induced chain must solve to exactly the
      // returned vector, including on the qualitatively pinned states.
      for (int s = 0; s < n; ++s)
        if (pinned[s] && !target[s] && v[s] != values[s])
          fail(Err::Internal, "reach_value: pinned state disagrees with evaluation");
      ReachSolution r;
      r.values = std::move(v);
      r.strategy.owner = controller;
      r.strategy.choice = std::move(choice);
      return r;
    }
  }
  fail(Err::Internal, "reach_value: policy iteration did not converge");
}

}  // namespace enpar
