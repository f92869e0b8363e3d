#include "enpar/meanpayoff.hpp"

#include <algorithm>

#include "enpar/error.hpp"
#include "enpar/linalg.hpp"

namespace enpar {

namespace {

struct LocalChain {
  const SubMdp* v;
  const std::vector<int>* choice;  // local -> global edge id

  // f(global_edge, local_target, prob)
  template <class F>
  void for_succ(int i, F&& f) const {
    const GameGraph& g = *v->g;
    int s = v->states[i];
    if (g.owner(s) == Owner::Random) {
      for (int e : v->out[i]) f(e, v->local_of[g.edges[e].to], *g.edges[e].prob);
    } else {
      int e = (*choice)[i];
      f(e, v->local_of[g.edges[e].to], Rat(1));
    }
  }

  Rat step_reward(int i) const {
    Rat r = 0;
    for_succ(i, [&](int e, int, const Rat& p) { r += p * Rat(v->g->edges[e].reward); });
    return r;
  }
};

std::vector<int> local_sccs(const LocalChain& c, int* count) {
  const int n = c.v->size();
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) c.for_succ(i, [&](int, int j, const Rat&) { adj[i].push_back(j); });

  std::vector<int> comp(n, -1), low(n, 0), num(n, -1), stack;
  std::vector<std::pair<int, size_t>> call;
  std::vector<char> on_stack(n, 0);
  int idx = 0, ncomp = 0;
  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto& [u, cur] = call.back();
      if (cur == 0) {
        num[u] = low[u] = idx++;
        stack.push_back(u);
        on_stack[u] = 1;
      }
      bool descended = false;
      while (cur < adj[u].size()) {
        int w = adj[u][cur++];
        if (num[w] == -1) {
          call.push_back({w, 0});
          descended = true;
          break;
        } else if (on_stack[w]) {
          low[u] = std::min(low[u], num[w]);
        }
      }
      if (descended) continue;
      if (low[u] == num[u]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
          if (w == u) break;
        }
        ++ncomp;
      }
      int done = u;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  *count = ncomp;
  return comp;
}

struct Eval {
  ValueVector gain, bias;
};

// Exact (gain, bias) of an MD policy, bias pinned by sum(mu * h) = 0 on each
// recurrent class so that P* h = 0.
Eval evaluate_policy(const SubMdp& v, const std::vector<int>& choice) {
  LocalChain c{&v, &choice};
  const int n = v.size();
  int ncomp = 0;
  std::vector<int> comp = local_sccs(c, &ncomp);
  std::vector<char> bottom(ncomp, 1);
  for (int i = 0; i < n; ++i)
    c.for_succ(i, [&](int, int j, const Rat&) {
      if (comp[j] != comp[i]) bottom[comp[i]] = 0;
    });

  Eval out;
  out.gain.assign(n, Rat(0));
  out.bias.assign(n, Rat(0));
  std::vector<char> recurrent(n, 0);

  for (int cc = 0; cc < ncomp; ++cc) {
    if (!bottom[cc]) continue;
    std::vector<int> mem;
    for (int i = 0; i < n; ++i)
      if (comp[i] == cc) mem.push_back(i);
    const int m = static_cast<int>(mem.size());
    std::vector<int> pos(n, -1);
    for (int k = 0; k < m; ++k) pos[mem[k]] = k;

    // Stationary distribution: mu^T (P - I) = 0 with sum equal to one.
    std::vector<std::vector<std::pair<int, Rat>>> rows(m);
    std::vector<Rat> rhs(m, Rat(0));
    for (int k = 0; k < m - 1; ++k) rows[k].push_back({k, Rat(-1)});
    for (int k = 0; k < m; ++k) {
      c.for_succ(mem[k], [&](int, int j, const Rat& p) {
        int jj = pos[j];
        if (jj < 0) fail(Err::Internal, "evaluate_policy: open recurrent class");
        if (jj < m - 1) rows[jj].push_back({k, p});
      });
    }
    for (int k = 0; k < m; ++k) rows[m - 1].push_back({k, Rat(1)});
    rhs[m - 1] = 1;
    std::vector<Rat> mu = solve_linear_sparse(m, std::move(rows), std::move(rhs));

    Rat g = 0;
    std::vector<Rat> rbar(m);
    for (int k = 0; k < m; ++k) {
      rbar[k] = c.step_reward(mem[k]);
      g += mu[k] * rbar[k];
    }

    // Bias: (I - P) h = rbar - g on the class, sum(mu * h) = 0.
    std::vector<std::vector<std::pair<int, Rat>>> hrows(m);
    std::vector<Rat> hrhs(m, Rat(0));
    for (int k = 0; k < m - 1; ++k) {
      hrows[k].push_back({k, Rat(1)});
      c.for_succ(mem[k], [&](int, int j, const Rat& p) { hrows[k].push_back({pos[j], -p}); });
      hrhs[k] = rbar[k] - g;
    }
    for (int k = 0; k < m; ++k) hrows[m - 1].push_back({k, mu[k]});
    hrhs[m - 1] = 0;
    std::vector<Rat> h = solve_linear_sparse(m, std::move(hrows), std::move(hrhs));

    for (int k = 0; k < m; ++k) {
      out.gain[mem[k]] = g;
      out.bias[mem[k]] = h[k];
      recurrent[mem[k]] = 1;
    }
  }

  // Transient part: g = P g and h = rbar - g + P h.
  std::vector<int> trans;
  std::vector<int> tpos(n, -1);
  for (int i = 0; i < n; ++i)
    if (!recurrent[i]) {
      tpos[i] = static_cast<int>(trans.size());
      trans.push_back(i);
    }
  if (!trans.empty()) {
    const int m = static_cast<int>(trans.size());
    {
      std::vector<std::vector<std::pair<int, Rat>>> rows(m);
      std::vector<Rat> rhs(m, Rat(0));
      for (int k = 0; k < m; ++k) {
        rows[k].push_back({k, Rat(1)});
        c.for_succ(trans[k], [&](int, int j, const Rat& p) {
          if (tpos[j] >= 0)
            rows[k].push_back({tpos[j], -p});
          else
            rhs[k] += p * out.gain[j];
        });
      }
      std::vector<Rat> gt = solve_linear_sparse(m, std::move(rows), std::move(rhs));
      for (int k = 0; k < m; ++k) out.gain[trans[k]] = gt[k];
    }
    {
      std::vector<std::vector<std::pair<int, Rat>>> rows(m);
      std::vector<Rat> rhs(m, Rat(0));
      for (int k = 0; k < m; ++k) {
        rows[k].push_back({k, Rat(1)});
        rhs[k] = c.step_reward(trans[k]) - out.gain[trans[k]];
        c.for_succ(trans[k], [&](int, int j, const Rat& p) {
          if (tpos[j] >= 0)
            rows[k].push_back({tpos[j], -p});
          else
            rhs[k] += p * out.bias[j];
        });
      }
      std::vector<Rat> ht = solve_linear_sparse(m, std::move(rows), std::move(rhs));
      for (int k = 0; k < m; ++k) out.bias[trans[k]] = ht[k];
    }
  }
  return out;
}

}  // namespace

MpSolution howard_mean_payoff(const SubMdp& v, bool maximize) {
  const GameGraph& g = *v.g;
  const int n = v.size();
  // Chain semantics need complete distributions on random states.
  for (int i = 0; i < n; ++i) {
    int s = v.states[i];
    if (g.owner(s) == Owner::Random && v.out[i].size() != g.out[s].size())
      fail(Err::Internal, "howard_mean_payoff: random state with partial distribution");
    if (g.owner(s) != Owner::Random && v.out[i].empty())
      fail(Err::Internal, "howard_mean_payoff: owned state with no internal move");
  }

  std::vector<int> choice(n, -1);
  for (int i = 0; i < n; ++i)
    if (g.owner(v.states[i]) != Owner::Random) choice[i] = v.out[i][0];

  const int max_rounds = 100000;
  for (int round = 0; round < max_rounds; ++round) {
    Eval ev = evaluate_policy(v, choice);
    bool gain_switch = false;
    for (int i = 0; i < n; ++i) {
      if (g.owner(v.states[i]) == Owner::Random) continue;
      int best = choice[i];
      Rat best_g = ev.gain[v.local_of[g.edges[best].to]];
      for (int e : v.out[i]) {
        const Rat& cand = ev.gain[v.local_of[g.edges[e].to]];
        if ((maximize && cand > best_g) || (!maximize && cand < best_g)) {
          best = e;
          best_g = cand;
        }
      }
      if (best != choice[i]) {
        choice[i] = best;
        gain_switch = true;
      }
    }
    if (gain_switch) continue;

    bool bias_switch = false;
    for (int i = 0; i < n; ++i) {
      if (g.owner(v.states[i]) == Owner::Random) continue;
      const Rat gi = ev.gain[i];
      int best = choice[i];
      Rat best_b = Rat(g.edges[best].reward) + ev.bias[v.local_of[g.edges[best].to]];
      for (int e : v.out[i]) {
        int j = v.local_of[g.edges[e].to];
        if (ev.gain[j] != gi) continue;  // only gain-neutral switches
        Rat cand = Rat(g.edges[e].reward) + ev.bias[j];
        if ((maximize && cand > best_b) || (!maximize && cand < best_b)) {
          best = e;
          best_b = cand;
        }
      }
      if (best != choice[i]) {
        choice[i] = best;
        bias_switch = true;
      }
    }
    if (!bias_switch) {
      MpSolution out;
      out.gain = std::move(ev.gain);
      out.bias = std::move(ev.bias);
      out.choice = std::move(choice);
      return out;
    }
  }
  fail(Err::Internal, "howard_mean_payoff: policy iteration did not converge");
}

SubMdp mec_view(const GameGraph& g, const Mec& m) {
  SubMdp v;
  v.g = &g;
  v.local_of.assign(g.num_states(), -1);
  for (int s : m.states) {
    v.local_of[s] = static_cast<int>(v.states.size());
    v.states.push_back(s);
  }
  v.out.resize(v.states.size());
  for (int e : m.edges) v.out[v.local_of[g.edges[e].from]].push_back(e);
  return v;
}

Rat mec_extremal_mean_payoff(const GameGraph& g, const Mec& m, bool maximize,
                             MpSolution* solution_out) {
  SubMdp v = mec_view(g, m);
  MpSolution sol = howard_mean_payoff(v, maximize);
  for (int i = 1; i < v.size(); ++i)
    if (sol.gain[i] != sol.gain[0])
      fail(Err::Internal, "mec_extremal_mean_payoff: non-constant gain on a MEC");
  Rat value = sol.gain[0];
  if (solution_out) *solution_out = std::move(sol);
  return value;
}

Rat enumerate_extremal_mean_payoff(const SubMdp& v, bool maximize) {
  const GameGraph& g = *v.g;
  const int n = v.size();
  std::vector<int> owned;
  for (int i = 0; i < n; ++i)
    if (g.owner(v.states[i]) != Owner::Random) owned.push_back(i);

  std::vector<int> pick(owned.size(), 0);
  std::vector<int> choice(n, -1);
  bool first = true;
  Rat best = 0;
  while (true) {
    for (size_t k = 0; k < owned.size(); ++k) choice[owned[k]] = v.out[owned[k]][pick[k]];
    Eval ev = evaluate_policy(v, choice);
    LocalChain c{&v, &choice};
    int ncomp = 0;
    std::vector<int> comp = local_sccs(c, &ncomp);
    std::vector<char> bottom(ncomp, 1);
    for (int i = 0; i < n; ++i)
      c.for_succ(i, [&](int, int j, const Rat&) {
        if (comp[j] != comp[i]) bottom[comp[i]] = 0;
      });
    for (int i = 0; i < n; ++i) {
      if (!bottom[comp[i]]) continue;
      if (first || (maximize && ev.gain[i] > best) || (!maximize && ev.gain[i] < best)) {
        best = ev.gain[i];
        first = false;
      }
    }
    // odometer
    size_t k = 0;
    while (k < owned.size()) {
      if (++pick[k] < static_cast<int>(v.out[owned[k]].size())) break;
      pick[k] = 0;
      ++k;
    }
    if (k == owned.size()) break;
  }
  if (first) fail(Err::Internal, "enumerate_extremal_mean_payoff: no recurrent class");
  return best;
}

}  // namespace enpar
