#include "enpar/graph.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

#include "enpar/error.hpp"

namespace enpar {

SubMdp SubMdp::whole(const GameGraph& g) {
  std::vector<char> keep(g.num_states(), 1);
  return restrict_states(g, keep);
}

SubMdp SubMdp::restrict_states(const GameGraph& g, const std::vector<char>& keep) {
  SubMdp v;
  v.g = &g;
  v.local_of.assign(g.num_states(), -1);
  for (int s = 0; s < g.num_states(); ++s) {
    if (keep[s]) {
      v.local_of[s] = static_cast<int>(v.states.size());
      v.states.push_back(s);
    }
  }
  v.out.resize(v.states.size());
  for (int i = 0; i < v.size(); ++i) {
    for (int e : g.out[v.states[i]]) {
      if (keep[g.edges[e].to]) v.out[i].push_back(e);
    }
  }
  return v;
}

SubMdp SubMdp::restrict(const std::vector<char>& keep_local) const {
  std::vector<char> keep_global(g->num_states(), 0);
  for (int i = 0; i < size(); ++i)
    if (keep_local[i]) keep_global[states[i]] = 1;
  SubMdp v = restrict_states(*g, keep_global);
  // Drop edges that this view had already dropped.
  std::vector<char> kept_edge(g->num_edges(), 0);
  for (int i = 0; i < size(); ++i)
    for (int e : out[i]) kept_edge[e] = 1;
  for (auto& es : v.out) {
    es.erase(std::remove_if(es.begin(), es.end(), [&](int e) { return !kept_edge[e]; }),
             es.end());
  }
  return v;
}

std::vector<int> sccs(const SubMdp& v, int* count) {
  const int n = v.size();
  std::vector<int> comp(n, -1), low(n, 0), num(n, -1), stack;
  std::vector<std::pair<int, size_t>> call;  // (local state, edge cursor)
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
      while (cur < v.out[u].size()) {
        int e = v.out[u][cur++];
        int w = v.local_of[v.g->edges[e].to];
        assert(w >= 0);
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
      if (!call.empty()) {
        int parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  if (count) *count = ncomp;
  return comp;
}

std::vector<char> attractor(const SubMdp& v, const std::vector<char>& base_local,
                            const std::function<bool(int)>& existential) {
  const int n = v.size();
  std::vector<char> in(n, 0);
  std::vector<int> missing(n, 0);  // for universal states: kept edges not yet in A
  std::vector<std::vector<int>> preds(n);
  for (int i = 0; i < n; ++i) {
    missing[i] = static_cast<int>(v.out[i].size());
    for (int e : v.out[i]) preds[v.local_of[v.g->edges[e].to]].push_back(i);
  }
  std::deque<int> queue;
  for (int i = 0; i < n; ++i)
    if (base_local[i]) {
      in[i] = 1;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    for (int u : preds[w]) {
      if (in[u]) continue;
      if (existential(v.states[u])) {
        in[u] = 1;
        queue.push_back(u);
      } else {
        // One in-edge may be counted several times via multi-preds; recount lazily.
        int out_cnt = 0;
        for (int e : v.out[u])
          if (!in[v.local_of[v.g->edges[e].to]]) ++out_cnt;
        if (out_cnt == 0 && !v.out[u].empty()) {
          in[u] = 1;
          queue.push_back(u);
        }
      }
    }
  }
  return in;
}

std::vector<Mec> mec_decompose(const SubMdp& v) {
  const GameGraph& g = *v.g;
  const int n = v.size();
  std::vector<char> active(n, 1);
  std::vector<char> edge_ok(g.num_edges(), 0);
  for (int i = 0; i < n; ++i)
    for (int e : v.out[i]) edge_ok[e] = 1;

  auto target_local = [&](int e) { return v.local_of[g.edges[e].to]; };

  bool changed = true;
  std::vector<int> comp;
  int ncomp = 0;
  while (changed) {
    changed = false;
    // Random closure: a random state needs its whole original branch set.
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      int s = v.states[i];
      if (g.owner(s) != Owner::Random) continue;
      for (int e : g.out[s]) {
        int t = v.local_of[g.edges[e].to];
        if (!edge_ok[e] || t < 0 || !active[t]) {
          active[i] = 0;
          changed = true;
          break;
        }
      }
    }
    // Owned states need at least one usable internal edge.
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      int s = v.states[i];
      if (g.owner(s) == Owner::Random) continue;
      bool any = false;
      for (int e : v.out[i])
        if (edge_ok[e] && active[target_local(e)]) any = true;
      if (!any) {
        active[i] = 0;
        changed = true;
      }
    }
    // SCCs of the active structure; cut edges that cross components.
    SubMdp fv;
    fv.g = v.g;
    fv.local_of.assign(g.num_states(), -1);
    std::vector<int> back;
    for (int i = 0; i < n; ++i)
      if (active[i]) {
        fv.local_of[v.states[i]] = static_cast<int>(fv.states.size());
        fv.states.push_back(v.states[i]);
        back.push_back(i);
      }
    fv.out.resize(fv.states.size());
    for (size_t j = 0; j < fv.states.size(); ++j) {
      int i = back[j];
      for (int e : v.out[i]) {
        int t = target_local(e);
        if (edge_ok[e] && t >= 0 && active[t]) fv.out[j].push_back(e);
      }
    }
    comp = sccs(fv, &ncomp);
    for (size_t j = 0; j < fv.states.size(); ++j) {
      int i = back[j];
      int s = v.states[i];
      bool owned = g.owner(s) != Owner::Random;
      for (int e : v.out[i]) {
        if (!edge_ok[e]) continue;
        int t = target_local(e);
        if (t < 0 || !active[t]) {
          if (owned) {
            edge_ok[e] = 0;
            changed = true;
          }
          continue;
        }
        int tj = fv.local_of[g.edges[e].to];
        if (comp[j] != comp[tj]) {
          if (owned) {
            edge_ok[e] = 0;  // owned edges leaving the component are unusable
            changed = true;
          } else {
            active[i] = 0;  // random state branches out of the component
            changed = true;
            break;
          }
        }
      }
    }
    if (changed) continue;

    // Stable: collect components with at least one internal edge.
    std::vector<Mec> result(ncomp);
    std::vector<char> has_edge(ncomp, 0);
    for (size_t j = 0; j < fv.states.size(); ++j) {
      result[comp[j]].states.push_back(fv.states[j]);
      for (int e : fv.out[j])
        if (edge_ok[e]) {
          int tj = fv.local_of[g.edges[e].to];
          if (comp[j] == comp[tj]) {
            result[comp[j]].edges.push_back(e);
            has_edge[comp[j]] = 1;
          }
        }
    }
    std::vector<Mec> mecs;
    for (int c = 0; c < ncomp; ++c) {
      if (!has_edge[c]) continue;
      std::sort(result[c].states.begin(), result[c].states.end());
      std::sort(result[c].edges.begin(), result[c].edges.end());
      mecs.push_back(std::move(result[c]));
    }
    std::sort(mecs.begin(), mecs.end(),
              [](const Mec& a, const Mec& b) { return a.states[0] < b.states[0]; });
    return mecs;
  }
  fail(Err::Internal, "mec_decompose did not stabilize");
}

std::vector<char> can_reach(const GameGraph& g, const std::vector<char>& target) {
  std::vector<std::vector<int>> preds(g.num_states());
  for (int e = 0; e < g.num_edges(); ++e) preds[g.edges[e].to].push_back(g.edges[e].from);
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

std::vector<char> positive_reach(const GameGraph& g, const std::vector<char>& target,
                                 Owner reacher) {
  SubMdp v = SubMdp::whole(g);
  Owner adversary = reacher == Owner::Maximizer ? Owner::Minimizer : Owner::Maximizer;
  std::vector<char> base(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) base[s] = target[s];
  return attractor(v, base, [&](int s) { return g.owner(s) != adversary; });
}

AsReach as_reach(const GameGraph& g, const std::vector<char>& target, Owner reacher) {
  const int n = g.num_states();
  Owner adversary = reacher == Owner::Maximizer ? Owner::Minimizer : Owner::Maximizer;
  std::vector<char> alive(n, 1);

  // Target states are absorbing wins: ignore their outgoing edges throughout.
  auto view_of = [&]() {
    SubMdp v = SubMdp::restrict_states(g, alive);
    for (int i = 0; i < v.size(); ++i)
      if (target[v.states[i]]) v.out[i].clear();
    return v;
  };

  while (true) {
    SubMdp v = view_of();
    std::vector<char> base(v.size(), 0);
    for (int i = 0; i < v.size(); ++i) base[i] = target[v.states[i]];
    // Positive reach of the target inside the remaining arena.
    std::vector<char> reach =
        attractor(v, base, [&](int s) { return g.owner(s) != adversary; });
    std::vector<char> bad(v.size(), 0);
    bool any_bad = false;
    for (int i = 0; i < v.size(); ++i)
      if (!reach[i]) {
        bad[i] = 1;
        any_bad = true;
      }
    if (!any_bad) break;
    // Remove the spoiler attractor of the dead region (target states never leave).
    std::vector<char> doomed =
        attractor(v, bad, [&](int s) { return g.owner(s) != reacher && !target[s]; });
    for (int i = 0; i < v.size(); ++i)
      if (doomed[i]) alive[v.states[i]] = 0;
  }

  AsReach result;
  result.set.assign(n, 0);
  result.choice.assign(n, -1);
  SubMdp v = view_of();
  for (int i = 0; i < v.size(); ++i) result.set[v.states[i]] = 1;

  // Layered strategy: entry rounds of the positive-reach fixpoint.
  std::vector<int> layer(v.size(), -1);
  std::deque<int> frontier;
  for (int i = 0; i < v.size(); ++i)
    if (target[v.states[i]]) {
      layer[i] = 0;
      frontier.push_back(i);
    }
  std::vector<std::vector<int>> preds(v.size());
  for (int i = 0; i < v.size(); ++i)
    for (int e : v.out[i]) preds[v.local_of[g.edges[e].to]].push_back(i);
  // Round-based expansion mirroring the attractor.
  bool grew = true;
  int round = 0;
  while (grew) {
    grew = false;
    ++round;
    for (int i = 0; i < v.size(); ++i) {
      if (layer[i] != -1) continue;
      int s = v.states[i];
      bool join;
      if (g.owner(s) != adversary) {
        join = false;
        for (int e : v.out[i]) {
          int t = v.local_of[g.edges[e].to];
          if (layer[t] != -1 && layer[t] < round) {
            join = true;
            if (g.owner(s) == reacher && result.choice[s] == -1) result.choice[s] = e;
          }
        }
      } else {
        join = !v.out[i].empty();
        for (int e : v.out[i]) {
          int t = v.local_of[g.edges[e].to];
          if (layer[t] == -1 || layer[t] >= round) join = false;
        }
      }
      if (join) {
        layer[i] = round;
        grew = true;
      }
    }
  }
  return result;
}

}  // namespace enpar
