#include "enpar/mdp_parity.hpp"

#include <algorithm>

#include "enpar/error.hpp"
#include "enpar/meanpayoff.hpp"

namespace enpar {

std::vector<ColorComponent> color_components(const GameGraph& g, int parity) {
  int max_color = 0;
  for (int s = 0; s < g.num_states(); ++s) max_color = std::max(max_color, g.color(s));
  std::vector<ColorComponent> out;
  for (int d = parity % 2; d <= max_color; d += 2) {
    std::vector<char> keep(g.num_states(), 0);
    bool any = false;
    for (int s = 0; s < g.num_states(); ++s) {
      keep[s] = g.color(s) >= d;
      any |= g.color(s) == d;
    }
    if (!any) continue;
    SubMdp view = SubMdp::restrict_states(g, keep);
    for (Mec& m : mec_decompose(view)) {
      bool has_d = false;
      for (int s : m.states) has_d |= g.color(s) == d;
      if (has_d) out.push_back({d, std::move(m)});
    }
  }
  return out;
}

std::vector<char> qualitative_parity_targets(const GameGraph& g, int parity) {
  std::vector<char> t(g.num_states(), 0);
  for (const auto& cc : color_components(g, parity))
    for (int s : cc.comp.states) t[s] = 1;
  return t;
}

std::vector<int> in_component_visit_choices(const GameGraph& g, const Mec& comp, int target) {
  SubMdp v = mec_view(g, comp);
  const int n = v.size();
  int tl = v.local_of[target];
  if (tl < 0) fail(Err::Internal, "in_component_visit_choices: target outside component");
  // Layer states by rounds of backward expansion toward the target.
  std::vector<int> layer(n, -1);
  layer[tl] = 0;
  bool grew = true;
  int round = 0;
  std::vector<int> choice_local(n, -1);
  while (grew) {
    grew = false;
    ++round;
    for (int i = 0; i < n; ++i) {
      if (layer[i] != -1) continue;
      for (int e : v.out[i]) {
        int j = v.local_of[g.edges[e].to];
        if (layer[j] != -1 && layer[j] < round) {
          layer[i] = round;
          choice_local[i] = e;
          grew = true;
          break;
        }
      }
    }
  }
  std::vector<int> choice(g.num_states(), -1);
  for (int i = 0; i < n; ++i) {
    int s = v.states[i];
    if (g.owner(s) == Owner::Random) continue;
    if (i == tl || choice_local[i] == -1) {
      // The target itself (and any stragglers) just stay inside the component.
      if (layer[i] == -1) fail(Err::Internal, "in_component_visit_choices: unreachable member");
      choice[s] = v.out[i][0];
    } else {
      choice[s] = choice_local[i];
    }
  }
  // Everyone must be layered in a strongly connected component.
  for (int i = 0; i < n; ++i)
    if (layer[i] == -1) fail(Err::Internal, "in_component_visit_choices: component not connected");
  return choice;
}

ParityMdpSolution mdp_parity_value(const GameGraph& g) {
  if (!is_mdp(g)) fail(Err::Internal, "mdp_parity_value expects a single-controller game");
  auto comps = color_components(g, 0);
  std::vector<char> target(g.num_states(), 0);
  for (const auto& cc : comps)
    for (int s : cc.comp.states) target[s] = 1;

  ReachSolution reach = reach_value(g, target, true);
  ParityMdpSolution sol;
  sol.values = std::move(reach.values);
  sol.strategy = std::move(reach.strategy);

  std::vector<char> assigned(g.num_states(), 0);
  for (const auto& cc : comps) {
    int tgt = -1;
    for (int s : cc.comp.states)
      if (g.color(s) == cc.d) {
        tgt = s;
        break;
      }
    std::vector<int> inner = in_component_visit_choices(g, cc.comp, tgt);
    for (int s : cc.comp.states) {
      if (assigned[s] || g.owner(s) == Owner::Random) continue;
      assigned[s] = 1;
      sol.strategy.choice[s] = inner[s];
    }
  }
  return sol;
}

std::vector<char> set_W2(const GameGraph& g) {
  std::vector<char> t = qualitative_parity_targets(g, 1);
  return as_reach(g, t, mdp_controller(g)).set;
}

namespace {

// Zero-slack substructure check: inside a MEC with minimal mean payoff zero,
// the controller forces unbounded downward oscillation iff some MEC of the
// tight (zero-slack) sub-MDP contains a random branch of nonzero slack.
bool zero_mean_oscillation(const GameGraph& g, const Mec& mec, const MpSolution& mp,
                           const SubMdp& view) {
  auto slack = [&](int e) {
    int from = g.edges[e].from, to = g.edges[e].to;
    return Rat(g.edges[e].reward) + mp.bias[view.local_of[to]] - mp.bias[view.local_of[from]];
  };
  SubMdp tight;
  tight.g = &g;
  tight.local_of.assign(g.num_states(), -1);
  for (int s : mec.states) {
    tight.local_of[s] = static_cast<int>(tight.states.size());
    tight.states.push_back(s);
  }
  tight.out.resize(tight.states.size());
  for (int e : mec.edges) {
    int from = g.edges[e].from;
    if (g.owner(from) == Owner::Random || is_zero(slack(e)))
      tight.out[tight.local_of[from]].push_back(e);
  }
  for (const Mec& m : mec_decompose(tight)) {
    for (int s : m.states) {
      if (g.owner(s) != Owner::Random) continue;
      for (int e : g.out[s])
        if (!is_zero(slack(e))) return true;
    }
  }
  return false;
}

enum class MecGood { W1, Loss };

std::vector<char> good_mec_states(const GameGraph& g, MecGood kind) {
  std::vector<char> t(g.num_states(), 0);
  SubMdp whole = SubMdp::whole(g);
  for (const Mec& mec : mec_decompose(whole)) {
    bool good = false;
    if (kind == MecGood::Loss) {
      // Odd-minimum sub-end-component inside this MEC.
      SubMdp mv = mec_view(g, mec);
      int max_color = 0;
      for (int s : mec.states) max_color = std::max(max_color, g.color(s));
      for (int d = 1; d <= max_color && !good; d += 2) {
        std::vector<char> keep(mv.size(), 0);
        bool any = false;
        for (int i = 0; i < mv.size(); ++i) {
          keep[i] = g.color(mv.states[i]) >= d;
          any |= g.color(mv.states[i]) == d;
        }
        if (!any) continue;
        SubMdp restricted = mv.restrict(keep);
        for (const Mec& m : mec_decompose(restricted)) {
          for (int s : m.states)
            if (g.color(s) == d) good = true;
        }
      }
    }
    if (!good) {
      MpSolution mp;
      SubMdp mv = mec_view(g, mec);
      Rat value = mec_extremal_mean_payoff(g, mec, false, &mp);
      if (value < 0)
        good = true;
      else if (is_zero(value) && zero_mean_oscillation(g, mec, mp, mv))
        good = true;
    }
    if (good)
      for (int s : mec.states) t[s] = 1;
  }
  return t;
}

}  // namespace

std::vector<char> set_W1(const GameGraph& g) {
  std::vector<char> t = good_mec_states(g, MecGood::W1);
  return as_reach(g, t, mdp_controller(g)).set;
}

std::vector<char> set_W0(const GameGraph& g) {
  std::vector<char> t = good_mec_states(g, MecGood::Loss);
  return as_reach(g, t, mdp_controller(g)).set;
}

ReachSolution mdp_loss_value(const GameGraph& g) {
  std::vector<char> w0 = set_W0(g);
  return reach_value(g, w0, true);
}

}  // namespace enpar
