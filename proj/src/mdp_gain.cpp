#include "enpar/mdp_gain.hpp"

#include <algorithm>

#include "enpar/error.hpp"
#include "enpar/linalg.hpp"
#include "enpar/mdp_parity.hpp"

namespace enpar {

namespace {

Owner controller_or_max(const GameGraph& g) {
  Owner o = mdp_controller(g);
  return o == Owner::Random ? Owner::Maximizer : o;
}

// AS(EPAR) on a product MDP plus an MD witness combining in-component play
// with the reach part.
void as_epar_with_strategy(const GameGraph& p, std::vector<char>* as_set,
                           std::vector<int>* choice) {
  auto comps = color_components(p, 0);
  std::vector<char> target(p.num_states(), 0);
  for (const auto& cc : comps)
    for (int s : cc.comp.states) target[s] = 1;
  AsReach as = as_reach(p, target, controller_or_max(p));
  choice->assign(p.num_states(), -1);
  for (int s = 0; s < p.num_states(); ++s)
    if (as.set[s]) (*choice)[s] = as.choice[s];
  std::vector<char> assigned(p.num_states(), 0);
  for (const auto& cc : comps) {
    int tgt = -1;
    for (int s : cc.comp.states)
      if (p.color(s) == cc.d) {
        tgt = s;
        break;
      }
    std::vector<int> inner = in_component_visit_choices(p, cc.comp, tgt);
    for (int s : cc.comp.states) {
      if (assigned[s] || p.owner(s) == Owner::Random) continue;
      assigned[s] = 1;
      (*choice)[s] = inner[s];
    }
  }
  *as_set = std::move(as.set);
}

EspResult esp_once(const GameGraph& g, long long k, long long cap) {
  EspResult r;
  r.k = k;
  r.cap = cap;
  r.unfolding = build_saturated(g, cap, CapMode::Clamp);
  as_epar_with_strategy(r.unfolding.product, &r.product_as, &r.product_choice);
  const int n = g.num_states();
  r.set.assign(n, 0);
  r.min_credit.assign(n, -1);
  for (int s = 0; s < n; ++s) {
    for (long long level = 1; level <= cap; ++level) {
      if (r.product_as[r.unfolding.index(s, level)]) {
        r.min_credit[s] = level;
        break;
      }
    }
    long long entry = std::min(k, cap);
    r.set[s] = entry >= 1 && r.product_as[r.unfolding.index(s, entry)];
  }
  return r;
}

}  // namespace

EspResult as_energy_storage_parity(const GameGraph& g, long long k, const EspOptions& opts) {
  if (!is_mdp(g)) fail(Err::Internal, "as_energy_storage_parity expects a single controller");
  if (k < 0) fail(Err::Internal, "as_energy_storage_parity: negative credit");
  long long cap = k + static_cast<long long>(g.num_states()) * g.max_abs_reward;
  if (cap < 1) cap = 1;
  if (k == 0) {
    // Zero credit loses immediately; the set is empty by definition.
    EspResult r = esp_once(g, 1, cap);
    r.k = 0;
    r.set.assign(g.num_states(), 0);
    return r;
  }
  EspResult r = esp_once(g, k, cap);
  if (opts.self_check) {
    EspResult r2 = esp_once(g, k, 2 * cap);
    if (r2.set != r.set)
      fail(Err::CapTooSmallSuspected,
           "storage cap " + std::to_string(cap) + " changed the winning set when doubled");
  }
  return r;
}

SetBResult set_B(const GameGraph& g) {
  if (!is_mdp(g)) fail(Err::Internal, "set_B expects a single-controller game");
  const int n = g.num_states();
  SetBResult r;
  r.core.assign(n, 0);
  r.comp_of.assign(n, -1);

  for (const ColorComponent& cc : color_components(g, 0)) {
    MpSolution mp;
    Rat value = mec_extremal_mean_payoff(g, cc.comp, true, &mp);
    if (!(value > 0)) continue;

    BComponent b;
    b.d = cc.d;
    b.comp = cc.comp;
    b.mp_value = value;
    b.mp = std::move(mp);
    for (int s : b.comp.states)
      if (g.color(s) == b.d) {
        b.visit_target = s;
        break;
      }
    b.visit_choice = in_component_visit_choices(g, b.comp, b.visit_target);

    // Expected hitting times of the target under the visiting policy.
    SubMdp v = mec_view(g, b.comp);
    const int m = v.size();
    std::vector<int> vc(m, -1);
    for (int i = 0; i < m; ++i)
      if (g.owner(v.states[i]) != Owner::Random) vc[i] = b.visit_choice[v.states[i]];
    int tl = v.local_of[b.visit_target];
    std::vector<std::vector<std::pair<int, Rat>>> rows(m);
    std::vector<Rat> rhs(m, Rat(0));
    for (int i = 0; i < m; ++i) {
      rows[i].push_back({i, Rat(1)});
      if (i == tl) continue;
      rhs[i] = 1;
      int s = v.states[i];
      if (g.owner(s) == Owner::Random) {
        for (int e : g.out[s]) rows[i].push_back({v.local_of[g.edges[e].to], -*g.edges[e].prob});
      } else {
        rows[i].push_back({v.local_of[g.edges[vc[i]].to], Rat(-1)});
      }
    }
    b.visit_hit_time = solve_linear_sparse(m, std::move(rows), std::move(rhs));

    // Is the target already recurrent everywhere under the mp policy?
    {
      std::vector<int> full_choice(g.num_states(), -1);
      for (int i = 0; i < m; ++i)
        if (b.mp.choice[i] >= 0) full_choice[v.states[i]] = b.mp.choice[i];
      // BSCCs of the induced chain on the component.
      bool all_contain = true;
      GameGraph sub;  // restricted chain over component states
      std::vector<int> local(g.num_states(), -1);
      for (int i = 0; i < m; ++i) local[v.states[i]] = sub.add_state(Owner::Random, 0);
      for (int i = 0; i < m; ++i) {
        int s = v.states[i];
        if (g.owner(s) == Owner::Random) {
          for (int e : g.out[s])
            sub.add_edge(local[s], local[g.edges[e].to], g.edges[e].reward, *g.edges[e].prob);
        } else {
          sub.add_edge(local[s], local[g.edges[full_choice[s]].to], 0, Rat(1));
        }
      }
      validate(sub);
      for (const auto& c : bscc_decompose(sub)) {
        bool has = false;
        for (int ls : c) has |= ls == local[b.visit_target];
        all_contain &= has;
      }
      b.pure_md = all_contain;
    }

    // Period: expected cycle total >= 1 with cycle = period mp-steps plus one
    // visiting excursion. Uses exact bias spread and hitting times.
    Rat spread = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Rat diff = b.mp.bias[i] - b.mp.bias[j];
        if (diff > spread) spread = diff;
      }
    Rat worst_hit = 0;
    for (int i = 0; i < m; ++i)
      if (b.visit_hit_time[i] > worst_hit) worst_hit = b.visit_hit_time[i];
    Rat need = 2 * spread + Rat(g.max_abs_reward) * worst_hit + 1;
    Rat periods = need / b.mp_value;
    Int pint;
    mpz_cdiv_q(pint.get_mpz_t(), periods.get_num().get_mpz_t(), periods.get_den().get_mpz_t());
    b.period = std::max(1L, pint.get_si());

    int idx = static_cast<int>(r.comps.size());
    for (int s : b.comp.states) {
      r.core[s] = 1;
      if (r.comp_of[s] == -1) r.comp_of[s] = idx;
    }
    r.comps.push_back(std::move(b));
  }

  r.reach = as_reach(g, r.core, controller_or_max(g));
  r.set = r.reach.set;
  return r;
}

MdpGainSolution mdp_gain_value(const GameGraph& g) {
  if (!is_mdp(g)) fail(Err::Internal, "mdp_gain_value expects a single-controller game");
  const int n = g.num_states();
  MdpGainSolution sol;

  long long k_default = std::max<long long>(1, static_cast<long long>(n) * g.max_abs_reward);
  long long k = k_default;
  EspResult esp = as_energy_storage_parity(g, k);
  // Stabilization sweep: grow the credit until the winning set stops changing.
  const int sweep_limit = 10;
  for (int i = 0; i < sweep_limit; ++i) {
    EspResult bigger = as_energy_storage_parity(g, 2 * k);
    if (bigger.set == esp.set) break;
    k = 2 * k;
    esp = std::move(bigger);
    if (i == sweep_limit - 1)
      fail(Err::CapTooSmallSuspected, "storage credit sweep did not stabilize");
  }
  sol.sweep_disagreed = k != k_default;
  sol.k_max = k;

  sol.b = set_B(g);
  sol.in_A = esp.set;
  sol.in_B = sol.b.set;
  std::vector<char> target(n, 0);
  for (int s = 0; s < n; ++s) target[s] = sol.in_A[s] || sol.in_B[s];
  ReachSolution reach = reach_value(g, target, true);
  sol.values = std::move(reach.values);
  sol.reach_strategy = std::move(reach.strategy);
  sol.esp = std::move(esp);
  return sol;
}

}  // namespace enpar
