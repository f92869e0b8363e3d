#include "enpar/ssg.hpp"

#include <algorithm>
#include <functional>

#include "enpar/error.hpp"
#include "enpar/mdp.hpp"
#include "enpar/mdp_parity.hpp"

namespace enpar {

GameGraph fix_md(const GameGraph& g, const StrategyMD& s, std::vector<int>* edge_to_base) {
  GameGraph out;
  out.states = g.states;
  for (auto& st : out.states)
    if (st.owner == s.owner) st.owner = Owner::Random;
  if (edge_to_base) edge_to_base->clear();
  for (int e = 0; e < g.num_edges(); ++e) {
    const EdgeRecord& ed = g.edges[e];
    if (g.owner(ed.from) == s.owner) {
      if (s.choice[ed.from] != e) continue;
      out.add_edge(ed.from, ed.to, ed.reward, Rat(1));
    } else {
      EdgeRecord copy = ed;
      out.edges.push_back(copy);
    }
    if (edge_to_base) edge_to_base->push_back(e);
  }
  validate(out);
  return out;
}

namespace {

struct SideEval {
  // Evaluate the MDP where the given side has been fixed; values are from the
  // Maximizer's perspective, strategy is the opponent's optimal MD in base
  // edge ids.
  std::function<std::pair<ValueVector, StrategyMD>(const GameGraph&, const std::vector<int>&)>
      eval;
};

std::vector<int> owned_states(const GameGraph& g, Owner o) {
  std::vector<int> out;
  for (int s = 0; s < g.num_states(); ++s)
    if (g.owner(s) == o) out.push_back(s);
  return out;
}

uint64_t strategy_count(const GameGraph& g, const std::vector<int>& states, uint64_t limit) {
  uint64_t count = 1;
  for (int s : states) {
    count *= static_cast<uint64_t>(g.out[s].size());
    if (count > limit) return limit + 1;
  }
  return count;
}

StrategyMD lowest_strategy(const GameGraph& g, Owner o) {
  StrategyMD s;
  s.owner = o;
  s.choice.assign(g.num_states(), -1);
  for (int st = 0; st < g.num_states(); ++st)
    if (g.owner(st) == o) s.choice[st] = g.out[st][0];
  return s;
}

bool odometer_next(const GameGraph& g, const std::vector<int>& states, std::vector<int>& pick) {
  for (size_t k = 0; k < states.size(); ++k) {
    if (++pick[k] < static_cast<int>(g.out[states[k]].size())) return true;
    pick[k] = 0;
  }
  return false;
}

StrategyMD strategy_of_pick(const GameGraph& g, Owner o, const std::vector<int>& states,
                            const std::vector<int>& pick) {
  StrategyMD s;
  s.owner = o;
  s.choice.assign(g.num_states(), -1);
  for (size_t k = 0; k < states.size(); ++k) s.choice[states[k]] = g.out[states[k]][pick[k]];
  return s;
}

struct EngineResult {
  ValueVector values;
  StrategyMD sigma, pi;
  ValueVector cert_max, cert_min;
};

// Search over one side's MD strategies with an exact MDP evaluator for the
// other side. `up` evaluates with Minimizer fixed (an upper bound per
// candidate), `down` with Maximizer fixed (a lower bound per candidate).
EngineResult ssg_engine(const GameGraph& g, const SideEval& up, const SideEval& down,
                        SolveMode mode, const SolveBudget& budget) {
  std::vector<int> mins = owned_states(g, Owner::Minimizer);
  std::vector<int> maxs = owned_states(g, Owner::Maximizer);

  auto eval_up = [&](const StrategyMD& pi) {
    std::vector<int> e2b;
    GameGraph m = fix_md(g, pi, &e2b);
    auto [v, strat] = up.eval(m, e2b);
    return std::make_pair(std::move(v), std::move(strat));
  };
  auto eval_down = [&](const StrategyMD& sigma) {
    std::vector<int> e2b;
    GameGraph m = fix_md(g, sigma, &e2b);
    auto [v, strat] = down.eval(m, e2b);
    return std::make_pair(std::move(v), std::move(strat));
  };

  auto enumerate = [&]() -> EngineResult {
    if (strategy_count(g, mins, budget.max_strategies) > budget.max_strategies ||
        strategy_count(g, maxs, budget.max_strategies) > budget.max_strategies)
      fail(Err::BudgetExceeded, "strategy enumeration above the configured budget");

    const int n = g.num_states();
    ValueVector min_vec;
    {
      std::vector<int> pick(mins.size(), 0);
      bool first = true;
      do {
        StrategyMD pi = strategy_of_pick(g, Owner::Minimizer, mins, pick);
        ValueVector v = eval_up(pi).first;
        if (first) {
          min_vec = v;
          first = false;
        } else {
          for (int s = 0; s < n; ++s)
            if (v[s] < min_vec[s]) min_vec[s] = v[s];
        }
      } while (odometer_next(g, mins, pick));
    }
    // Uniform attainer; enumeration order makes it lexicographic-least.
    StrategyMD pi_star;
    ValueVector vals;
    {
      std::vector<int> pick(mins.size(), 0);
      bool found = false;
      do {
        StrategyMD pi = strategy_of_pick(g, Owner::Minimizer, mins, pick);
        ValueVector v = eval_up(pi).first;
        if (v == min_vec) {
          pi_star = pi;
          vals = v;
          found = true;
          break;
        }
      } while (odometer_next(g, mins, pick));
      if (!found)
        fail(Err::UniformityViolated, "no single Minimizer strategy attains the minimum everywhere");
    }
    // Maximizer side: enumerate for a uniform attainer of the same values.
    StrategyMD sigma_star;
    ValueVector cert_min;
    {
      std::vector<int> pick(maxs.size(), 0);
      ValueVector max_vec;
      bool first = true;
      do {
        StrategyMD sg = strategy_of_pick(g, Owner::Maximizer, maxs, pick);
        ValueVector v = eval_down(sg).first;
        if (first) {
          max_vec = v;
          first = false;
        } else {
          for (int s = 0; s < n; ++s)
            if (v[s] > max_vec[s]) max_vec[s] = v[s];
        }
      } while (odometer_next(g, maxs, pick));
      if (max_vec != vals)
        fail(Err::Internal, "determinacy violated: player enumerations disagree");
      std::vector<int> pick2(maxs.size(), 0);
      bool found = false;
      do {
        StrategyMD sg = strategy_of_pick(g, Owner::Maximizer, maxs, pick2);
        ValueVector v = eval_down(sg).first;
        if (v == max_vec) {
          sigma_star = sg;
          cert_min = v;
          found = true;
          break;
        }
      } while (odometer_next(g, maxs, pick2));
      if (!found)
        fail(Err::UniformityViolated, "no single Maximizer strategy attains the maximum everywhere");
    }
    EngineResult r;
    r.values = vals;
    r.sigma = sigma_star;
    r.pi = pi_star;
    r.cert_max = eval_up(pi_star).first;
    r.cert_min = cert_min;
    return r;
  };

  if (mode == SolveMode::Enumerate) return enumerate();

  // Alternating strategy improvement with an exact certificate.
  StrategyMD pi = lowest_strategy(g, Owner::Minimizer);
  for (int round = 0; round < budget.max_improve_rounds; ++round) {
    // Minimizer improvement against exact evaluations.
    ValueVector v_up;
    StrategyMD sigma_up;
    for (int it = 0; it <= budget.max_improve_rounds; ++it) {
      auto [v, strat] = eval_up(pi);
      v_up = std::move(v);
      sigma_up = std::move(strat);
      bool switched = false;
      for (int s : mins) {
        int best = pi.choice[s];
        Rat best_v = v_up[g.edges[best].to];
        for (int e : g.out[s]) {
          if (v_up[g.edges[e].to] < best_v) {
            best = e;
            best_v = v_up[g.edges[e].to];
          }
        }
        if (best != pi.choice[s]) {
          pi.choice[s] = best;
          switched = true;
        }
      }
      if (!switched) break;
    }
    // Maximizer side: start from the best response and improve against exact
    // lower evaluations until the certificate closes.
    StrategyMD sigma = sigma_up;
    for (int it = 0; it <= budget.max_improve_rounds; ++it) {
      auto [v_dn, pi_dn] = eval_down(sigma);
      if (v_dn == v_up) {
        EngineResult r;
        r.values = v_up;
        r.sigma = sigma;
        r.pi = pi;
        r.cert_max = v_up;
        r.cert_min = v_dn;
        return r;
      }
      bool switched = false;
      for (int s : maxs) {
        int best = sigma.choice[s];
        Rat best_v = v_dn[g.edges[best].to];
        for (int e : g.out[s]) {
          if (v_dn[g.edges[e].to] > best_v) {
            best = e;
            best_v = v_dn[g.edges[e].to];
          }
        }
        if (best != sigma.choice[s]) {
          sigma.choice[s] = best;
          switched = true;
        }
      }
      if (!switched) {
        // Certificate open; maybe the Minimizer can still improve against
        // this Maximizer's best response. Feed it back and retry.
        pi = pi_dn;
        break;
      }
    }
  }
  return enumerate();
}

StrategyMD map_back(const StrategyMD& s, const std::vector<int>& edge_to_base) {
  StrategyMD out = s;
  for (auto& c : out.choice)
    if (c >= 0) c = edge_to_base[c];
  return out;
}

SideEval parity_up() {
  SideEval e;
  e.eval = [](const GameGraph& m, const std::vector<int>& e2b) {
    ParityMdpSolution sol = mdp_parity_value(m);
    StrategyMD strat = map_back(sol.strategy, e2b);
    strat.owner = Owner::Maximizer;
    return std::make_pair(std::move(sol.values), std::move(strat));
  };
  return e;
}

SideEval parity_down() {
  SideEval e;
  e.eval = [](const GameGraph& m, const std::vector<int>& e2b) {
    // Minimizing MDP: min P(EPAR) = 1 - max P(EPAR(col+1)) on the dual.
    GameGraph flipped = shift_colors(dual(m));
    validate(flipped);
    ParityMdpSolution sol = mdp_parity_value(flipped);
    ValueVector v(m.num_states());
    for (int s = 0; s < m.num_states(); ++s) v[s] = Rat(1) - sol.values[s];
    StrategyMD strat = map_back(sol.strategy, e2b);
    strat.owner = Owner::Minimizer;
    return std::make_pair(std::move(v), std::move(strat));
  };
  return e;
}

SideEval reach_up(const std::vector<char>& target) {
  SideEval e;
  e.eval = [target](const GameGraph& m, const std::vector<int>& e2b) {
    ReachSolution sol = max_reach_value(m, target);
    StrategyMD strat = map_back(sol.strategy, e2b);
    strat.owner = Owner::Maximizer;
    return std::make_pair(std::move(sol.values), std::move(strat));
  };
  return e;
}

SideEval reach_down(const std::vector<char>& target) {
  SideEval e;
  e.eval = [target](const GameGraph& m, const std::vector<int>& e2b) {
    ReachSolution sol = min_reach_value(m, target);
    StrategyMD strat = map_back(sol.strategy, e2b);
    strat.owner = Owner::Minimizer;
    return std::make_pair(std::move(sol.values), std::move(strat));
  };
  return e;
}

}  // namespace

ParitySolution solve_parity_game(const GameGraph& g, SolveMode mode, const SolveBudget& budget) {
  if (!g.validated) fail(Err::Internal, "solve_parity_game: unvalidated game");
  EngineResult r = ssg_engine(g, parity_up(), parity_down(), mode, budget);
  ParitySolution sol;
  sol.values = std::move(r.values);
  sol.sigma = std::move(r.sigma);
  sol.pi = std::move(r.pi);
  sol.certificate_max = std::move(r.cert_max);
  sol.certificate_min = std::move(r.cert_min);
  if (sol.certificate_max != sol.values || sol.certificate_min != sol.values)
    fail(Err::Internal, "solve_parity_game: certificate mismatch");
  return sol;
}

std::pair<ValueVector, StrategyMD> best_response_parity(const GameGraph& g,
                                                        const StrategyMD& fixed,
                                                        Owner fixed_player) {
  if (fixed.owner != fixed_player) fail(Err::Internal, "best_response_parity: owner mismatch");
  std::vector<int> e2b;
  GameGraph m = fix_md(g, fixed, &e2b);
  if (fixed_player == Owner::Minimizer) {
    auto [v, strat] = parity_up().eval(m, e2b);
    return {std::move(v), std::move(strat)};
  }
  auto [v, strat] = parity_down().eval(m, e2b);
  return {std::move(v), std::move(strat)};
}

ReachGameSolution solve_reach_game(const GameGraph& g, const std::vector<char>& target,
                                   SolveMode mode, const SolveBudget& budget) {
  EngineResult r = ssg_engine(g, reach_up(target), reach_down(target), mode, budget);
  ReachGameSolution sol;
  sol.values = std::move(r.values);
  sol.sigma = std::move(r.sigma);
  sol.pi = std::move(r.pi);
  return sol;
}

}  // namespace enpar
