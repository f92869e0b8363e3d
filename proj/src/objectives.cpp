#include "enpar/objectives.hpp"

#include <algorithm>
#include <random>

#include "enpar/error.hpp"

namespace enpar {

Objective Objective::energy(long long k) {
  Objective o;
  o.tag = Tag::EnergyEN;
  o.k = k;
  return o;
}
Objective Objective::storage(long long k, long long l) {
  Objective o;
  o.tag = Tag::EnergyStorage;
  o.k = k;
  o.l = l;
  return o;
}
Objective Objective::storage_any(long long k) { return storage(k, -1); }
Objective Objective::termination(long long k) {
  Objective o;
  o.tag = Tag::Termination;
  o.k = k;
  return o;
}
Objective Objective::even_parity() {
  Objective o;
  o.tag = Tag::EvenParity;
  return o;
}
Objective Objective::odd_parity() {
  Objective o;
  o.tag = Tag::OddParity;
  return o;
}
Objective Objective::lim_inf(Cmp c, ExtRat b) {
  Objective o;
  o.tag = Tag::LimInf;
  o.cmp = c;
  o.bound = std::move(b);
  return o;
}
Objective Objective::lim_sup(Cmp c, ExtRat b) {
  Objective o;
  o.tag = Tag::LimSup;
  o.cmp = c;
  o.bound = std::move(b);
  return o;
}
Objective Objective::mean_payoff_gt0() {
  Objective o;
  o.tag = Tag::MeanPayoffGt0;
  return o;
}
Objective Objective::all_of(std::vector<Objective> parts) {
  if (parts.empty()) fail(Err::Internal, "empty conjunction");
  Objective o;
  o.tag = Tag::And;
  o.parts = std::move(parts);
  return o;
}
Objective Objective::any_of(std::vector<Objective> parts) {
  if (parts.empty()) fail(Err::Internal, "empty disjunction");
  Objective o;
  o.tag = Tag::Or;
  o.parts = std::move(parts);
  return o;
}
Objective Objective::gain() {
  return all_of({lim_inf(Cmp::Gt, ExtRat::neg_inf()), even_parity()});
}
Objective Objective::loss() {
  return any_of({lim_inf(Cmp::Eq, ExtRat::neg_inf()), odd_parity()});
}

void check_prefix_wellformed(const GameGraph& g, const PlayPrefix& p) {
  if (p.states.empty()) fail(Err::Internal, "empty play prefix");
  if (p.rewards.size() + 1 != p.states.size())
    fail(Err::Internal, "prefix reward count does not match step count");
  if (p.initial_energy < 0) fail(Err::Internal, "negative initial energy");
  for (size_t i = 0; i + 1 < p.states.size(); ++i) {
    int e = find_edge(g, p.states[i], p.states[i + 1]);
    if (e < 0)
      fail(Err::Internal, "prefix step " + std::to_string(i) + " is not an edge");
    if (g.edges[e].reward != p.rewards[i])
      fail(Err::Internal, "prefix step " + std::to_string(i) + " reward mismatch");
  }
}

namespace {

PrefixVerdict energy_verdict(long long k, const PlayPrefix& p) {
  long long level = k;
  if (level <= 0) return PrefixVerdict::ViolatedForever;
  for (int r : p.rewards) {
    level += r;
    if (level <= 0) return PrefixVerdict::ViolatedForever;
  }
  return PrefixVerdict::Undetermined;
}

}  // namespace

PrefixVerdict check_storage_prefix(long long k, long long l, const PlayPrefix& p) {
  if (energy_verdict(k, p) == PrefixVerdict::ViolatedForever)
    return PrefixVerdict::ViolatedForever;
  if (l < 0) return PrefixVerdict::Undetermined;  // ES(k) = union over l
  // Largest drop of any infix: running maximum of prefix sums minus current.
  long long sum = 0, max_prefix = 0;
  for (int r : p.rewards) {
    sum += r;
    if (max_prefix - sum > l) return PrefixVerdict::ViolatedForever;
    max_prefix = std::max(max_prefix, sum);
  }
  return PrefixVerdict::Undetermined;
}

PrefixVerdict check_prefix(const Objective& obj, const PlayPrefix& p) {
  using V = PrefixVerdict;
  switch (obj.tag) {
    case Objective::Tag::EnergyEN:
      return energy_verdict(obj.k, p);
    case Objective::Tag::EnergyStorage:
      return check_storage_prefix(obj.k, obj.l, p);
    case Objective::Tag::Termination:
      return energy_verdict(obj.k, p) == V::ViolatedForever ? V::SatisfiedForever
                                                            : V::Undetermined;
    case Objective::Tag::EvenParity:
    case Objective::Tag::OddParity:
    case Objective::Tag::LimInf:
    case Objective::Tag::LimSup:
    case Objective::Tag::MeanPayoffGt0:
      return V::Undetermined;  // tail objectives are never decided finitely
    case Objective::Tag::And: {
      bool all_sat = true;
      for (const auto& part : obj.parts) {
        V v = check_prefix(part, p);
        if (v == V::ViolatedForever) return V::ViolatedForever;
        all_sat &= v == V::SatisfiedForever;
      }
      return all_sat ? V::SatisfiedForever : V::Undetermined;
    }
    case Objective::Tag::Or: {
      bool all_violated = true;
      for (const auto& part : obj.parts) {
        V v = check_prefix(part, p);
        if (v == V::SatisfiedForever) return V::SatisfiedForever;
        all_violated &= v == V::ViolatedForever;
      }
      return all_violated ? V::ViolatedForever : V::Undetermined;
    }
  }
  return V::Undetermined;
}

PlaySummary sample_play(const GameGraph& g, const StrategyFD& strat_max,
                        const StrategyFD& strat_min, const Configuration& cfg,
                        long long horizon, uint64_t seed) {
  check_strategy(g, strat_max);
  check_strategy(g, strat_min);
  if (strat_max.owner != Owner::Maximizer || strat_min.owner != Owner::Minimizer)
    fail(Err::Internal, "sample_play: strategies on the wrong sides");

  std::mt19937_64 rng(seed);
  PlaySummary out;
  out.prefix.initial_energy = cfg.energy;
  out.prefix.states.push_back(cfg.state);
  long long level = cfg.energy;
  out.min_energy = out.max_energy = level;

  int s = cfg.state;
  int m_max = strat_max.m0, m_min = strat_min.m0;
  if (level <= 0) {
    out.terminated = true;
    out.first_termination_step = 0;
  }
  for (long long step = 0; step < horizon; ++step) {
    int e = -1;
    switch (g.owner(s)) {
      case Owner::Maximizer:
        e = strat_max.move(m_max, s);
        break;
      case Owner::Minimizer:
        e = strat_min.move(m_min, s);
        break;
      case Owner::Random: {
        // Exact CDF inversion on one 64-bit draw: pick the first edge whose
        // cumulative probability exceeds u / 2^64.
        uint64_t u = rng();
        Rat threshold(Int(u), Int(1));
        Rat two64 = Rat(Int(1) << 64);
        threshold /= two64;
        Rat cum = 0;
        for (int cand : g.out[s]) {
          cum += *g.edges[cand].prob;
          e = cand;
          if (threshold < cum) break;
        }
        break;
      }
    }
    m_max = strat_max.next_mode(m_max, e);
    m_min = strat_min.next_mode(m_min, e);
    level += g.edges[e].reward;
    out.prefix.rewards.push_back(g.edges[e].reward);
    s = g.edges[e].to;
    out.prefix.states.push_back(s);
    out.min_energy = std::min(out.min_energy, level);
    out.max_energy = std::max(out.max_energy, level);
    if (level <= 0 && out.first_termination_step < 0) {
      out.terminated = true;
      out.first_termination_step = step;
    }
  }

  out.min_color_tail = g.color(out.prefix.states.back());
  for (size_t i = out.prefix.states.size() / 2; i < out.prefix.states.size(); ++i)
    out.min_color_tail = std::min(out.min_color_tail, g.color(out.prefix.states[i]));
  return out;
}

}  // namespace enpar
