#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "enpar/game.hpp"
#include "enpar/strategy_types.hpp"

namespace enpar {

enum class Cmp { Lt, Le, Eq, Ge, Gt };

// Rational extended with the two infinities, for Limit objective bounds.
struct ExtRat {
  enum class Kind { NegInf, Finite, PosInf } kind = Kind::Finite;
  Rat value;

  static ExtRat neg_inf() { return {Kind::NegInf, Rat(0)}; }
  static ExtRat pos_inf() { return {Kind::PosInf, Rat(0)}; }
  static ExtRat finite(Rat v) { return {Kind::Finite, std::move(v)}; }
};

// Executable objective syntax. Gain and Loss normalize at construction into
// the conjunction/disjunction they abbreviate.
struct Objective {
  enum class Tag {
    EnergyEN,       // k
    EnergyStorage,  // k, l (l < 0 means any l)
    Termination,    // k
    EvenParity,
    OddParity,
    LimInf,  // cmp, bound
    LimSup,  // cmp, bound
    MeanPayoffGt0,
    And,
    Or,
  };
  Tag tag = Tag::EvenParity;
  long long k = 0;
  long long l = -1;
  Cmp cmp = Cmp::Gt;
  ExtRat bound;
  std::vector<Objective> parts;

  static Objective energy(long long k);
  static Objective storage(long long k, long long l);
  static Objective storage_any(long long k);
  static Objective termination(long long k);
  static Objective even_parity();
  static Objective odd_parity();
  static Objective lim_inf(Cmp c, ExtRat b);
  static Objective lim_sup(Cmp c, ExtRat b);
  static Objective mean_payoff_gt0();
  static Objective all_of(std::vector<Objective> parts);
  static Objective any_of(std::vector<Objective> parts);
  static Objective gain();  // And(LimInf > -inf, EvenParity)
  static Objective loss();  // Or(LimInf = -inf, OddParity)
};

struct PlayPrefix {
  std::vector<int> states;    // length n+1 for n steps
  std::vector<int> rewards;   // one per step
  long long initial_energy = 0;
};

// Throws on malformed prefixes (disconnected steps, reward mismatch).
void check_prefix_wellformed(const GameGraph& g, const PlayPrefix& p);

enum class PrefixVerdict { SatisfiedForever, ViolatedForever, Undetermined };

PrefixVerdict check_prefix(const Objective& obj, const PlayPrefix& p);

PrefixVerdict check_storage_prefix(long long k, long long l, const PlayPrefix& p);

// Deterministic simulation summary. Tail-objective fields are heuristic
// estimates only and never feed exact results.
struct PlaySummary {
  PlayPrefix prefix;
  int min_color_tail = 0;      // min color over the suffix window [horizon/2, horizon]
  long long min_energy = 0;    // over the credited trajectory
  long long max_energy = 0;
  bool terminated = false;     // credited level hit <= 0 at some point
  long long first_termination_step = -1;
};

// Reproducible play sampling: the generator is std::mt19937_64 seeded with
// `seed`, and random edges are drawn by exact CDF inversion on a single
// 64-bit draw per step. Run i of a batch uses seed base+i.
PlaySummary sample_play(const GameGraph& g, const StrategyFD& strat_max,
                        const StrategyFD& strat_min, const Configuration& cfg,
                        long long horizon, uint64_t seed);

}  // namespace enpar
