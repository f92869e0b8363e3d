#pragma once

#include <vector>

#include "enpar/game.hpp"
#include "enpar/graph.hpp"
#include "enpar/mdp.hpp"

namespace enpar {

// Sub-end-components witnessing a color d of the requested parity: MECs of
// the color>=d restriction that contain a d-colored state.
struct ColorComponent {
  int d = 0;
  Mec comp;
};
std::vector<ColorComponent> color_components(const GameGraph& mdp, int parity);

// Union of the states of those components.
std::vector<char> qualitative_parity_targets(const GameGraph& mdp, int parity);

// MD choices that keep the play inside the component and visit `target`
// infinitely often almost surely.
std::vector<int> in_component_visit_choices(const GameGraph& g, const Mec& comp, int target);

struct ParityMdpSolution {
  ValueVector values;
  StrategyMD strategy;
};

// Exact optimal even-parity values for a single-controller game whose
// controller maximizes; value = optimal reachability of the good components,
// strategy = reach part plus in-component visiting part.
ParityMdpSolution mdp_parity_value(const GameGraph& mdp);

// Almost-sure winning sets of the controller, per the objective named.
std::vector<char> set_W2(const GameGraph& mdp);  // OPAR
std::vector<char> set_W1(const GameGraph& mdp);  // LimInf = -infinity
std::vector<char> set_W0(const GameGraph& mdp);  // Loss

// Optimal probability of Loss: exact reachability of W0.
ReachSolution mdp_loss_value(const GameGraph& mdp);

}  // namespace enpar
