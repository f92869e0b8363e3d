#pragma once

#include <string>

#include <json.hpp>

#include "enpar/game.hpp"
#include "enpar/strategy_types.hpp"

namespace enpar {

using Json = nlohmann::ordered_json;

// Canonical game format:
// {"states":[{"id":0,"owner":"max|min|rand","color":0}],
//  "edges":[{"from":0,"to":0,"reward":0,"prob":"1/2"}]}
// Probabilities are "p/q" or decimal strings, mandatory exactly on edges out
// of random states, forbidden elsewhere. Parsing validates the game.
GameGraph game_from_json(const Json& j, const ValidationLimits& lim = {});
Json game_to_json(const GameGraph& g);

GameGraph load_game(const std::string& path, const ValidationLimits& lim = {});
void save_game(const std::string& path, const GameGraph& g);

Json values_to_json(const ValueVector& v);
ValueVector values_from_json(const Json& j);
std::string values_to_csv(const ValueVector& v);

// Strategy transducer format:
// {"owner":"max","modes":K,"m0":0,
//  "update":[[mode,edge,mode'],...], "nxt":[[mode,state,succ],...]}
// nxt records successor state ids; edges are identified by their index in the
// game's edge list. Orderings are stable for diffability.
Json strategy_to_json(const GameGraph& g, const StrategyFD& f);
StrategyFD strategy_from_json(const GameGraph& g, const Json& j);

void save_json(const std::string& path, const Json& j);
Json load_json(const std::string& path);

}  // namespace enpar
