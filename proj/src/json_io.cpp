#include "enpar/json_io.hpp"

#include <fstream>

#include "enpar/error.hpp"

namespace enpar {

namespace {

Owner owner_from_string(const std::string& s) {
  if (s == "max") return Owner::Maximizer;
  if (s == "min") return Owner::Minimizer;
  if (s == "rand") return Owner::Random;
  fail(Err::SchemaError, "unknown owner '" + s + "' (expected max|min|rand)");
}

}  // namespace

GameGraph game_from_json(const Json& j, const ValidationLimits& lim) {
  if (!j.is_object() || !j.contains("states") || !j.contains("edges"))
    fail(Err::SchemaError, "game object needs 'states' and 'edges'");
  GameGraph g;
  const auto& states = j.at("states");
  if (!states.is_array() || states.empty()) fail(Err::SchemaError, "'states' must be a non-empty array");
  g.states.resize(states.size());
  std::vector<char> seen(states.size(), 0);
  for (const auto& st : states) {
    if (!st.contains("id") || !st.at("id").is_number_integer())
      fail(Err::SchemaError, "state entry without integer 'id'");
    long long id = st.at("id").get<long long>();
    if (id < 0 || id >= static_cast<long long>(states.size()))
      fail(Err::SchemaError, "state ids must be dense 0..n-1, got " + std::to_string(id));
    if (seen[id]) fail(Err::SchemaError, "duplicate state id " + std::to_string(id));
    seen[id] = 1;
    StateRecord rec;
    rec.owner = owner_from_string(st.value("owner", std::string("rand")));
    if (!st.contains("color") || !st.at("color").is_number_integer())
      fail(Err::SchemaError, "state " + std::to_string(id) + " without integer 'color'");
    rec.color = st.at("color").get<int>();
    g.states[id] = rec;
  }
  for (const auto& ed : j.at("edges")) {
    if (!ed.contains("from") || !ed.contains("to"))
      fail(Err::SchemaError, "edge entry without 'from'/'to'");
    EdgeRecord rec;
    rec.from = ed.at("from").get<int>();
    rec.to = ed.at("to").get<int>();
    rec.reward = ed.value("reward", 0);
    if (ed.contains("prob")) {
      if (ed.at("prob").is_string())
        rec.prob = rat_from_string(ed.at("prob").get<std::string>());
      else
        fail(Err::SchemaError, "edge probability must be a string like \"1/2\" or \"0.5\"");
    }
    g.edges.push_back(rec);
  }
  validate(g, lim);
  return g;
}

Json game_to_json(const GameGraph& g) {
  Json j;
  j["states"] = Json::array();
  for (int s = 0; s < g.num_states(); ++s) {
    Json st;
    st["id"] = s;
    st["owner"] = owner_name(g.owner(s));
    st["color"] = g.color(s);
    j["states"].push_back(st);
  }
  j["edges"] = Json::array();
  for (const auto& e : g.edges) {
    Json ed;
    ed["from"] = e.from;
    ed["to"] = e.to;
    ed["reward"] = e.reward;
    if (e.prob) ed["prob"] = rat_to_string(*e.prob);
    j["edges"].push_back(ed);
  }
  return j;
}

GameGraph load_game(const std::string& path, const ValidationLimits& lim) {
  return game_from_json(load_json(path), lim);
}

void save_game(const std::string& path, const GameGraph& g) {
  save_json(path, game_to_json(g));
}

Json values_to_json(const ValueVector& v) {
  Json j = Json::array();
  for (size_t s = 0; s < v.size(); ++s) {
    Json entry;
    entry["state"] = s;
    entry["value"] = rat_to_string(v[s]);
    j.push_back(entry);
  }
  return j;
}

ValueVector values_from_json(const Json& j) {
  if (!j.is_array()) fail(Err::SchemaError, "values must be an array");
  ValueVector v(j.size(), Rat(0));
  for (const auto& entry : j) {
    size_t s = entry.at("state").get<size_t>();
    if (s >= v.size()) fail(Err::SchemaError, "value entry for out-of-range state");
    v[s] = rat_from_string(entry.at("value").get<std::string>());
  }
  return v;
}

std::string values_to_csv(const ValueVector& v) {
  std::string out = "state,value\n";
  for (size_t s = 0; s < v.size(); ++s)
    out += std::to_string(s) + "," + rat_to_string(v[s]) + "\n";
  return out;
}

Json strategy_to_json(const GameGraph& g, const StrategyFD& f) {
  Json j;
  j["owner"] = owner_name(f.owner);
  j["modes"] = f.num_modes;
  j["m0"] = f.m0;
  j["update"] = Json::array();
  for (int m = 0; m < f.num_modes; ++m)
    for (int e = 0; e < g.num_edges(); ++e) j["update"].push_back({m, e, f.update[m][e]});
  j["nxt"] = Json::array();
  for (int m = 0; m < f.num_modes; ++m)
    for (int s = 0; s < g.num_states(); ++s)
      if (f.nxt[m][s] >= 0) j["nxt"].push_back({m, s, g.edges[f.nxt[m][s]].to});
  return j;
}

StrategyFD strategy_from_json(const GameGraph& g, const Json& j) {
  StrategyFD f;
  f.owner = owner_from_string(j.at("owner").get<std::string>());
  f.num_modes = j.at("modes").get<int>();
  f.m0 = j.at("m0").get<int>();
  if (f.num_modes <= 0 || f.m0 < 0 || f.m0 >= f.num_modes)
    fail(Err::SchemaError, "bad mode count or initial mode");
  f.update.assign(f.num_modes, std::vector<int>(g.num_edges(), -1));
  f.nxt.assign(f.num_modes, std::vector<int>(g.num_states(), -1));
  for (const auto& u : j.at("update")) {
    int m = u.at(0).get<int>(), e = u.at(1).get<int>(), m2 = u.at(2).get<int>();
    if (m < 0 || m >= f.num_modes || e < 0 || e >= g.num_edges() || m2 < 0 || m2 >= f.num_modes)
      fail(Err::SchemaError, "update entry out of range");
    f.update[m][e] = m2;
  }
  for (const auto& x : j.at("nxt")) {
    int m = x.at(0).get<int>(), s = x.at(1).get<int>(), succ = x.at(2).get<int>();
    if (m < 0 || m >= f.num_modes || s < 0 || s >= g.num_states())
      fail(Err::SchemaError, "nxt entry out of range");
    int e = find_edge(g, s, succ);
    if (e < 0) fail(Err::SchemaError, "nxt entry names a missing edge");
    f.nxt[m][s] = e;
  }
  check_strategy(g, f);
  return f;
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail(Err::IoError, "cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) fail(Err::IoError, "write failed for '" + path + "'");
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::IoError, "cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    fail(Err::ParseError, std::string("json parse error in '") + path + "': " + e.what());
  }
  return j;
}

}  // namespace enpar
