#pragma once

// Finite Kripke models (W, R, V) and their JSON document format:
//   {"states": [id...], "edges": [[from, to]...], "valuation": {prop: [id...]}}

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mucalc/detail/random.hpp"
#include "mucalc/error.hpp"
#include "mucalc/state_set.hpp"

namespace mucalc {

class KripkeModel {
 public:
  using Edge = std::pair<StateIndex, StateIndex>;

  // Validates the model: nonempty state set, unique ids, in-range endpoints.
  // Duplicate edges and valuation members collapse.
  KripkeModel(std::vector<std::string> states, const std::vector<Edge>& edges,
              std::map<std::string, std::vector<StateIndex>> valuation)
      : names_(std::move(states)), successors_(names_.size()) {
    if (names_.empty()) throw ModelError("model must have at least one state");
    for (StateIndex i = 0; i < names_.size(); ++i) {
      if (!index_.emplace(names_[i], i).second)
        throw ModelError("duplicate state id '" + names_[i] + "'");
    }
    for (const auto& [from, to] : edges) {
      if (from >= size() || to >= size()) throw ModelError("edge endpoint out of range");
      successors_[from].push_back(to);
    }
    for (auto& succ : successors_) {
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    for (auto& [prop, members] : valuation) {
      StateSet set(size());
      for (StateIndex i : members) {
        if (i >= size()) throw ModelError("valuation of '" + prop + "' references a state out of range");
        set.insert(i);
      }
      valuation_.emplace(prop, std::move(set));
    }
  }

  std::size_t size() const noexcept { return names_.size(); }

  const std::string& state_name(StateIndex i) const { return names_.at(i); }
  const std::vector<std::string>& state_names() const noexcept { return names_; }

  StateIndex index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw ModelError("unknown state '" + std::string(name) + "'");
    return it->second;
  }

  bool has_state(std::string_view name) const { return index_.contains(std::string(name)); }

  std::span<const StateIndex> successor_indices(StateIndex w) const { return successors_.at(w); }

  StateSet successors(StateIndex w) const {
    StateSet out(size());
    for (StateIndex v : successors_.at(w)) out.insert(v);
    return out;
  }

  StateSet successors(std::string_view name) const { return successors(index_of(name)); }

  bool has_edge(StateIndex from, StateIndex to) const {
    const auto& succ = successors_.at(from);
    return std::binary_search(succ.begin(), succ.end(), to);
  }

  std::size_t edge_count() const noexcept {
    std::size_t n = 0;
    for (const auto& succ : successors_) n += succ.size();
    return n;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (StateIndex w = 0; w < size(); ++w)
      for (StateIndex v : successors_[w]) out.emplace_back(w, v);
    return out;
  }

  // V(p); propositions absent from the valuation are false everywhere.
  StateSet valuation(std::string_view prop) const {
    auto it = valuation_.find(std::string(prop));
    return it == valuation_.end() ? StateSet(size()) : it->second;
  }

  const std::map<std::string, StateSet>& valuation_map() const noexcept { return valuation_; }

  StateSet all_states() const { return StateSet::full(size()); }

  // Equality by state ids, independent of state order. A proposition mapped
  // to the empty set equals an absent one.
  friend bool operator==(const KripkeModel& a, const KripkeModel& b) {
    if (a.size() != b.size()) return false;
    for (const auto& name : a.names_)
      if (!b.has_state(name)) return false;
    auto translate = [&](StateIndex i) { return b.index_of(a.names_[i]); };
    for (StateIndex w = 0; w < a.size(); ++w) {
      if (a.successors_[w].size() != b.successors_[translate(w)].size()) return false;
      for (StateIndex v : a.successors_[w])
        if (!b.has_edge(translate(w), translate(v))) return false;
    }
    auto same_props = [](const KripkeModel& x, const KripkeModel& y, auto map_index) {
      for (const auto& [prop, set] : x.valuation_) {
        const StateSet other = y.valuation(prop);
        if (set.count() != other.count()) return false;
        for (StateIndex i : set.indices())
          if (!other.contains(map_index(i))) return false;
      }
      return true;
    };
    return same_props(a, b, translate) &&
           same_props(b, a, [&](StateIndex i) { return a.index_of(b.names_[i]); });
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateIndex> index_;
  std::vector<std::vector<StateIndex>> successors_;
  std::map<std::string, StateSet> valuation_;
};

inline KripkeModel model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ModelError("model document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "states" && key != "edges" && key != "valuation")
      throw ModelError("unexpected key '" + key + "' in model document");
  }
  if (!doc.contains("states") || !doc["states"].is_array())
    throw ModelError("model document needs a \"states\" array");

  std::vector<std::string> states;
  for (const auto& s : doc["states"]) {
    if (!s.is_string()) throw ModelError("state ids must be strings");
    states.push_back(s.get<std::string>());
  }
  if (states.empty()) throw ModelError("model must have at least one state");

  std::unordered_map<std::string, StateIndex> index;
  for (StateIndex i = 0; i < states.size(); ++i) {
    if (!index.emplace(states[i], i).second)
      throw ModelError("duplicate state id '" + states[i] + "'");
  }
  auto lookup = [&](const nlohmann::json& id, const char* where) {
    if (!id.is_string()) throw ModelError(std::string("non-string state id in ") + where);
    auto it = index.find(id.get<std::string>());
    if (it == index.end())
      throw ModelError("unknown state '" + id.get<std::string>() + "' in " + where);
    return it->second;
  };

  std::vector<KripkeModel::Edge> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ModelError("\"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2) throw ModelError("each edge must be a [from, to] pair");
      edges.emplace_back(lookup(e[0], "edges"), lookup(e[1], "edges"));
    }
  }

  std::map<std::string, std::vector<StateIndex>> valuation;
  if (doc.contains("valuation")) {
    if (!doc["valuation"].is_object()) throw ModelError("\"valuation\" must be an object");
    for (const auto& [prop, members] : doc["valuation"].items()) {
      if (!members.is_array()) throw ModelError("valuation of '" + prop + "' must be an array");
      auto& out = valuation[prop];
      for (const auto& id : members) out.push_back(lookup(id, "valuation"));
    }
  }
  return KripkeModel(std::move(states), edges, std::move(valuation));
}

inline KripkeModel load_model(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  }
  return model_from_json(doc);
}

// Canonical document: states, edges and valuation keys sorted lexicographically.
inline nlohmann::json model_to_json(const KripkeModel& m) {
  std::vector<std::string> states = m.state_names();
  std::sort(states.begin(), states.end());

  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [from, to] : m.edges()) edges.emplace_back(m.state_name(from), m.state_name(to));
  std::sort(edges.begin(), edges.end());

  nlohmann::json doc;
  doc["states"] = states;
  doc["edges"] = nlohmann::json::array();
  for (const auto& [from, to] : edges) doc["edges"].push_back({from, to});
  doc["valuation"] = nlohmann::json::object();
  for (const auto& [prop, set] : m.valuation_map()) {
    std::vector<std::string> members;
    for (StateIndex i : set.indices()) members.push_back(m.state_name(i));
    std::sort(members.begin(), members.end());
    doc["valuation"][prop] = members;
  }
  return doc;
}

inline std::string save_model(const KripkeModel& m) { return model_to_json(m).dump(2) + "\n"; }

// Deterministic in its arguments. States are named s0, s1, ... zero-padded so
// that lexicographic and numeric order agree.
inline KripkeModel random_model(std::uint64_t seed, std::size_t n_states, double edge_density,
                                const std::vector<std::string>& props) {
  if (n_states < 1) throw InvalidArgument("random_model needs at least one state");
  if (!(edge_density >= 0.0 && edge_density <= 1.0))
    throw InvalidArgument("edge density must lie in [0, 1]");
  detail::Rng rng(seed);
  const std::size_t width = std::to_string(n_states - 1).size();
  std::vector<std::string> states;
  for (std::size_t i = 0; i < n_states; ++i) {
    std::string digits = std::to_string(i);
    states.push_back("s" + std::string(width - digits.size(), '0') + digits);
  }
  std::vector<KripkeModel::Edge> edges;
  for (StateIndex w = 0; w < n_states; ++w)
    for (StateIndex v = 0; v < n_states; ++v)
      if (rng.bernoulli(edge_density)) edges.emplace_back(w, v);
  std::map<std::string, std::vector<StateIndex>> valuation;
  for (const auto& p : props) {
    auto& members = valuation[p];
    for (StateIndex w = 0; w < n_states; ++w)
      if (rng.bernoulli(0.5)) members.push_back(w);
  }
  return KripkeModel(std::move(states), edges, std::move(valuation));
}

}  // namespace mucalc
