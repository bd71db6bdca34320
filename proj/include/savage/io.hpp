#pragma once

// JSON ingestion and emission for profiles, preferences, acts, coarsenings
// and axiom reports. Every value is validated here; downstream code trusts it.
//
// Profile file:
//   {"outcomes": ["a", "b", "c", "d"],
//    "grid": [0, 0.5, 1],
//    "agents": [{"belief": {"values": [1.8, 0.2]}, "utility": {"a": 1, "b": 0, "c": 0.9, "d": 0}},
//               {"belief": null, "utility": null}],
//    "params": {"anchor": {...}, "phantom": {...}, "alpha": [1, 4, 9], "weights": {"v": [...], "w": [...]}}}
// A belief without "breakpoints" uses "grid". Raw utilities are normalized;
// a constant utility makes the agent completely indifferent.

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "savage/axioms.hpp"
#include "savage/swf.hpp"

namespace savage::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Input error carrying a location: "source:line:column" for syntax errors,
/// "source: /json/path" for validation errors.
class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct ProfileFile {
  Profile profile;
  SwfParams params;
};

struct NamedAct {
  std::string name;
  Act act;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

namespace detail {

/// Cursor into a parsed document that knows its JSON path for diagnostics.
class Node {
 public:
  Node(const Json& j, std::string source, std::string path = "")
      : j_(&j), source_(std::move(source)), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(source_ + ": " + (path_.empty() ? "/" : path_) + ": " + msg);
  }

  const Json& json() const { return *j_; }
  bool is_null() const { return j_->is_null(); }
  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Node operator[](const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    if (!j_->contains(key)) fail("missing key \"" + key + "\"");
    return Node((*j_)[key], source_, path_ + "/" + key);
  }

  Node operator[](std::size_t k) const {
    if (!j_->is_array()) fail("expected an array");
    if (k >= j_->size()) fail("missing entry " + std::to_string(k));
    return Node((*j_)[k], source_, path_ + "/" + std::to_string(k));
  }

  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }

  double number() const {
    if (!j_->is_number()) fail("expected a number");
    return j_->get<double>();
  }

  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (std::size_t k = 0; k < size(); ++k) out.push_back((*this)[k].number());
    return out;
  }

  /// Runs f, re-raising library validation failures at this node's path.
  template <class F>
  auto guard(F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const InvalidInput& e) {
      fail(e.what());
    }
  }

 private:
  const Json* j_;
  std::string source_;
  std::string path_;
};

inline Density density_from(const Node& n, const std::vector<double>& grid) {
  const auto values = n["values"].numbers();
  auto breaks = n.has("breakpoints") ? n["breakpoints"].numbers() : grid;
  if (breaks.empty()) n.fail("belief has no \"breakpoints\" and the file has no \"grid\"");
  return n.guard([&] { return Density(std::move(breaks), values); });
}

inline Utility utility_from(const Node& n, const OutcomeSpace& o) {
  if (!n.json().is_object()) n.fail("expected an object mapping outcome labels to numbers");
  std::map<std::string, double> raw;
  for (const auto& [label, value] : n.json().items()) {
    const Node v = n[label];
    n.guard([&] { return o.index_of(label); });
    raw[label] = v.number();
  }
  for (const auto& label : o.labels())
    if (!raw.count(label)) n.fail("missing utility for outcome \"" + label + "\"");
  return n.guard([&] { return normalize_utility(o, raw); });
}

/// {"belief": ..., "utility": ...}; both null means complete indifference.
inline Preference preference_from(const Node& n, const OutcomeSpace& o, const std::vector<double>& grid) {
  const Node b = n["belief"], u = n["utility"];
  if (b.is_null() != u.is_null()) n.fail("belief and utility must both be given or both be null");
  if (b.is_null()) return Preference::indifferent();
  auto belief = density_from(b, grid);
  auto util = utility_from(u, o);
  if (util.is_zero()) return Preference::indifferent();
  return Preference(std::move(belief), std::move(util));
}

inline OutcomeSpace outcomes_from(const Node& n) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n.size(); ++k) labels.push_back(n[k].string());
  return n.guard([&] { return OutcomeSpace(labels); });
}

inline std::vector<double> grid_from(const Node& root) { return root.has("grid") ? root["grid"].numbers() : std::vector<double>{}; }

}  // namespace detail

inline Json to_json(const Density& d) { return Json{{"breakpoints", d.breakpoints()}, {"values", d.values()}}; }

inline Json to_json(const Utility& u, const OutcomeSpace& o) {
  if (u.is_zero()) return nullptr;
  Json j = Json::object();
  for (std::size_t x = 0; x < o.size(); ++x) j[o.label(x)] = u(x);
  return j;
}

inline Json to_json(const Preference& p, const OutcomeSpace& o) {
  if (p.is_indifferent()) return Json{{"belief", nullptr}, {"utility", nullptr}};
  return Json{{"belief", to_json(p.belief())}, {"utility", to_json(p.utility(), o)}};
}

inline Json to_json(const Act& f, const OutcomeSpace& o) {
  Json j = Json::array();
  for (const auto& s : f.segments()) j.push_back(Json::array({s.where.lo, s.where.hi, o.label(s.outcome)}));
  return j;
}

inline Json to_json(const Coarsening& q) {
  Json pieces = Json::array();
  for (const auto& p : q.pieces())
    pieces.push_back(Json{{"source", {p.source.lo, p.source.hi}},
                          {"target", {p.target.lo, p.target.hi}},
                          {"reversed", p.reversed}});
  return Json{{"pieces", pieces}};
}

inline Json to_json(const Profile& p) {
  Json agents = Json::array();
  for (const auto& a : p.agents()) agents.push_back(to_json(a, p.outcomes()));
  return Json{{"outcomes", p.outcomes().labels()}, {"agents", agents}};
}

inline Json to_json(const ProfileFile& f) {
  Json j = to_json(f.profile);
  Json params = Json::object();
  const auto& o = f.profile.outcomes();
  if (f.params.anchor) params["anchor"] = to_json(*f.params.anchor, o);
  if (f.params.phantom) params["phantom"] = to_json(*f.params.phantom, o);
  if (!f.params.alpha.empty()) params["alpha"] = f.params.alpha;
  if (f.params.weights) params["weights"] = Json{{"v", f.params.weights->v}, {"w", f.params.weights->w}};
  if (!params.empty()) j["params"] = params;
  return j;
}

inline SwfParams params_from(const detail::Node& n, const OutcomeSpace& o, const std::vector<double>& grid) {
  SwfParams out;
  if (n.has("anchor")) out.anchor = detail::preference_from(n["anchor"], o, grid);
  if (n.has("phantom")) out.phantom = detail::preference_from(n["phantom"], o, grid);
  if (n.has("alpha")) out.alpha = n["alpha"].numbers();
  if (n.has("weights")) out.weights = WeightedAggregation{n["weights"]["v"].numbers(), n["weights"]["w"].numbers()};
  return out;
}

inline ProfileFile parse_profile(const std::string& text, const std::string& source = "<profile>") {
  const Json j = parse_json(text, source);
  const detail::Node root(j, source);
  const auto o = detail::outcomes_from(root["outcomes"]);
  const auto grid = detail::grid_from(root);
  const auto agents = root["agents"];
  std::vector<Preference> prefs;
  for (std::size_t k = 0; k < agents.size(); ++k) prefs.push_back(detail::preference_from(agents[k], o, grid));
  Profile p = root.guard([&] { return Profile(o, prefs); });
  SwfParams params;
  if (root.has("params") && !root["params"].is_null()) params = params_from(root["params"], o, grid);
  if (params.weights) {
    const auto w = root["params"]["weights"];
    if (params.weights->v.size() != p.size() || params.weights->w.size() != p.size())
      w.fail("weights need one entry per agent");
  }
  return {std::move(p), std::move(params)};
}

/// Standalone params file; same shape as a profile's "params" object, with an optional "grid".
inline SwfParams parse_params(const std::string& text, const OutcomeSpace& o, const std::string& source = "<params>") {
  const Json j = parse_json(text, source);
  const detail::Node root(j, source);
  return params_from(root, o, detail::grid_from(root));
}

inline ProfileFile load_profile(const std::string& path) { return parse_profile(read_file(path), path); }

/// Preference file: {"outcomes": [...], "belief": ..., "utility": ...}.
inline std::pair<OutcomeSpace, Preference> parse_preference(const std::string& text,
                                                            const std::string& source = "<preference>") {
  const Json j = parse_json(text, source);
  const detail::Node root(j, source);
  auto o = detail::outcomes_from(root["outcomes"]);
  auto p = detail::preference_from(root, o, detail::grid_from(root));
  return {std::move(o), std::move(p)};
}

inline Json preference_file_json(const OutcomeSpace& o, const Preference& p) {
  Json j{{"outcomes", o.labels()}};
  const Json body = to_json(p, o);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

/// Act file: {"acts": {"f": [[0, 0.5, "a"], [0.5, 1, "b"]], ...}}.
inline std::vector<NamedAct> parse_acts(const std::string& text, const OutcomeSpace& o,
                                        const std::string& source = "<acts>") {
  const Json j = parse_json(text, source);
  const detail::Node root(j, source);
  const auto acts = root["acts"];
  if (!acts.json().is_object()) acts.fail("expected an object of named acts");
  std::vector<NamedAct> out;
  for (const auto& item : acts.json().items()) {
    const auto n = acts[item.key()];
    std::vector<Act::Segment> segs;
    for (std::size_t k = 0; k < n.size(); ++k) {
      const auto s = n[k];
      if (s.size() != 3) s.fail("segment must be [from, to, outcome]");
      const double lo = s[0].number(), hi = s[1].number();
      if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) s.fail("segment interval must satisfy 0 <= from < to <= 1");
      const std::string label = s[2].string();
      segs.push_back({{lo, hi}, s.guard([&] { return o.index_of(label); })});
    }
    out.push_back({item.key(), n.guard([&] { return Act(segs); })});
  }
  return out;
}

inline Json acts_json(const std::vector<NamedAct>& acts, const OutcomeSpace& o) {
  Json a = Json::object();
  for (const auto& n : acts) a[n.name] = to_json(n.act, o);
  return Json{{"acts", a}};
}

/// Coarsening file: {"pieces": [{"source": [lo, hi], "target": [lo, hi], "reversed": false}, ...]}.
inline Coarsening parse_coarsening(const std::string& text, const std::string& source = "<coarsening>") {
  const Json j = parse_json(text, source);
  const detail::Node root(j, source);
  const auto pieces = root["pieces"];
  std::vector<Coarsening::Piece> out;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto p = pieces[k];
    const auto s = p["source"].numbers(), t = p["target"].numbers();
    if (s.size() != 2) p["source"].fail("expected [lo, hi]");
    if (t.size() != 2) p["target"].fail("expected [lo, hi]");
    bool rev = false;
    if (p.has("reversed")) {
      if (!p["reversed"].json().is_boolean()) p["reversed"].fail("expected true or false");
      rev = p["reversed"].json().get<bool>();
    }
    out.push_back({{s[0], s[1]}, {t[0], t[1]}, rev});
  }
  return root.guard([&] { return Coarsening(out); });
}

inline Json to_json(const Witness& w) {
  Json j{{"seed", w.seed}, {"trial", w.trial}, {"detail", w.detail}};
  Json profiles = Json::array();
  for (const auto& p : w.profiles) profiles.push_back(to_json(p));
  j["profiles"] = profiles;
  if (!w.profiles.empty()) {
    const auto& o = w.profiles.front().outcomes();
    Json acts = Json::array();
    for (const auto& f : w.acts) acts.push_back(to_json(f, o));
    if (!acts.empty()) j["acts"] = acts;
    if (w.newpref) j["new_preference"] = to_json(*w.newpref, o);
    if (!w.outcomes.empty()) {
      Json labels = Json::array();
      for (std::size_t x : w.outcomes) labels.push_back(o.label(x));
      j["outcome_subset"] = labels;
    }
  }
  if (w.q) j["coarsening"] = to_json(*w.q);
  if (w.agent) j["agent"] = *w.agent;
  return j;
}

inline Json to_json(const AxiomVerdict& v) {
  Json j{{"axiom", v.axiom}, {"verdict", verdict_name(v.verdict)}, {"trials", v.trials}, {"rejected", v.rejected}};
  if (!v.note.empty()) j["note"] = v.note;
  if (v.witness) j["witness"] = to_json(*v.witness);
  return j;
}

}  // namespace savage::io
