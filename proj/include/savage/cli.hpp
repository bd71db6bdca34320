#pragma once

// Command surface of the `baru` tool. run_cli writes to the given streams and
// returns the exit code: 0 ok, 1 an axiom was Violated, 2 input error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "savage/harness.hpp"
#include "savage/io.hpp"
#include "savage/scenarios.hpp"
#include "savage/svg.hpp"

namespace savage::cli {

inline std::string fmt(double v) {
  if (std::abs(v) < 5e-13) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string join(const std::vector<double>& v, const char* sep = "/") {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? sep : "") + fmt(v[k]);
  return out;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::ParseError(path + ": cannot write file");
  out << text;
}

/// Masses of `d` on the common refinement of the profile's beliefs and d itself.
inline std::string belief_on_grid(const Density& d, const Profile& p) {
  auto ds = p.concerned_beliefs();
  ds.push_back(d);
  const auto grid = common_refinement(ds);
  return join(segment_masses(d, grid)) + " on breakpoints " + join(grid, " ");
}

inline std::string preference_line(const Preference& p, const Profile& prof) {
  if (p.is_indifferent()) return "complete indifference";
  const auto& o = prof.outcomes();
  std::string s = "belief " + belief_on_grid(p.belief(), prof) + "; utility";
  for (std::size_t x = 0; x < o.size(); ++x) s += " " + o.label(x) + "=" + fmt(p.utility()(x));
  return s;
}

/// Acts from --acts, or one constant act per outcome.
inline std::vector<io::NamedAct> acts_or_constants(const std::string& path, const OutcomeSpace& o) {
  if (!path.empty()) return io::parse_acts(io::read_file(path), o, path);
  std::vector<io::NamedAct> out;
  for (std::size_t x = 0; x < o.size(); ++x) out.push_back({o.label(x), Act::constant(x)});
  return out;
}

inline SwfParams resolve_params(const io::ProfileFile& pf, const std::string& params_path) {
  if (params_path.empty()) return pf.params;
  return io::parse_params(io::read_file(params_path), pf.profile.outcomes(), params_path);
}

// ------------------------------------------------------------ aggregate

inline int cmd_aggregate(const std::string& profile_path, const std::string& swf_name,
                         const std::string& params_path, const std::string& acts_path, std::ostream& out) {
  const auto pf = io::load_profile(profile_path);
  const auto& p = pf.profile;
  const auto& o = p.outcomes();
  const auto res = make_swf(swf_name, resolve_params(pf, params_path))(p);
  const auto acts = acts_or_constants(acts_path, o);
  out << "swf: " << swf_name << "\n";
  out << "agents: " << p.size() << " (" << p.concerned().size() << " concerned)\n";
  out << "belief weights: " << join(res.belief_weights, " ") << "\n";
  out << "utility weights: " << join(res.utility_weights, " ") << "\n";
  if (res.preference.is_indifferent()) {
    out << "society: complete indifference\n";
    if (res.belief) out << "society belief (utility sum is constant): " << belief_on_grid(*res.belief, p) << "\n";
    return 0;
  }
  const auto& soc = res.preference;
  out << "society: " << preference_line(soc, p) << "\n";
  struct Row {
    std::string name;
    double ev;
    double raw;
  };
  std::vector<Row> rows;
  for (const auto& a : acts) {
    double raw = 0.0;
    for (std::size_t i : res.concerned)
      raw += res.utility_weights[i] * expected_utility(Preference(soc.belief(), p.agent(i).utility()), a.act);
    rows.push_back({a.name, expected_utility(soc, a.act), raw});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.ev > b.ev + kExactTol; });
  out << "ranking (EV normalized, EV of the weighted utility sum):\n";
  for (const auto& r : rows) out << "  " << r.name << "  " << fmt(r.ev) << "  " << fmt(r.raw) << "\n";
  std::string chain = rows.front().name;
  for (std::size_t k = 1; k < rows.size(); ++k)
    chain += (rows[k - 1].ev - rows[k].ev > kExactTol ? " ≻ " : " ∼ ") + rows[k].name;
  out << chain << "\n";
  return 0;
}

// --------------------------------------------------------- axiom-report

inline int cmd_axiom_report(const std::string& profile_path, const std::string& swf_name,
                            const std::string& params_path, std::size_t trials, std::uint64_t seed,
                            unsigned threads, const std::string& report_path, std::ostream& out) {
  std::optional<io::ProfileFile> pf;
  SwfParams params;
  if (!profile_path.empty()) {
    pf = io::load_profile(profile_path);
    params = resolve_params(*pf, params_path);
  }
  const auto swf = make_swf(swf_name, params);
  const auto expected = expected_violations(swf_name);
  io::Json records = io::Json::array();
  bool any_violated = false, pattern = true;
  char line[256];
  out << "axiom report for " << swf_name << " (seed " << seed << ", " << trials << " trials per axiom)\n";
  std::snprintf(line, sizeof line, "%-34s %-20s %-8s %-9s %s\n", "axiom", "verdict", "trials", "rejected",
                "known");
  out << line;
  auto emit = [&](const AxiomVerdict& v, const std::string& known) {
    std::snprintf(line, sizeof line, "%-34s %-20s %-8zu %-9zu %s\n", v.axiom.c_str(), verdict_name(v.verdict),
                  v.trials, v.rejected, known.c_str());
    out << line;
    if (v.witness) out << "    witness: " << v.witness->detail << "\n";
    records.push_back(io::to_json(v));
    any_violated = any_violated || v.violated();
  };
  for (Axiom a : all_axioms()) {
    const auto v = run_axiom(swf, a, trials, seed, threads);
    std::string known;
    if (a == Axiom::kRestrictedPareto) {
      known = "(consequence, not in the matrix)";
    } else {
      const bool exp = expected.count(a) > 0;
      known = exp ? "violated" : "satisfied";
      pattern = pattern && (exp == v.violated());
    }
    emit(v, known);
  }
  if (pf) {
    const auto& p = pf->profile;
    auto fixed = check_anonymity(swf, p);
    fixed.axiom = "anonymity (input profile)";
    emit(fixed, "");
    for (std::size_t i : p.concerned()) {
      auto nbi = check_no_belief_imposition(swf, p, i);
      nbi.axiom = "no belief imposition (agent " + std::to_string(i + 1) + ")";
      emit(nbi, "");
      std::vector<double> raw(p.outcomes().size());
      for (std::size_t x = 0; x < raw.size(); ++x) raw[x] = x % 2 ? 1.0 : -1.0;
      auto cont = check_continuity(swf, p, i, Density::uniform(), raw);
      cont.axiom = "continuity (agent " + std::to_string(i + 1) + ")";
      emit(cont, "");
    }
  }
  out << "matrix pattern " << (pattern ? "matches" : "does not match") << " the known violations of " << swf_name
      << "\n";
  io::Json report{{"tool", "baru"},     {"version", io::kToolVersion}, {"swf", swf_name},
                  {"seed", seed},       {"trials", trials},            {"matches_known_pattern", pattern},
                  {"axioms", records}};
  if (!profile_path.empty()) report["profile"] = profile_path;
  write_file(report_path, report.dump(2) + "\n");
  out << "report written to " << report_path << "\n";
  return any_violated ? 1 : 0;
}

// -------------------------------------------------------------- scenarios

inline int scenario_table1(std::ostream& out) {
  const auto t = scenarios::table1();
  const auto& p = t.profile;
  const auto& o = p.outcomes();
  const auto w1 = scenarios::omega1();
  char line[200];
  out << "Table 1 (w1 = [0,0.5), w2 = [0.5,1); f = a on w1, b on w2; g = c)\n";
  std::snprintf(line, sizeof line, "%-8s %6s %6s | %5s %5s %5s | %6s %6s\n", "", "P(w1)", "P(w2)", "u(a)", "u(b)",
                "u(c)", "EV(f)", "EV(g)");
  out << line;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& a = p.agent(i);
    const double pw1 = measure(a.belief(), w1);
    std::snprintf(line, sizeof line, "agent %zu  %6s %6s | %5s %5s %5s | %6s %6s\n", i + 1, fmt(pw1).c_str(),
                  fmt(1.0 - pw1).c_str(), fmt(a.utility()(0)).c_str(), fmt(a.utility()(1)).c_str(),
                  fmt(a.utility()(2)).c_str(), fmt(expected_utility(a, t.f)).c_str(),
                  fmt(expected_utility(a, t.g)).c_str());
    out << line;
  }
  out << "agent 3 is completely indifferent; outcome d has utility 0 for both\n";
  for (std::size_t i = 0; i < 2; ++i)
    out << "pushforward of f under agent " << i + 1 << ": " << join(pushforward(t.f, p.agent(i).belief(), o.size()))
        << "\n";

  const auto sp = detect_spurious_unanimity(p, t.f, t.g);
  out << "unanimity for f over g: " << (sp.unanimous_weak ? "weak" : "none") << " (";
  for (std::size_t i = 0; i < 2; ++i) {
    const auto c = compare(p.agent(i), t.f, t.g).order;
    out << (i ? ", " : "") << "agent " << i + 1 << " "
        << (c == Order::kIndifferent ? "indifferent" : c == Order::kFirst ? "strict for f" : "strict for g");
  }
  out << ")\n";
  out << "common belief under which both weakly prefer f: "
      << (sp.common_belief_exists ? "exists" : "none (best margin " + fmt(sp.best_margin) + ")") << "\n";
  out << "spurious unanimity: " << (sp.spurious ? "yes" : "no") << "\n";
  if (const auto r = scenarios::strict_common_belief_range(p, t.g, t.f, w1)) {
    out << "common beliefs under which both strictly prefer g: P(w1) in (" << fmt(r->first) << ", "
        << fmt(r->second) << ")\n";
  }
  for (double probe : {0.2 - 1e-6, 0.2 + 1e-6, 0.9 - 1e-6, 0.9 + 1e-6}) {
    const auto m = common_belief_margin(p, t.g, t.f, std::pair{w1, probe});
    out << "  probe P(w1) = " << fmt(probe) << ": margin " << fmt(m.value_or(-1.0)) << " -> "
        << (m && *m > kExactTol ? "both prefer g" : "not unanimous for g") << "\n";
  }

  const auto res = baru(p);
  const auto& soc = res.preference;
  double ev[2] = {};
  const Act* acts[] = {&t.f, &t.g};
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i : res.concerned) ev[k] += expected_utility(Preference(soc.belief(), p.agent(i).utility()), *acts[k]);
  out << "baru: belief " << join(segment_masses(soc.belief(), std::vector<double>{0.0, 0.5, 1.0})) << "; summed utility a=" << fmt(1.0) << " b=" << fmt(1.0)
      << " c=" << fmt(0.9 + 0.8) << "\n";
  out << "baru: EV(f) = " << fmt(ev[0]) << ", EV(g) = " << fmt(ev[1]) << " -> "
      << (ev[1] > ev[0] + kExactTol ? "g ≻ f" : "not g ≻ f") << " against unanimous weak preference for f\n";
  return 0;
}

inline int scenario_horses(std::ostream& out) {
  const auto r = scenarios::complementary_ignorance_demo();
  out << "horse race: horse k wins on [(k-1)/3, k/3); bet 1 pays $1 if horse 1 or 2 wins, bet 2 if horse 3 wins\n";
  out << "agent 1 posterior (0, 1/2, 1/2), agent 2 posterior (1/2, 0, 1/2)\n";
  for (std::size_t i = 0; i < 2; ++i)
    out << "agent " << i + 1 << ": EV(bet 1) = " << fmt(r.agent_ev[i][0]) << ", EV(bet 2) = " << fmt(r.agent_ev[i][1])
        << "\n";
  out << "bets induce the same lottery under both beliefs: " << (r.bets_restricted ? "yes" : "no") << "\n";
  out << "baru: EV(bet 1) = " << fmt(r.baru_ev[0]) << ", EV(bet 2) = " << fmt(r.baru_ev[1]) << " -> "
      << (r.baru_order == Order::kIndifferent ? "indifferent" : "strict") << "\n";
  out << "geometric pool: P(horse 3) = " << fmt(r.pooled_horse3) << "\n";
  out << "geometric pool: EV(bet 1) = " << fmt(r.geometric_ev[0]) << ", EV(bet 2) = " << fmt(r.geometric_ev[1])
      << " -> " << (r.geometric_order == Order::kSecond ? "bet 2 ≻ bet 1" : "no strict preference for bet 2") << "\n";
  return 0;
}

inline std::vector<svg::Marker> outcome_markers(const Profile& p) {
  std::vector<svg::Marker> out;
  const auto idx = p.concerned();
  for (std::size_t x = 0; x < p.outcomes().size(); ++x) {
    Vec v;
    for (std::size_t i : idx) v.push_back(p.agent(i).utility()(x));
    out.push_back({v, p.outcomes().label(x)});
  }
  return out;
}

inline int scenario_fig1(const std::string& svg_path, const std::string& csv_path, std::ostream& out) {
  const auto f = scenarios::fig1();
  const auto before = image_polytope(f.p), after = image_polytope(f.p2);
  const ImageRestriction restrict_to{Coarsening::identity(), f.subset};
  const auto restricted = image_polytope(f.p, restrict_to);
  out << "image of all acts (common uniform belief): quadrangle with vertices\n" << svg::vertices_csv(before.vertices);
  const auto c1 = certify_coredundancy(f.p, Coarsening::identity(), f.subset);
  const auto c2 = certify_coredundancy(f.p2, Coarsening::identity(), f.subset);
  auto status = [](const std::variant<CoRedundancyCertificate, Refused>& c) {
    if (const auto* ok = std::get_if<CoRedundancyCertificate>(&c)) return "co-redundant (residual " + fmt(ok->residual) + ")";
    return "refused: " + std::get<Refused>(c).reason;
  };
  out << "acts with range {q1..q4}, first profile: " << status(c1) << "\n";
  out << "acts with range {q1..q4}, second profile: " << status(c2) << "\n";
  const auto v = check_independence_redundant_acts(baru, f.p, f.p2, Coarsening::identity(), f.subset);
  out << "baru society restricted to these acts is unchanged: " << verdict_name(v.verdict) << "\n";
  double diff = 0.0;
  for (std::size_t k = 0; k < before.support.size(); ++k)
    diff = std::max({diff, std::abs(before.support[k] - after.support[k]),
                     std::abs(before.support[k] - restricted.support[k])});
  out << "max support difference (first, second, restricted): " << fmt(diff) << "\n";
  auto markers = outcome_markers(f.p);
  markers.back().label = "r";
  auto moved = outcome_markers(f.p2).back();
  moved.label = "r'";
  markers.push_back(moved);
  write_file(svg_path, svg::render({{before.vertices, "image"}}, markers));
  out << "svg written to " << svg_path << "\n";
  if (!csv_path.empty()) {
    write_file(csv_path, svg::vertices_csv(before.vertices));
    out << "vertex csv written to " << csv_path << "\n";
  }
  return 0;
}

// ------------------------------------------------------------ image

inline int cmd_image(const std::string& profile_path, const std::string& restrict_spec, const std::string& svg_path,
                     const std::string& csv_path, std::ostream& out) {
  const auto pf = io::load_profile(profile_path);
  const auto& p = pf.profile;
  std::optional<ImageRestriction> r;
  if (!restrict_spec.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(restrict_spec);
    for (std::string tok; std::getline(ss, tok, ',');) parts.push_back(tok);
    ImageRestriction ir;
    if (parts[0] != "identity") ir.q = io::parse_coarsening(io::read_file(parts[0]), parts[0]);
    for (std::size_t k = 1; k < parts.size(); ++k) ir.outcomes.push_back(p.outcomes().index_of(parts[k]));
    if (ir.outcomes.empty())
      for (std::size_t x = 0; x < p.outcomes().size(); ++x) ir.outcomes.push_back(x);
    r = ir;
  }
  const auto full = image_polytope(p);
  std::string csv;
  out << "concerned agents: " << full.dimension << "\n";
  std::vector<svg::Layer> layers;
  if (full.dimension <= 2) {
    out << "vertices:\n" << svg::vertices_csv(full.vertices);
    csv = svg::vertices_csv(full.vertices);
    layers.push_back({full.vertices, "image"});
  } else {
    out << "support function over " << full.directions.size() << " directions (see --csv)\n";
    csv = svg::support_csv(full);
  }
  if (r) {
    const auto restricted = image_polytope(p, r);
    const auto cert = certify_coredundancy(p, r->q, r->outcomes);
    if (const auto* ok = std::get_if<CoRedundancyCertificate>(&cert)) {
      out << "restriction: co-redundant (residual " << fmt(ok->residual) << ")\n";
    } else {
      const auto& ref = std::get<Refused>(cert);
      out << "restriction: refused, condition (" << (ref.condition == 1 ? "i" : "ii") << "): " << ref.reason << "\n";
    }
    if (full.dimension <= 2) {
      out << "restricted vertices:\n" << svg::vertices_csv(restricted.vertices);
      layers.push_back({restricted.vertices, "restricted", "#c55a11", "#f4b183", 0.4});
    }
  }
  if (!csv_path.empty()) {
    write_file(csv_path, csv);
    out << "csv written to " << csv_path << "\n";
  }
  if (!svg_path.empty()) {
    if (full.dimension > 2) throw InvalidInput("svg output needs at most 2 concerned agents");
    write_file(svg_path, svg::render(layers, outcome_markers(p)));
    out << "svg written to " << svg_path << "\n";
  }
  return 0;
}

// ------------------------------------------------------------ distance

/// A preference file, or a profile file with "#k" selecting agent k (1-based).
inline std::pair<OutcomeSpace, Preference> load_preference(const std::string& spec) {
  if (const auto hash = spec.rfind('#'); hash != std::string::npos) {
    const std::string path = spec.substr(0, hash), idx = spec.substr(hash + 1);
    const auto pf = io::load_profile(path);
    std::size_t k = 0;
    try {
      k = std::stoul(idx);
    } catch (const std::exception&) {
      throw io::ParseError(spec + ": agent selector must be a number");
    }
    if (k < 1 || k > pf.profile.size()) throw io::ParseError(spec + ": no agent " + idx);
    return {pf.profile.outcomes(), pf.profile.agent(k - 1)};
  }
  return io::parse_preference(io::read_file(spec), spec);
}

inline int cmd_distance(const std::string& a, const std::string& b, std::ostream& out) {
  const auto [oa, pa] = load_preference(a);
  const auto [ob, pb] = load_preference(b);
  if (!(oa == ob)) throw InvalidInput("preferences are over different outcome spaces");
  out << fmt(preference_distance(pa, pb));
  if (outside_metric(pa, pb)) out << " (outside the metric: one side is complete indifference)";
  out << "\n";
  return 0;
}

// ------------------------------------------------------------ entry

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aggregate subjective expected utility preferences and check social welfare axioms", "baru"};
  app.set_version_flag("--version", io::kToolVersion);
  app.require_subcommand(1);

  std::string profile, swf = "baru", params, acts, restrict_spec, svg_path, csv_path, report = "axiom_report.json";
  std::size_t trials = 10000;
  std::uint64_t seed = 42;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string scenario, pref_a, pref_b;

  auto* agg = app.add_subcommand("aggregate", "society preference and ranking of acts");
  agg->add_option("profile", profile, "profile file")->required();
  agg->add_option("--swf", swf, "rule: baru, swf1..swf6, weighted");
  agg->add_option("--params", params, "params file (overrides the profile's params)");
  agg->add_option("--acts", acts, "act file; default is one constant act per outcome");

  auto* rep = app.add_subcommand("axiom-report", "randomized axiom checks");
  rep->add_option("profile", profile, "profile file for params and fixed-profile checks");
  rep->add_option("--swf", swf, "rule");
  rep->add_option("--params", params, "params file");
  rep->add_option("--trials", trials, "trials per axiom")->check(CLI::PositiveNumber);
  rep->add_option("--seed", seed, "seed");
  rep->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  rep->add_option("--out", report, "report file");

  auto* sc = app.add_subcommand("scenario", "worked examples");
  sc->add_option("name", scenario, "table1, horses or fig1")->required()->check(CLI::IsMember({"table1", "horses", "fig1"}));
  sc->add_option("--svg", svg_path, "svg output for fig1");
  sc->add_option("--csv", csv_path, "vertex csv output for fig1");

  auto* img = app.add_subcommand("image", "utility image of a profile");
  img->add_option("profile", profile, "profile file")->required();
  img->add_option("--restrict", restrict_spec, "coarsening file (or identity) followed by outcome labels, comma separated");
  img->add_option("--svg", svg_path, "svg output (at most 2 concerned agents)");
  img->add_option("--csv", csv_path, "vertex or support csv output");

  auto* dist = app.add_subcommand("distance", "uniform distance between two preferences");
  dist->add_option("first", pref_a, "preference file, or profile.json#k")->required();
  dist->add_option("second", pref_b, "preference file, or profile.json#k")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*agg) return cmd_aggregate(profile, swf, params, acts, out);
    if (*rep) return cmd_axiom_report(profile, swf, params, trials, seed, threads, report, out);
    if (*sc) {
      if (scenario == "table1") return scenario_table1(out);
      if (scenario == "horses") return scenario_horses(out);
      return scenario_fig1(svg_path.empty() ? "fig1.svg" : svg_path, csv_path, out);
    }
    if (*img) return cmd_image(profile, restrict_spec, svg_path, csv_path, out);
    if (*dist) return cmd_distance(pref_a, pref_b, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace savage::cli
