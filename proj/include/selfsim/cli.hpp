#ifndef SELFSIM_CLI_HPP
#define SELFSIM_CLI_HPP

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "selfsim/germs.hpp"
#include "selfsim/spec_io.hpp"

namespace selfsim {
namespace cli {

using json = nlohmann::ordered_json;

struct Flags {
  int radius = 4;
  int pathlen = 4;
  int depth = 8;
  int exponent = 16;
  unsigned long long seed = 0;
  bool as_json = false;
  std::string sigma = "auto";  // auto | bs | free | length | trivial | none
};

// ---------------------------------------------------------------------------
// sigma dispatch: run f with the fixture's natural sigma backend, or report
// that none is available

template <GroupBackend G, typename Fn>
bool with_sigma(const SelfSimilarAction<G>& a, const std::string& choice, Fn&& f) {
  if (choice == "length") {
    f(SigmaLength<G>{});
    return true;
  }
  if (choice == "trivial") {
    f(SigmaTrivial<G>{});
    return true;
  }
  if (choice == "none") return false;
  if constexpr (std::is_same_v<G, ZGroup>) {
    if ((choice == "auto" || choice == "bs") && detect_odometer(a)) {
      f(SigmaBS::make(a));
      return true;
    }
  }
  if constexpr (std::is_same_v<G, FiniteGroup>) {
    if ((choice == "auto" || choice == "free") && a.group.size() == 1) {
      f(SigmaFree<G>::make(a));
      return true;
    }
  }
  if (choice != "auto")
    throw std::invalid_argument("sigma backend '" + choice + "' does not fit this fixture");
  return false;
}

// ---------------------------------------------------------------------------
// check

template <GroupBackend G>
json run_check(const SelfSimilarAction<G>& a, const ActionSpecData& spec, const Flags& fl,
               int& exit_code) {
  json rep;
  rep["schema"] = "v1";
  rep["name"] = spec.name;
  rep["bounds"] = {{"radius", fl.radius},
                   {"pathlen", fl.pathlen},
                   {"depth", fl.depth},
                   {"exponent", fl.exponent},
                   {"seed", fl.seed}};
  std::vector<std::string> warnings;
  bool violation = false;

  const auto ax = axioms_report(a, std::min(fl.radius, 3), std::min(fl.pathlen, 4));
  rep["axioms"] = json{{"ok", ax.ok}};
  if (!ax.ok) {
    rep["axioms"]["axiom"] = ax.axiom;
    rep["axioms"]["counterexample"] = ax.counterexample;
    violation = true;
  }

  const auto pf = is_pseudo_free(a, fl.radius, fl.pathlen);
  rep["checks"]["pseudo_free"] = json{{"verdict", pf.violated ? "violated" : "no-violation-up-to"},
                                      {"radius", pf.radius},
                                      {"path_radius", pf.path_radius}};
  if (pf.violated) {
    rep["checks"]["pseudo_free"]["witness"] =
        json{{"g", a.group.render(pf.witness_g)},
             {"edge", pf.witness_edge >= 0 ? a.graph.edge_names[pf.witness_edge] : ""}};
    violation = true;
  }

  {
    const bool collapsed = a.graph.vertex_count() > 1;
    const auto& zs_action_src = a;
    auto ca = collapsed ? collapse_action(zs_action_src) : zs_action_src;
    const auto cz = is_cancellative(ca, fl.radius, fl.pathlen);
    rep["checks"]["cancellative"] = json{{"verdict", cz.violated ? "violated" : "ok-up-to-bounds"},
                                         {"radius", cz.radius},
                                         {"pathlen", cz.path_length},
                                         {"on_collapse", collapsed}};
    if (cz.violated) {
      rep["checks"]["cancellative"]["witness"] = cz.witness;
      violation = true;
    }
    if (cz.violated != pf.violated)
      warnings.push_back("cancellativity and pseudo-freeness verdicts disagree");
  }

  const auto eu = is_estar_unitary(a, fl.radius, fl.pathlen);
  rep["checks"]["estar_unitary"] = json{{"verdict", eu.violated ? "violated" : "ok-up-to-bounds"},
                                        {"radius", eu.radius},
                                        {"pathlen", eu.path_length}};
  if (eu.violated) {
    rep["checks"]["estar_unitary"]["witness"] = eu.witness;
    violation = true;
  }
  if (eu.violated != pf.violated)
    warnings.push_back("E*-unitarity and pseudo-freeness verdicts disagree");

  const auto ex = is_exhausting(a, fl.radius, fl.pathlen);
  {
    json j{{"verdict", ex.ok ? "ok" : "unresolved"}, {"radius", ex.radius}, {"pathlen", ex.path_length}};
    json wit = json::array();
    for (const auto& [g, alpha] : ex.witnesses)
      wit.push_back(json{{"g", a.group.render(g)}, {"alpha", render_path(a.graph, alpha)}});
    j["witnesses"] = wit;
    if (!ex.ok) {
      json un = json::array();
      for (const auto& g : ex.unresolved) un.push_back(a.group.render(g));
      j["unresolved"] = un;
      warnings.push_back("exhausting check unresolved for some elements (exit stays 0)");
    }
    rep["checks"]["exhausting"] = j;
  }

  bool have_sigma = false;
  try {
    have_sigma = with_sigma(a, fl.sigma, [&](const auto& sigma) {
      const int radius = std::is_same_v<G, ZGroup> ? fl.exponent : fl.radius;
      const auto purity = check_idempotent_pure(a, sigma, fl.pathlen, radius);
      json j{{"verdict", purity.pure ? "pure" : "impure"},
             {"sigma", sigma.name()},
             {"pathlen", purity.path_length},
             {"radius", purity.radius},
             {"checked", purity.checked}};
      if (!purity.pure) {
        j["witness"] = purity.witness;
        violation = true;
      }
      rep["checks"]["idempotent_pure"] = j;
    });
  } catch (const std::invalid_argument& e) {
    rep["checks"]["idempotent_pure"] = json{{"verdict", "error"}, {"error", e.what()}};
    exit_code = 2;
  }
  if (!have_sigma && !rep["checks"].contains("idempotent_pure")) {
    rep["checks"]["idempotent_pure"] = json{{"verdict", "unavailable"}};
    warnings.push_back("no sigma backend fits this fixture; purity not checked");
  }

  rep["agreement"] = json{
      {"pseudo_free_cancellative_estar_agree",
       rep["checks"]["cancellative"]["verdict"] == (pf.violated ? "violated" : "ok-up-to-bounds") &&
           eu.violated == pf.violated}};

  json mismatches = json::array();
  for (const auto& [key, expected] : spec.expects) {
    if (rep["checks"].contains(key)) {
      const std::string got = rep["checks"][key]["verdict"].template get<std::string>();
      if (got != expected)
        mismatches.push_back(json{{"check", key}, {"expected", expected}, {"got", got}});
    }
  }
  rep["expect_mismatches"] = mismatches;
  rep["warnings"] = warnings;
  if (violation && exit_code == 0) exit_code = 1;
  return rep;
}

inline void print_check_text(const json& rep, std::ostream& out) {
  out << "fixture: " << rep["name"].get<std::string>() << "\n";
  if (!rep["axioms"]["ok"].get<bool>())
    out << "axioms: VIOLATED [" << rep["axioms"]["axiom"].get<std::string>() << "] "
        << rep["axioms"]["counterexample"].get<std::string>() << "\n";
  else
    out << "axioms: ok\n";
  for (const auto& [name, body] : rep["checks"].items()) {
    out << name << ": " << body["verdict"].get<std::string>();
    if (body.contains("witness")) out << "  witness: " << body["witness"].dump();
    out << "\n";
  }
  for (const auto& w : rep["warnings"]) out << "warning: " << w.get<std::string>() << "\n";
  for (const auto& m : rep["expect_mismatches"]) out << "expect mismatch: " << m.dump() << "\n";
}

// ---------------------------------------------------------------------------
// word, point, and triple parsing for act/orbit

inline BoundaryPoint parse_point(const Graph& g, const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos)
    throw std::invalid_argument("point must be '<head edges> / <cycle edges>'");
  auto names_to_edges = [&](const std::string& part) {
    std::vector<int> out;
    for (const auto& tok : detail_io::split_ws(part)) out.push_back(g.edge_id(tok));
    return out;
  };
  return make_point(g, names_to_edges(text.substr(0, slash)), names_to_edges(text.substr(slash + 1)));
}

template <GroupBackend G>
Path parse_path(const SelfSimilarAction<G>& a, const std::string& text) {
  const auto t = detail_io::trim(text);
  if (t == "-") {
    if (a.graph.vertex_count() != 1)
      throw std::invalid_argument("'-' path needs a one-vertex graph; use @<vertex>");
    return Path::at_vertex(0);
  }
  if (!t.empty() && t[0] == '@') return Path::at_vertex(a.graph.vertex_id(t.substr(1)));
  std::vector<int> edges;
  for (const auto& tok : detail_io::split_ws(t)) edges.push_back(a.graph.edge_id(tok));
  return path_from_edges(a.graph, edges);
}

/// Universal-group words: for odometer fixtures, words over a0..a_{n-1}, Z
/// (aliases a, b when n = 2) evaluated in BS(1,n); the partial map comes
/// from the closed-form action.
inline std::optional<PartialMap<ZGroup>> universal_map_z(const SelfSimilarAction<ZGroup>& a,
                                                         const std::string& word_text) {
  auto shape = detect_odometer(a);
  if (!shape) return std::nullopt;
  BSGroup bs(shape->n);
  auto elem = bs.identity();
  for (const auto& tok : detail_io::split_ws(word_text)) {
    std::string name = tok;
    bool inv = false;
    if (name.size() > 3 && name.substr(name.size() - 3) == "^-1") {
      inv = true;
      name = name.substr(0, name.size() - 3);
    }
    BSGroup::Element g;
    if (name == "Z")
      g = bs.z();
    else if (shape->n == 2 && name == "a")
      g = bs.a(0);
    else if (shape->n == 2 && name == "b")
      g = bs.a(1);
    else if (name.size() > 1 && name[0] == 'a')
      g = bs.a(std::stoi(name.substr(1)));
    else
      throw std::invalid_argument("unknown universal generator '" + name + "'");
    elem = bs.multiply(elem, inv ? bs.invert(g) : g);
  }
  auto res = odometer_action(a, elem);
  return res.map;
}

template <GroupBackend G>
std::optional<PartialMap<G>> universal_map(const SelfSimilarAction<G>& a, const std::string& word_text) {
  if constexpr (std::is_same_v<G, ZGroup>) {
    return universal_map_z(a, word_text);
  } else if constexpr (std::is_same_v<G, FiniteGroup>) {
    if (a.group.size() == 1 && a.graph.vertex_count() == 1) {
      FreeGroup f = FreeGroup::on(a.graph.edge_names);
      return quigg_raeburn(a, f.evaluate(parse_group_word(f, word_text)));
    }
  }
  (void)word_text;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// export: the action automaton (states = restrictions, edges e / ge)

template <GroupBackend G>
std::string export_dot(const SelfSimilarAction<G>& a) {
  std::map<std::string, typename G::Element> states;
  std::queue<typename G::Element> todo;
  for (int j = 0; j < a.group.generator_count(); ++j) {
    const auto g = a.group.generator(j);
    if (states.insert({a.group.key(g), g}).second) todo.push(g);
  }
  std::vector<std::string> lines;
  while (!todo.empty()) {
    const auto g = todo.front();
    todo.pop();
    for (int e = 0; e < a.graph.edge_count(); ++e) {
      const auto pe = path_from_edges(a.graph, {e});
      const auto image = act(a, g, pe);
      const auto rest = restrict_cocycle(a, g, pe);
      lines.push_back("  \"" + a.group.render(g) + "\" -> \"" + a.group.render(rest) + "\" [label=\"" +
                      a.graph.edge_names[e] + "/" + a.graph.edge_names[image.edges[0]] + "\"];");
      if (states.insert({a.group.key(rest), rest}).second) todo.push(rest);
    }
  }
  std::string out = "digraph action {\n  rankdir=LR;\n";
  for (const auto& [key, g] : states) out += "  \"" + a.group.render(g) + "\" [shape=circle];\n";
  for (const auto& l : lines) out += l + "\n";
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// the driver

struct Args {
  std::string command;
  std::string spec_path;
  Flags flags;
  std::string g_word, u_word, triple_text, point_text;
  int steps = 6;
};

inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

namespace detail_cli {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <GroupBackend G>
int run_on_action(const Args& args, const ActionSpecData& spec, const SelfSimilarAction<G>& a,
                  std::ostream& out, std::ostream& err) {
  const Flags& fl = args.flags;
  int exit_code = 0;
  if (args.command == "check") {
    json rep = run_check(a, spec, fl, exit_code);
    if (fl.as_json)
      out << rep.dump(2) << "\n";
    else
      print_check_text(rep, out);
    return exit_code;
  }
  if (args.command == "present") {
    Presentation p;
    try {
      p = emit_presentation(a);
    } catch (const std::exception& e) {
      err << "presentation unavailable: " << e.what() << "\n";
      return 2;
    }
    if (fl.as_json) {
      json j;
      j["generators"] = p.generators;
      json rels = json::array();
      for (const auto& [l, r] : p.relations)
        rels.push_back(json{{"lhs", p.render_word(l)}, {"rhs", p.render_word(r)}});
      j["relations"] = rels;
      out << j.dump(2) << "\n";
    } else {
      out << p.render_text();
    }
    return 0;
  }
  if (args.command == "act") {
    const auto x = parse_point(a.graph, args.point_text);
    std::optional<std::vector<int>> prefix;
    if (!args.g_word.empty()) {
      const auto g = a.group.evaluate(parse_group_word(a.group, args.g_word));
      prefix = act_prefix(a, g, x, fl.depth);
    } else if (!args.u_word.empty()) {
      const auto m = universal_map(a, args.u_word);
      if (!m) {
        err << "no universal-group backend fits this fixture\n";
        return 2;
      }
      prefix = apply_map_prefix(a, *m, x, fl.depth);
      if (!prefix) {
        out << "point outside the domain\n";
        return 0;
      }
    } else if (!args.triple_text.empty()) {
      std::vector<std::string> parts;
      std::stringstream ss(args.triple_text);
      std::string item;
      while (std::getline(ss, item, ';')) parts.push_back(item);
      if (parts.size() != 3) {
        err << "triple must be '<alpha> ; <group word> ; <beta>'\n";
        return 2;
      }
      const auto alpha = parse_path(a, parts[0]);
      const auto g = a.group.evaluate(parse_group_word(a.group, parts[1]));
      const auto beta = parse_path(a, parts[2]);
      const auto s = make_triple(a, alpha, g, beta);
      prefix = apply_map_prefix(a, triple_map(a, s), x, fl.depth);
      if (!prefix) {
        out << "point outside the domain\n";
        return 0;
      }
    } else {
      err << "act needs --g, --u, or --triple\n";
      return 2;
    }
    for (size_t i = 0; i < prefix->size(); ++i)
      out << (i ? " " : "") << a.graph.edge_names[(*prefix)[i]];
    out << "\n";
    return 0;
  }
  if (args.command == "orbit") {
    const auto x0 = parse_point(a.graph, args.point_text);
    auto key_of = [&](const BoundaryPoint& x) {
      std::string k;
      for (int e : x.head) k += std::to_string(e) + ",";
      k += "|";
      for (int e : x.cycle) k += std::to_string(e) + ",";
      return k;
    };
    std::map<std::string, std::string> seen{{key_of(x0), ""}};
    std::queue<std::pair<BoundaryPoint, std::string>> bfs;
    bfs.push({x0, ""});
    std::vector<std::pair<std::string, BoundaryPoint>> listing{{"", x0}};
    int steps = 0;
    while (!bfs.empty() && steps < args.steps) {
      ++steps;
      const auto level = bfs.size();
      for (size_t i = 0; i < level; ++i) {
        auto [x, how] = bfs.front();
        bfs.pop();
        for (int j = 0; j < a.group.generator_count(); ++j) {
          for (int sign : {1, -1}) {
            const auto g = sign > 0 ? a.group.generator(j) : a.group.invert(a.group.generator(j));
            const auto img = act_point(a, g, x);
            if (!img) continue;
            const std::string word =
                how.empty() ? a.group.generator_name(j) + (sign < 0 ? "^-1" : "")
                            : a.group.generator_name(j) + (sign < 0 ? "^-1" : "") + " " + how;
            if (seen.insert({key_of(*img), word}).second) {
              bfs.push({*img, word});
              listing.push_back({word, *img});
            }
          }
        }
      }
    }
    for (const auto& [word, x] : listing) {
      out << (word.empty() ? "(start)" : word) << ": ";
      const auto pref = x.prefix_letters(fl.depth);
      for (size_t i = 0; i < pref.size(); ++i) out << (i ? " " : "") << a.graph.edge_names[pref[i]];
      out << " ...\n";
    }
    return 0;
  }
  if (args.command == "export") {
    out << export_dot(a);
    return 0;
  }
  err << "unknown command '" << args.command << "'\n";
  return 2;
}

}  // namespace detail_cli

inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Args args;
  CLI::App app{"finite machinery of self-similar graph actions"};
  app.require_subcommand(1);
  std::vector<CLI::App*> cmds;
  for (const char* name : {"check", "present", "act", "orbit", "export"}) {
    auto* cmd = app.add_subcommand(name);
    cmd->add_option("spec", args.spec_path, "action-spec file")->required();
    cmd->add_option("--radius", args.flags.radius, "group ball radius");
    cmd->add_option("--pathlen", args.flags.pathlen, "path length bound");
    cmd->add_option("--depth", args.flags.depth, "pointwise comparison depth");
    cmd->add_option("--exponent", args.flags.exponent, "Z-exponent bound for purity");
    cmd->add_option("--seed", args.flags.seed, "sampling seed");
    cmd->add_flag("--json", args.flags.as_json, "emit the JSON report");
    cmd->add_option("--sigma", args.flags.sigma, "auto|bs|free|length|trivial|none");
    cmds.push_back(cmd);
  }
  cmds[0]->description("run the decision procedures and report verdicts");
  cmds[1]->description("emit the universal-group presentation");
  cmds[2]->description("apply a group element, universal word, or triple to a point");
  cmds[3]->description("list the orbit of a point under the generators");
  cmds[4]->description("export the action automaton as DOT");
  cmds[2]->add_option("--g", args.g_word, "group word in the backend generators");
  cmds[2]->add_option("--u", args.u_word, "word in the universal group generators");
  cmds[2]->add_option("--triple", args.triple_text, "'alpha ; g ; beta'");
  cmds[2]->add_option("--point", args.point_text, "'head edges / cycle edges'")->required();
  cmds[3]->add_option("--point", args.point_text, "'head edges / cycle edges'")->required();
  cmds[3]->add_option("--steps", args.steps, "BFS depth in generator applications");

  // CLI11's vector overload wants the arguments reversed
  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  args.command = app.get_subcommands().front()->get_name();
  try {
    const auto text = detail_cli::read_file(args.spec_path);
    const auto spec = parse_action_spec(text);
    const auto fixture = to_action(spec);
    return std::visit(
        [&](const auto& a) { return detail_cli::run_on_action(args, spec, a, out, err); }, fixture);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cli
}  // namespace selfsim

#endif
