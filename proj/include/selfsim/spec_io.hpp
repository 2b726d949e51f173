#ifndef SELFSIM_SPEC_IO_HPP
#define SELFSIM_SPEC_IO_HPP

#include <array>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "selfsim/action.hpp"
#include "selfsim/bs.hpp"

namespace selfsim {

/// Parse failure with the line and field that caused it.
struct ParseError : std::runtime_error {
  int line;
  std::string field;
  ParseError(int line_, std::string field_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + " (" + field_ + "): " + what),
        line(line_),
        field(std::move(field_)) {}
};

/// The action-spec file: a sectioned key/value text document.
///
///   name = odometer-r2
///   expect pseudo_free = no-violation     (optional, echoed in reports)
///
///   [graph]
///   vertex v
///   edge 0 v v                            (edge <name> <r> <d>)
///
///   [group]
///   backend = Z | finite | trivial | free | bs
///   elements = e g                        (finite)
///   row e = e g                           (finite: products against the element list)
///   generators = g                        (finite, free)
///   n = 2                                 (bs)
///
///   [table]
///   vact g u = w                          (generator, vertex, image)
///   eact z 0 = 1 ; -                      (generator, edge, image ; cocycle word)
///
/// Group words are whitespace-separated generator names with a ^-1 suffix
/// for inverses; "-" is the empty word.
struct ActionSpecData {
  std::string name;
  std::vector<std::pair<std::string, std::string>> expects;
  std::vector<std::string> vertices;
  std::vector<std::array<std::string, 3>> edges;  // name, r, d
  std::string backend;
  std::vector<std::string> elements;                     // finite
  std::vector<std::pair<std::string, std::string>> rows; // finite: row <elem> = <products>
  std::string group_generators;                          // finite, free
  int bs_n = 2;
  struct TableRow {
    bool vertex_row = false;
    std::string gen, arg, image, cocycle;
  };
  std::vector<TableRow> table;
};

namespace detail_io {
inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}
inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace detail_io

inline ActionSpecData parse_action_spec(const std::string& text) {
  using detail_io::split_ws;
  using detail_io::trim;
  ActionSpecData d;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(lineno, "section", "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "graph" && section != "group" && section != "table")
        throw ParseError(lineno, "section", "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    const std::string lhs = trim(eq == std::string::npos ? line : line.substr(0, eq));
    const std::string rhs = trim(eq == std::string::npos ? "" : line.substr(eq + 1));
    const auto key = split_ws(lhs);
    if (key.empty()) throw ParseError(lineno, "key", "empty statement");

    if (section.empty()) {
      if (key[0] == "name" && eq != std::string::npos) {
        d.name = rhs;
      } else if (key[0] == "expect" && key.size() == 2 && eq != std::string::npos) {
        d.expects.push_back({key[1], rhs});
      } else {
        throw ParseError(lineno, key[0], "expected 'name = ...' or 'expect <check> = ...'");
      }
    } else if (section == "graph") {
      if (key[0] == "vertex" && key.size() == 2) {
        d.vertices.push_back(key[1]);
      } else if (key[0] == "edge" && key.size() == 4) {
        d.edges.push_back({key[1], key[2], key[3]});
      } else {
        throw ParseError(lineno, key[0], "expected 'vertex <name>' or 'edge <name> <r> <d>'");
      }
    } else if (section == "group") {
      if (eq == std::string::npos) throw ParseError(lineno, key[0], "expected '<key> = <value>'");
      if (key[0] == "backend" && key.size() == 1) {
        d.backend = rhs;
      } else if (key[0] == "elements") {
        for (const auto& e : split_ws(rhs)) d.elements.push_back(e);
      } else if (key[0] == "row" && key.size() == 2) {
        d.rows.push_back({key[1], rhs});
      } else if (key[0] == "generators") {
        d.group_generators = rhs;
      } else if (key[0] == "n") {
        d.bs_n = std::stoi(rhs);
      } else {
        throw ParseError(lineno, key[0], "unknown group key");
      }
    } else {  // table
      if (eq == std::string::npos || key.size() != 3)
        throw ParseError(lineno, key.empty() ? "table" : key[0],
                         "expected 'vact <gen> <vertex> = <vertex>' or 'eact <gen> <edge> = <edge> ; <word>'");
      ActionSpecData::TableRow row;
      row.gen = key[1];
      row.arg = key[2];
      if (key[0] == "vact") {
        row.vertex_row = true;
        row.image = rhs;
      } else if (key[0] == "eact") {
        const auto semi = rhs.find(';');
        if (semi == std::string::npos)
          throw ParseError(lineno, "eact", "missing '; <cocycle word>' part");
        row.image = trim(rhs.substr(0, semi));
        row.cocycle = trim(rhs.substr(semi + 1));
        if (row.cocycle.empty()) throw ParseError(lineno, "eact", "empty cocycle word; use -");
      } else {
        throw ParseError(lineno, key[0], "unknown table row kind");
      }
      d.table.push_back(row);
    }
  }
  if (d.vertices.empty()) throw ParseError(lineno, "graph", "no vertices declared");
  if (d.backend.empty()) throw ParseError(lineno, "backend", "no group backend declared");
  return d;
}

inline std::string render_action_spec(const ActionSpecData& d) {
  std::ostringstream out;
  out << "name = " << d.name << "\n";
  for (const auto& [k, v] : d.expects) out << "expect " << k << " = " << v << "\n";
  out << "\n[graph]\n";
  for (const auto& v : d.vertices) out << "vertex " << v << "\n";
  for (const auto& e : d.edges) out << "edge " << e[0] << " " << e[1] << " " << e[2] << "\n";
  out << "\n[group]\n";
  out << "backend = " << d.backend << "\n";
  if (!d.elements.empty()) {
    out << "elements =";
    for (const auto& e : d.elements) out << " " << e;
    out << "\n";
    for (const auto& [a, products] : d.rows) out << "row " << a << " = " << products << "\n";
  }
  if (!d.group_generators.empty()) out << "generators = " << d.group_generators << "\n";
  if (d.backend == "bs") out << "n = " << d.bs_n << "\n";
  if (!d.table.empty()) {
    out << "\n[table]\n";
    for (const auto& r : d.table) {
      if (r.vertex_row)
        out << "vact " << r.gen << " " << r.arg << " = " << r.image << "\n";
      else
        out << "eact " << r.gen << " " << r.arg << " = " << r.image << " ; " << r.cocycle << "\n";
    }
  }
  return out.str();
}

/// "z z^-1 g" → signed letters over the backend's generator names; "-" is
/// the empty word.
template <GroupBackend G>
Word parse_group_word(const G& group, const std::string& text, int lineno = 0) {
  Word w;
  if (detail_io::trim(text) == "-") return w;
  for (const auto& tok : detail_io::split_ws(text)) {
    std::string name = tok;
    bool inv = false;
    if (name.size() > 3 && name.substr(name.size() - 3) == "^-1") {
      inv = true;
      name = name.substr(0, name.size() - 3);
    }
    int idx = -1;
    for (int j = 0; j < group.generator_count(); ++j)
      if (group.generator_name(j) == name) idx = j;
    if (idx < 0) throw ParseError(lineno, "word", "unknown generator '" + name + "'");
    w.push_back(inv ? -(idx + 1) : idx + 1);
  }
  return w;
}

using FixtureVariant =
    std::variant<SelfSimilarAction<ZGroup>, SelfSimilarAction<FiniteGroup>,
                 SelfSimilarAction<FreeGroup>, SelfSimilarAction<BSGroup>>;

namespace detail_io {

template <GroupBackend G>
SelfSimilarAction<G> build_action(const ActionSpecData& d, Graph graph, G group) {
  const int gens = group.generator_count();
  std::vector<std::vector<int>> vtab(gens), etab(gens);
  std::vector<std::vector<Word>> ctab(gens);
  std::vector<std::vector<bool>> vset(gens), eset(gens);
  for (int j = 0; j < gens; ++j) {
    vtab[j].assign(graph.vertex_count(), -1);
    etab[j].assign(graph.edge_count(), -1);
    ctab[j].assign(graph.edge_count(), Word{});
    vset[j].assign(graph.vertex_count(), false);
    eset[j].assign(graph.edge_count(), false);
  }
  auto gen_index = [&](const std::string& name) {
    for (int j = 0; j < gens; ++j)
      if (group.generator_name(j) == name) return j;
    throw ParseError(0, "table", "unknown generator '" + name + "'");
  };
  bool any_vact = false;
  for (const auto& row : d.table) {
    const int j = gen_index(row.gen);
    if (row.vertex_row) {
      any_vact = true;
      const int v = graph.vertex_id(row.arg);
      vtab[j][v] = graph.vertex_id(row.image);
      vset[j][v] = true;
    } else {
      int e;
      try {
        e = graph.edge_id(row.arg);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(0, "eact", ex.what());
      }
      try {
        etab[j][e] = graph.edge_id(row.image);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(0, "eact", ex.what());
      }
      ctab[j][e] = parse_group_word(group, row.cocycle);
      eset[j][e] = true;
    }
  }
  for (int j = 0; j < gens; ++j) {
    for (int e = 0; e < graph.edge_count(); ++e)
      if (!eset[j][e])
        throw ParseError(0, "table", "missing eact row for generator " + group.generator_name(j) +
                                         ", edge " + graph.edge_names[e]);
    for (int v = 0; v < graph.vertex_count(); ++v) {
      if (!vset[j][v]) {
        if (any_vact)
          throw ParseError(0, "table", "missing vact row for generator " + group.generator_name(j) +
                                           ", vertex " + graph.vertex_names[v]);
        vtab[j][v] = v;  // no vact rows at all: identity on vertices
      }
    }
  }
  return SelfSimilarAction<G>::make(std::move(graph), std::move(group), std::move(vtab),
                                    std::move(etab), std::move(ctab));
}

}  // namespace detail_io

inline FixtureVariant to_action(const ActionSpecData& d) {
  std::vector<std::tuple<std::string, std::string, std::string>> edges;
  for (const auto& e : d.edges) edges.push_back({e[0], e[1], e[2]});
  Graph graph;
  try {
    graph = Graph::make(d.vertices, edges);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(0, "edge", ex.what());
  }
  const auto gen_names = detail_io::split_ws(d.group_generators);
  if (d.backend == "Z") {
    return detail_io::build_action(d, std::move(graph), ZGroup{});
  } else if (d.backend == "trivial") {
    return detail_io::build_action(d, std::move(graph), FiniteGroup::trivial());
  } else if (d.backend == "finite") {
    const int n = static_cast<int>(d.elements.size());
    if (n == 0) throw ParseError(0, "elements", "finite backend needs an element list");
    std::vector<std::vector<int>> mul(n, std::vector<int>(n, -1));
    auto elem_id = [&](const std::string& name) {
      for (int i = 0; i < n; ++i)
        if (d.elements[i] == name) return i;
      throw ParseError(0, "row", "unknown element '" + name + "'");
    };
    for (const auto& [a, products] : d.rows) {
      const auto prods = detail_io::split_ws(products);
      if (static_cast<int>(prods.size()) != n)
        throw ParseError(0, "row", "row " + a + " must list " + std::to_string(n) + " products");
      for (int b = 0; b < n; ++b) mul[elem_id(a)][b] = elem_id(prods[b]);
    }
    for (const auto& r : mul)
      for (int x : r)
        if (x < 0) throw ParseError(0, "row", "multiplication table is incomplete");
    FiniteGroup grp;
    try {
      grp = FiniteGroup::make(d.elements, mul, gen_names);
    } catch (const std::invalid_argument& ex) {
      throw ParseError(0, "group", ex.what());
    }
    return detail_io::build_action(d, std::move(graph), std::move(grp));
  } else if (d.backend == "free") {
    if (gen_names.empty()) throw ParseError(0, "generators", "free backend needs generator names");
    return detail_io::build_action(d, std::move(graph), FreeGroup::on(gen_names));
  } else if (d.backend == "bs") {
    return detail_io::build_action(d, std::move(graph), BSGroup(d.bs_n));
  }
  throw ParseError(0, "backend", "unknown backend '" + d.backend + "'");
}

}  // namespace selfsim

#endif
