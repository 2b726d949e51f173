#ifndef SELFSIM_ACTION_HPP
#define SELFSIM_ACTION_HPP

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "selfsim/graph.hpp"
#include "selfsim/group.hpp"

namespace selfsim {

/// A self-similar graph action (G, E, φ).  The input data is the action of
/// each *generator* on vertices and edges together with the cocycle word
/// φ(g, e); everything else (inverse generators, arbitrary group elements,
/// arbitrary paths, boundary prefixes) is derived from the extension laws
///   g(eρ) = (ge)(φ(g,e)ρ)   and   φ(g, eρ) = φ(φ(g,e), ρ).
template <GroupBackend G>
struct SelfSimilarAction {
  Graph graph;
  G group;
  std::vector<std::vector<int>> vertex_table;    // [gen][vertex] -> vertex
  std::vector<std::vector<int>> edge_table;      // [gen][edge]   -> edge
  std::vector<std::vector<Word>> cocycle_table;  // [gen][edge]   -> word for φ(g,e)

  // derived: inverse generators act by the inverse permutation with
  // φ(g^-1, e) = φ(g, g^-1 e)^-1, the only choice compatible with (E2)
  std::vector<std::vector<int>> vertex_table_inv;
  std::vector<std::vector<int>> edge_table_inv;
  std::vector<std::vector<Word>> cocycle_table_inv;
  bool invertible = true;  // generator tables are bijections

  static SelfSimilarAction make(Graph graph, G group, std::vector<std::vector<int>> vertex_table,
                                std::vector<std::vector<int>> edge_table,
                                std::vector<std::vector<Word>> cocycle_table) {
    SelfSimilarAction a;
    a.graph = std::move(graph);
    a.group = std::move(group);
    a.vertex_table = std::move(vertex_table);
    a.edge_table = std::move(edge_table);
    a.cocycle_table = std::move(cocycle_table);
    const size_t gens = a.group.generator_count();
    if (a.vertex_table.size() != gens || a.edge_table.size() != gens || a.cocycle_table.size() != gens)
      throw std::invalid_argument("tables must have one row per generator");
    for (size_t j = 0; j < gens; ++j) {
      if (a.vertex_table[j].size() != static_cast<size_t>(a.graph.vertex_count()) ||
          a.edge_table[j].size() != static_cast<size_t>(a.graph.edge_count()) ||
          a.cocycle_table[j].size() != static_cast<size_t>(a.graph.edge_count()))
        throw std::invalid_argument("table row has wrong width");
      for (int v : a.vertex_table[j])
        if (v < 0 || v >= a.graph.vertex_count()) throw std::invalid_argument("vertex image out of range");
      for (int e : a.edge_table[j])
        if (e < 0 || e >= a.graph.edge_count()) throw std::invalid_argument("edge image out of range");
    }
    a.derive_inverse_tables();
    return a;
  }

  void derive_inverse_tables() {
    const int gens = group.generator_count();
    vertex_table_inv.assign(gens, std::vector<int>(graph.vertex_count(), -1));
    edge_table_inv.assign(gens, std::vector<int>(graph.edge_count(), -1));
    cocycle_table_inv.assign(gens, std::vector<Word>(graph.edge_count()));
    invertible = true;
    for (int j = 0; j < gens; ++j) {
      for (int v = 0; v < graph.vertex_count(); ++v) {
        int& slot = vertex_table_inv[j][vertex_table[j][v]];
        if (slot >= 0) invertible = false;
        slot = v;
      }
      for (int e = 0; e < graph.edge_count(); ++e) {
        int& slot = edge_table_inv[j][edge_table[j][e]];
        if (slot >= 0) invertible = false;
        slot = e;
      }
      for (int v = 0; v < graph.vertex_count(); ++v) invertible &= vertex_table_inv[j][v] >= 0;
      for (int e = 0; e < graph.edge_count(); ++e) invertible &= edge_table_inv[j][e] >= 0;
      if (!invertible) return;
      for (int e = 0; e < graph.edge_count(); ++e)
        cocycle_table_inv[j][e] = inverse_word(cocycle_table[j][edge_table_inv[j][e]]);
    }
  }

  void require_invertible() const {
    if (!invertible) throw std::logic_error("generator tables are not bijections");
  }

  int act_letter_vertex(int letter, int v) const {
    const int j = std::abs(letter) - 1;
    if (letter < 0) require_invertible();
    return letter > 0 ? vertex_table[j][v] : vertex_table_inv[j][v];
  }
  int act_letter_edge(int letter, int e) const {
    const int j = std::abs(letter) - 1;
    if (letter < 0) require_invertible();
    return letter > 0 ? edge_table[j][e] : edge_table_inv[j][e];
  }
  const Word& cocycle_letter(int letter, int e) const {
    const int j = std::abs(letter) - 1;
    if (letter < 0) require_invertible();
    return letter > 0 ? cocycle_table[j][e] : cocycle_table_inv[j][e];
  }

  int act_word_vertex(const Word& w, int v) const {
    for (auto it = w.rbegin(); it != w.rend(); ++it) v = act_letter_vertex(*it, v);
    return v;
  }

  // image edge together with the restriction word φ(w, e)
  std::pair<int, Word> act_word_edge(const Word& w, int e) const {
    Word restriction;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      const Word& r = cocycle_letter(*it, e);
      restriction.insert(restriction.begin(), r.begin(), r.end());
      e = act_letter_edge(*it, e);
    }
    return {e, restriction};
  }

  std::pair<Path, Word> act_word_path(const Word& w, const Path& p) const {
    Path out;
    out.anchor = act_word_vertex(w, p.anchor);
    Word cur = w;
    for (int e : p.edges) {
      auto [image, rest] = act_word_edge(cur, e);
      out.edges.push_back(image);
      cur = std::move(rest);
    }
    return {out, cur};
  }
};

template <GroupBackend G>
Path act(const SelfSimilarAction<G>& a, const typename G::Element& g, const Path& p) {
  return a.act_word_path(a.group.factorize(g), p).first;
}

template <GroupBackend G>
typename G::Element restrict_cocycle(const SelfSimilarAction<G>& a, const typename G::Element& g,
                                     const Path& p) {
  return a.group.evaluate(a.act_word_path(a.group.factorize(g), p).second);
}

template <GroupBackend G>
int act_vertex(const SelfSimilarAction<G>& a, const typename G::Element& g, int v) {
  return a.act_word_vertex(a.group.factorize(g), v);
}

/// First k letters of g·x, via (gx)_i = φ(g, x_1…x_{i-1}) x_i.
template <GroupBackend G>
std::vector<int> act_prefix(const SelfSimilarAction<G>& a, const typename G::Element& g,
                            const BoundaryPoint& x, int k) {
  std::vector<int> out;
  out.reserve(k);
  Word cur = a.group.factorize(g);
  for (int i = 0; i < k; ++i) {
    auto [image, rest] = a.act_word_edge(cur, x.letter(i));
    out.push_back(image);
    cur = std::move(rest);
  }
  return out;
}

/// Exact image of an eventually periodic point.  The run of restrictions
/// along the cycle is simulated until a (restriction, cycle phase) state
/// repeats; fails with nullopt only if no repeat shows up within the cap.
template <GroupBackend G>
std::optional<BoundaryPoint> act_point(const SelfSimilarAction<G>& a, const typename G::Element& g,
                                       const BoundaryPoint& x, int state_cap = 100000) {
  std::vector<int> out;
  Word cur = a.group.factorize(g);
  for (size_t i = 0; i < x.head.size(); ++i) {
    auto [image, rest] = a.act_word_edge(cur, x.head[i]);
    out.push_back(image);
    cur = std::move(rest);
  }
  std::map<std::string, int> seen;  // state key -> output index
  const int head_len = static_cast<int>(out.size());
  for (int step = 0; step <= state_cap; ++step) {
    const int phase = step % static_cast<int>(x.cycle.size());
    const std::string state = a.group.key(a.group.evaluate(cur)) + "@" + std::to_string(phase);
    auto [it, fresh] = seen.insert({state, static_cast<int>(out.size())});
    if (!fresh) {
      std::vector<int> head(out.begin(), out.begin() + it->second);
      std::vector<int> cycle(out.begin() + it->second, out.end());
      return make_point(a.graph, std::move(head), std::move(cycle));
    }
    auto [image, rest] = a.act_word_edge(cur, x.cycle[phase]);
    out.push_back(image);
    cur = std::move(rest);
  }
  (void)head_len;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// structural validation and axiom checking

template <GroupBackend G>
std::vector<std::string> table_defects(const SelfSimilarAction<G>& a) {
  std::vector<std::string> out;
  const Graph& gr = a.graph;
  for (int j = 0; j < a.group.generator_count(); ++j) {
    const std::string gn = a.group.generator_name(j);
    std::set<int> vs(a.vertex_table[j].begin(), a.vertex_table[j].end());
    if (static_cast<int>(vs.size()) != gr.vertex_count())
      out.push_back("generator " + gn + " is not a bijection on vertices");
    std::set<int> es(a.edge_table[j].begin(), a.edge_table[j].end());
    if (static_cast<int>(es.size()) != gr.edge_count())
      out.push_back("generator " + gn + " is not a bijection on edges");
  }
  if (!out.empty()) return out;  // the finer checks need invertible tables
  for (int j = 0; j < a.group.generator_count(); ++j) {
    const std::string gn = a.group.generator_name(j);
    for (int e = 0; e < gr.edge_count(); ++e) {
      const int ge = a.edge_table[j][e];
      if (gr.edge_range[ge] != a.vertex_table[j][gr.edge_range[e]])
        out.push_back("generator " + gn + ", edge " + gr.edge_names[e] + ": r(ge) != g r(e)");
      if (gr.edge_source[ge] != a.vertex_table[j][gr.edge_source[e]])
        out.push_back("generator " + gn + ", edge " + gr.edge_names[e] + ": d(ge) != g d(e)");
      // φ(g,e)x = gx for every vertex x
      for (int v = 0; v < gr.vertex_count(); ++v) {
        const int lhs = a.act_word_vertex(a.cocycle_table[j][e], v);
        if (lhs != a.vertex_table[j][v]) {
          out.push_back("generator " + gn + ", edge " + gr.edge_names[e] +
                        ": cocycle moves vertex " + gr.vertex_names[v] + " differently from g");
          break;
        }
      }
    }
  }
  return out;
}

struct AxiomsReport {
  bool ok = true;
  std::string axiom;           // violated axiom tag, e.g. "E2" or "SS4"
  std::string counterexample;  // human-readable witness
  int group_radius = 0;
  int path_length = 0;
};

/// Exhaustive check of (E1)–(E8) — reported as (SS1)–(SS8) on one-vertex
/// graphs — over all g, h in ball(group_radius) and all paths up to
/// path_length.  Structural table defects are reported first.
template <GroupBackend G>
AxiomsReport axioms_report(const SelfSimilarAction<G>& a, int group_radius, int path_length) {
  AxiomsReport rep;
  rep.group_radius = group_radius;
  rep.path_length = path_length;
  const bool ss = a.graph.vertex_count() == 1;
  auto fail = [&](const std::string& e_tag, const std::string& ss_tag, const std::string& what) {
    rep.ok = false;
    rep.axiom = ss ? ss_tag : e_tag;
    rep.counterexample = what;
  };

  auto structural = table_defects(a);
  if (!structural.empty()) {
    rep.ok = false;
    rep.axiom = "structure";
    rep.counterexample = structural.front();
    return rep;
  }
  if (!a.invertible) {
    rep.ok = false;
    rep.axiom = "structure";
    rep.counterexample = "generator tables are not invertible";
    return rep;
  }

  const auto ball = a.group.ball(group_radius);
  const auto paths = enumerate_paths_upto(a.graph, path_length);
  const Graph& gr = a.graph;
  const G& grp = a.group;

  for (const auto& g : ball) {
    // identity laws: 1w = w and φ(1, w) = 1
    if (grp.equal(g, grp.identity())) {
      for (const auto& p : paths) {
        if (act(a, g, p) != p) return fail("E1", "SS1", "1·" + render_path(gr, p)), rep;
        if (!grp.equal(restrict_cocycle(a, g, p), grp.identity()))
          return fail("E2", "SS7", "phi(1, " + render_path(gr, p) + ")"), rep;
      }
    }
    for (const auto& p : paths) {
      const Path gp = act(a, g, p);
      if (gp.length() != p.length())
        return fail("E1", "SS2", "length of " + grp.render(g) + "·" + render_path(gr, p)), rep;
      if (range_of(gr, gp) != act_vertex(a, g, range_of(gr, p)))
        return fail("E4", "SS3", grp.render(g) + "·" + render_path(gr, p)), rep;
      if (source_of(gr, gp) != act_vertex(a, g, source_of(gr, p)))
        return fail("E5", "SS3", grp.render(g) + "·" + render_path(gr, p)), rep;
      if (p.empty()) {
        // φ(g, x) = g on vertices
        if (!grp.equal(restrict_cocycle(a, g, p), g))
          return fail("E3", "SS5", "phi(" + grp.render(g) + ", " + render_path(gr, p) + ")"), rep;
      }
      // φ(g, α)x = gx on every vertex
      const auto r = restrict_cocycle(a, g, p);
      for (int v = 0; v < gr.vertex_count(); ++v)
        if (act_vertex(a, r, v) != act_vertex(a, g, v))
          return fail("E6", "SS5", "phi(" + grp.render(g) + ", " + render_path(gr, p) + ") on vertex " +
                                       gr.vertex_names[v]),
                 rep;
    }
    for (const auto& h : ball) {
      const auto gh = grp.multiply(g, h);
      for (const auto& p : paths) {
        // (gh)α = g(hα)
        if (act(a, gh, p) != act(a, g, act(a, h, p)))
          return fail("E1", "SS2",
                      "(" + grp.render(g) + "·" + grp.render(h) + ")·" + render_path(gr, p)),
                 rep;
        // φ(gh, α) = φ(g, hα) φ(h, α)
        const auto lhs = restrict_cocycle(a, gh, p);
        const auto rhs = grp.multiply(restrict_cocycle(a, g, act(a, h, p)), restrict_cocycle(a, h, p));
        if (!grp.equal(lhs, rhs))
          return fail("E2", "SS8",
                      "phi(" + grp.render(g) + "·" + grp.render(h) + ", " + render_path(gr, p) + ")"),
                 rep;
      }
    }
    // splits: g(αβ) = (gα) φ(g,α)β and φ(g, αβ) = φ(φ(g,α), β)
    for (const auto& p : paths) {
      for (int k = 0; k <= p.length(); ++k) {
        const Path alpha = prefix(gr, p, k);
        const Path beta = suffix_after(gr, p, k);
        const Path lhs = act(a, g, p);
        const auto ga = act(a, g, alpha);
        const auto rest = restrict_cocycle(a, g, alpha);
        const auto rhs = concat(gr, ga, act(a, rest, beta));
        if (!rhs || lhs != *rhs)
          return fail("E7", "SS4",
                      grp.render(g) + "·(" + render_path(gr, alpha) + " | " + render_path(gr, beta) + ")"),
                 rep;
        if (!grp.equal(restrict_cocycle(a, g, p), restrict_cocycle(a, rest, beta)))
          return fail("E8", "SS6",
                      "phi(" + grp.render(g) + ", " + render_path(gr, alpha) + "|" +
                          render_path(gr, beta) + ")"),
                 rep;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// decision procedures

template <GroupBackend G>
struct PseudoFreeVerdict {
  bool violated = false;
  typename G::Element witness_g;
  int witness_edge = -1;
  Path witness_path;  // path-level form of the witness, when violated
  int radius = 0;
  int path_radius = 0;
  bool edge_and_path_agree = true;
};

/// Bounded search for g ≠ 1 with ge = e and φ(g, e) = 1.  A clean verdict
/// only says "no violation up to the ball radius"; for infinite groups the
/// property itself quantifies over all of G.
template <GroupBackend G>
PseudoFreeVerdict<G> is_pseudo_free(const SelfSimilarAction<G>& a, int radius, int path_radius = -1) {
  if (path_radius < 0) path_radius = radius;
  PseudoFreeVerdict<G> v;
  v.radius = radius;
  v.path_radius = path_radius;
  v.witness_g = a.group.identity();
  bool edge_violation = false, path_violation = false;
  for (const auto& g : a.group.ball(radius)) {
    if (a.group.equal(g, a.group.identity())) continue;
    for (int e = 0; e < a.graph.edge_count() && !edge_violation; ++e) {
      Path pe = path_from_edges(a.graph, {e});
      if (act(a, g, pe) == pe &&
          a.group.equal(restrict_cocycle(a, g, pe), a.group.identity())) {
        edge_violation = true;
        v.witness_g = g;
        v.witness_edge = e;
        v.witness_path = pe;
      }
    }
    if (!path_violation) {
      for (const auto& w : enumerate_paths_upto(a.graph, path_radius)) {
        if (w.empty()) continue;
        if (act(a, g, w) == w && a.group.equal(restrict_cocycle(a, g, w), a.group.identity())) {
          path_violation = true;
          if (!edge_violation) {
            v.witness_g = g;
            v.witness_path = w;
          }
          break;
        }
      }
    }
    if (edge_violation) break;
  }
  v.violated = edge_violation;
  v.edge_and_path_agree = edge_violation == path_violation;
  return v;
}

template <GroupBackend G>
struct ExhaustingVerdict {
  bool ok = false;
  // witness per ball element, in ball order: (g, α) with φ(g, α) = 1
  std::vector<std::pair<typename G::Element, Path>> witnesses;
  std::vector<typename G::Element> unresolved;
  int radius = 0;
  int path_length = 0;
};

/// For each g in the ball, breadth-first search for α with φ(g, α) = 1.
template <GroupBackend G>
ExhaustingVerdict<G> is_exhausting(const SelfSimilarAction<G>& a, int radius, int path_length) {
  ExhaustingVerdict<G> v;
  v.radius = radius;
  v.path_length = path_length;
  for (const auto& g : a.group.ball(radius)) {
    bool found = false;
    for (int len = 0; len <= path_length && !found; ++len) {
      for (const auto& alpha : enumerate_paths(a.graph, len)) {
        if (a.group.equal(restrict_cocycle(a, g, alpha), a.group.identity())) {
          v.witnesses.push_back({g, alpha});
          found = true;
          break;
        }
      }
    }
    if (!found) v.unresolved.push_back(g);
  }
  v.ok = v.unresolved.empty();
  return v;
}

/// The induced self-similar group (G, Ẽ, φ̃) on the single-vertex collapse.
template <GroupBackend G>
SelfSimilarAction<G> collapse_action(const SelfSimilarAction<G>& a) {
  SelfSimilarAction<G> out;
  out.graph = collapse(a.graph);
  out.group = a.group;
  out.vertex_table.assign(a.group.generator_count(), {0});
  out.edge_table = a.edge_table;
  out.cocycle_table = a.cocycle_table;
  out.derive_inverse_tables();
  return out;
}

}  // namespace selfsim

#endif
