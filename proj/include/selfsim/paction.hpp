#ifndef SELFSIM_PACTION_HPP
#define SELFSIM_PACTION_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/ugroup.hpp"

namespace selfsim {

// ---------------------------------------------------------------------------
// clopen subsets of the infinite path space Σ_E

/// A finite union of cylinders, kept as the canonical antichain of
/// prefixes: no member extends another, and a complete sibling family is
/// collapsed to its parent.  Σ_E itself is the set of all vertex paths.
struct ClopenSet {
  std::vector<Path> prefixes;

  bool is_empty() const { return prefixes.empty(); }
  friend bool operator==(const ClopenSet& a, const ClopenSet& b) { return a.prefixes == b.prefixes; }
  friend bool operator!=(const ClopenSet& a, const ClopenSet& b) { return !(a == b); }
};

inline ClopenSet clopen_canonical(const Graph& g, std::vector<Path> ps) {
  // drop members that extend another member
  std::sort(ps.begin(), ps.end());
  std::vector<Path> anti;
  for (const auto& p : ps) {
    bool covered = false;
    for (const auto& q : anti) covered |= is_prefix(g, q, p);
    if (!covered) anti.push_back(p);
  }
  // collapse complete sibling families, deepest first
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(anti.begin(), anti.end());
    for (int i = static_cast<int>(anti.size()) - 1; i >= 0 && !changed; --i) {
      if (anti[i].empty()) continue;
      Path parent = prefix(g, anti[i], anti[i].length() - 1);
      const auto exts = g.extensions_at(source_of(g, parent));
      bool all = !exts.empty();
      for (int e : exts) {
        Path sib = parent;
        sib.edges.push_back(e);
        if (sib.edges.size() == 1) sib.anchor = g.edge_range[e];
        all &= std::find(anti.begin(), anti.end(), sib) != anti.end();
      }
      if (all) {
        std::vector<Path> next;
        for (const auto& p : anti) {
          bool sibling = p.length() == parent.length() + 1 && is_prefix(g, parent, p);
          if (!sibling) next.push_back(p);
        }
        next.push_back(parent);
        anti = std::move(next);
        changed = true;
      }
    }
  }
  std::sort(anti.begin(), anti.end());
  return ClopenSet{std::move(anti)};
}

inline ClopenSet clopen_empty() { return ClopenSet{}; }

inline ClopenSet clopen_full(const Graph& g) {
  std::vector<Path> ps;
  for (int v = 0; v < g.vertex_count(); ++v) ps.push_back(Path::at_vertex(v));
  return clopen_canonical(g, std::move(ps));
}

inline ClopenSet clopen_of(const Graph& g, std::vector<Path> ps) {
  return clopen_canonical(g, std::move(ps));
}

inline ClopenSet clopen_union(const Graph& g, const ClopenSet& a, const ClopenSet& b) {
  auto ps = a.prefixes;
  ps.insert(ps.end(), b.prefixes.begin(), b.prefixes.end());
  return clopen_canonical(g, std::move(ps));
}

inline ClopenSet clopen_intersect(const Graph& g, const ClopenSet& a, const ClopenSet& b) {
  std::vector<Path> ps;
  for (const auto& p : a.prefixes)
    for (const auto& q : b.prefixes) {
      if (is_prefix(g, p, q))
        ps.push_back(q);
      else if (is_prefix(g, q, p))
        ps.push_back(p);
    }
  return clopen_canonical(g, std::move(ps));
}

inline ClopenSet clopen_complement(const Graph& g, const ClopenSet& a) {
  std::vector<Path> out;
  // descend from each vertex cylinder, keeping the parts disjoint from a
  std::vector<Path> stack;
  for (int v = 0; v < g.vertex_count(); ++v) stack.push_back(Path::at_vertex(v));
  while (!stack.empty()) {
    Path p = stack.back();
    stack.pop_back();
    bool inside = false, meets = false;
    for (const auto& q : a.prefixes) {
      inside |= is_prefix(g, q, p);
      meets |= is_prefix(g, q, p) || is_prefix(g, p, q);
    }
    if (inside) continue;
    if (!meets) {
      out.push_back(p);
      continue;
    }
    for (int e : g.extensions_at(source_of(g, p))) {
      Path child = p;
      child.edges.push_back(e);
      if (child.edges.size() == 1) child.anchor = g.edge_range[e];
      stack.push_back(child);
    }
  }
  return clopen_canonical(g, std::move(out));
}

inline bool clopen_subset(const Graph& g, const ClopenSet& a, const ClopenSet& b) {
  return clopen_union(g, a, b) == b;
}

inline bool clopen_contains_point(const Graph& g, const ClopenSet& a, const BoundaryPoint& x) {
  for (const auto& p : a.prefixes)
    if (has_prefix(g, x, p)) return true;
  return false;
}

inline std::string render_clopen(const Graph& g, const ClopenSet& a) {
  if (a.is_empty()) return "{}";
  std::string out = "{";
  for (size_t i = 0; i < a.prefixes.size(); ++i) {
    if (i) out += ", ";
    out += render_path(g, a.prefixes[i]);
  }
  return out + "}";
}

// all composable extensions of p by `extra` edges
inline std::vector<Path> refinements(const Graph& g, const Path& p, int extra) {
  std::vector<Path> cur{p};
  for (int i = 0; i < extra; ++i) {
    std::vector<Path> next;
    for (const auto& q : cur)
      for (int e : g.extensions_at(source_of(g, q))) {
        Path r = q;
        r.edges.push_back(e);
        if (r.edges.size() == 1) r.anchor = g.edge_range[e];
        next.push_back(r);
      }
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// prefix-rewrite partial homeomorphisms of Σ_E

/// One piece of a partial homeomorphism: βx ↦ α(gx); valid when
/// d(α) = g·d(β) so images stay composable.
template <GroupBackend G>
struct MapPiece {
  Path in;
  typename G::Element g;
  Path out;
};

/// A partial homeomorphism as finitely many pieces with pairwise disjoint
/// in-cylinders and pairwise disjoint out-cylinders.
template <GroupBackend G>
struct PartialMap {
  std::vector<MapPiece<G>> pieces;
};

template <GroupBackend G>
bool piece_valid(const SelfSimilarAction<G>& a, const MapPiece<G>& p) {
  return source_of(a.graph, p.out) == act_vertex(a, p.g, source_of(a.graph, p.in));
}

template <GroupBackend G>
std::string render_piece(const SelfSimilarAction<G>& a, const MapPiece<G>& p) {
  return render_path(a.graph, p.in) + "· ↦ " + render_path(a.graph, p.out) + "·(" +
         a.group.render(p.g) + "·)";
}

template <GroupBackend G>
std::string render_map(const SelfSimilarAction<G>& a, const PartialMap<G>& m) {
  std::string s = "[";
  for (size_t i = 0; i < m.pieces.size(); ++i) {
    if (i) s += "; ";
    s += render_piece(a, m.pieces[i]);
  }
  return s + "]";
}

// the same piece with its in-prefix deepened to in·τ
template <GroupBackend G>
MapPiece<G> restrict_piece(const SelfSimilarAction<G>& a, const MapPiece<G>& p, const Path& tau) {
  MapPiece<G> out;
  out.in = *concat(a.graph, p.in, tau);
  out.g = restrict_cocycle(a, p.g, tau);
  out.out = *concat(a.graph, p.out, act(a, p.g, tau));
  return out;
}

template <GroupBackend G>
ClopenSet map_domain(const SelfSimilarAction<G>& a, const PartialMap<G>& m) {
  std::vector<Path> ps;
  for (const auto& p : m.pieces) ps.push_back(p.in);
  return clopen_of(a.graph, std::move(ps));
}

template <GroupBackend G>
ClopenSet map_codomain(const SelfSimilarAction<G>& a, const PartialMap<G>& m) {
  std::vector<Path> ps;
  for (const auto& p : m.pieces) ps.push_back(p.out);
  return clopen_of(a.graph, std::move(ps));
}

template <GroupBackend G>
PartialMap<G> inverse_map(const SelfSimilarAction<G>& a, const PartialMap<G>& m) {
  PartialMap<G> out;
  for (const auto& p : m.pieces)
    out.pieces.push_back(MapPiece<G>{p.out, a.group.invert(p.g), p.in});
  return out;
}

template <GroupBackend G>
PartialMap<G> identity_map(const SelfSimilarAction<G>& a, const ClopenSet& dom) {
  PartialMap<G> out;
  for (const auto& p : dom.prefixes) out.pieces.push_back(MapPiece<G>{p, a.group.identity(), p});
  return out;
}

template <GroupBackend G>
std::optional<BoundaryPoint> apply_map(const SelfSimilarAction<G>& a, const PartialMap<G>& m,
                                       const BoundaryPoint& x) {
  for (const auto& p : m.pieces) {
    if (!has_prefix(a.graph, x, p.in)) continue;
    const auto tail = strip_prefix(a.graph, x, p.in);
    const auto moved = act_point(a, p.g, tail);
    if (!moved) return std::nullopt;
    return prepend(a.graph, p.out, *moved);
  }
  return std::nullopt;
}

template <GroupBackend G>
std::optional<std::vector<int>> apply_map_prefix(const SelfSimilarAction<G>& a, const PartialMap<G>& m,
                                                 const BoundaryPoint& x, int depth) {
  for (const auto& p : m.pieces) {
    if (!has_prefix(a.graph, x, p.in)) continue;
    std::vector<int> out = p.out.edges;
    const auto tail = strip_prefix(a.graph, x, p.in);
    const int need = depth - static_cast<int>(out.size());
    if (need > 0) {
      auto more = act_prefix(a, p.g, tail, need);
      out.insert(out.end(), more.begin(), more.end());
    }
    out.resize(depth);
    return out;
  }
  return std::nullopt;
}

/// Composition f ∘ h on the largest possible domain, computed piecewise.
template <GroupBackend G>
PartialMap<G> compose(const SelfSimilarAction<G>& a, const PartialMap<G>& f, const PartialMap<G>& h) {
  const Graph& gr = a.graph;
  PartialMap<G> out;
  for (const auto& ph : h.pieces) {
    for (const auto& pf : f.pieces) {
      if (is_prefix(gr, pf.in, ph.out)) {
        // h's whole image cylinder lands inside pf's in-cylinder
        const Path tau = suffix_after(gr, ph.out, pf.in.length());
        // x = ph.in · y  ↦  ph.out (g_h y) = pf.in · τ (g_h y)  ↦  pf.out (g_f τ) (φ(g_f, τ) g_h y)
        MapPiece<G> piece;
        piece.in = ph.in;
        piece.g = a.group.multiply(restrict_cocycle(a, pf.g, tau), ph.g);
        piece.out = *concat(gr, pf.out, act(a, pf.g, tau));
        out.pieces.push_back(piece);
      } else if (is_prefix(gr, ph.out, pf.in)) {
        // only images extending pf.in survive; pull the gap back through ph
        const Path delta = suffix_after(gr, pf.in, ph.out.length());
        const auto ginv = a.group.invert(ph.g);
        const Path pulled = act(a, ginv, delta);
        auto in = concat(gr, ph.in, pulled);
        MapPiece<G> piece;
        piece.in = *in;
        piece.g = a.group.multiply(pf.g, a.group.invert(restrict_cocycle(a, ginv, delta)));
        piece.out = pf.out;
        out.pieces.push_back(piece);
      }
    }
  }
  return out;
}

/// The partial homeomorphism θ_s : βΣ_E → αΣ_E, βx ↦ α(gx).
template <GroupBackend G>
PartialMap<G> triple_map(const SelfSimilarAction<G>& a, const Triple<G>& s) {
  if (s.zero) return PartialMap<G>{};
  return PartialMap<G>{{MapPiece<G>{s.beta, s.g, s.alpha}}};
}

// structural equality: equal domains and pairwise agreement of pieces on
// overlaps (labels compared exactly; sound on faithful fixtures)
template <GroupBackend G>
bool map_equal_structural(const SelfSimilarAction<G>& a, const PartialMap<G>& f,
                          const PartialMap<G>& h) {
  if (!(map_domain(a, f) == map_domain(a, h))) return false;
  const Graph& gr = a.graph;
  for (const auto& pf : f.pieces)
    for (const auto& ph : h.pieces) {
      if (is_prefix(gr, pf.in, ph.in)) {
        const auto r = restrict_piece(a, pf, suffix_after(gr, ph.in, pf.in.length()));
        if (!(r.out == ph.out) || !a.group.equal(r.g, ph.g)) return false;
      } else if (is_prefix(gr, ph.in, pf.in)) {
        const auto r = restrict_piece(a, ph, suffix_after(gr, pf.in, ph.in.length()));
        if (!(r.out == pf.out) || !a.group.equal(r.g, pf.g)) return false;
      }
    }
  return true;
}

/// Pointwise comparison at a given depth: equal domains, and on every
/// depth-refined cylinder the canonical eventually periodic points map to
/// the same depth-prefix.
template <GroupBackend G>
bool maps_agree_pointwise(const SelfSimilarAction<G>& a, const PartialMap<G>& f,
                          const PartialMap<G>& h, int depth) {
  if (!(map_domain(a, f) == map_domain(a, h))) return false;
  for (const auto& cyl : map_domain(a, f).prefixes) {
    const int extra = std::max(0, depth - cyl.length());
    for (const auto& rho : refinements(a.graph, cyl, extra)) {
      const auto x = periodic_completion(a.graph, rho);
      const auto fx = apply_map_prefix(a, f, x, depth);
      const auto hx = apply_map_prefix(a, h, x, depth);
      if (!fx || !hx || *fx != *hx) return false;
    }
  }
  return true;
}

/// Distinct in-cylinders at every depth must land in distinct
/// out-cylinders; checked structurally on depth-k refinements.
template <GroupBackend G>
bool injective_at_depth(const SelfSimilarAction<G>& a, const PartialMap<G>& m, int depth) {
  std::vector<Path> outs;
  for (const auto& p : m.pieces) {
    const int extra = std::max(0, depth - p.in.length());
    for (const auto& rho : refinements(a.graph, p.in, extra))
      outs.push_back(restrict_piece(a, p, suffix_after(a.graph, rho, p.in.length())).out);
  }
  for (size_t i = 0; i < outs.size(); ++i)
    for (size_t j = i + 1; j < outs.size(); ++j)
      if (is_prefix(a.graph, outs[i], outs[j]) || is_prefix(a.graph, outs[j], outs[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// partial actions of a group

template <GroupBackend G>
struct PartialActionEntry {
  typename G::Element h;
  PartialMap<G> theta;  // in-cylinders form D_{h^-1}, out-cylinders form D_h
};

/// Finitely many group elements with nonempty domains; everything else
/// implicitly acts nowhere.
template <GroupBackend G>
struct PartialActionTable {
  std::vector<PartialActionEntry<G>> entries;

  const PartialActionEntry<G>* find(const G& grp, const typename G::Element& h) const {
    for (const auto& e : entries)
      if (grp.equal(e.h, h)) return &e;
    return nullptr;
  }
};

struct PartialActionVerdict {
  bool ok = true;
  std::string detail;
};

/// D_1 = X with θ_1 = id, θ_{h^-1} = θ_h^-1, and θ_g∘θ_h ⊂ θ_{gh} for all
/// table pairs whose product is present; containment is domain inclusion
/// plus pointwise agreement at the given depth.
template <GroupBackend G>
PartialActionVerdict axioms_partial_action(const SelfSimilarAction<G>& a,
                                           const PartialActionTable<G>& tbl, int depth) {
  PartialActionVerdict v;
  const auto* unit = tbl.find(a.group, a.group.identity());
  if (!unit || !(map_domain(a, unit->theta) == clopen_full(a.graph)) ||
      !map_equal_structural(a, unit->theta, identity_map(a, clopen_full(a.graph)))) {
    v.ok = false;
    v.detail = "D_1 != X or theta_1 != id";
    return v;
  }
  for (const auto& e : tbl.entries) {
    const auto* inv = tbl.find(a.group, a.group.invert(e.h));
    if (!inv) continue;
    if (!maps_agree_pointwise(a, inv->theta, inverse_map(a, e.theta), depth)) {
      v.ok = false;
      v.detail = "theta_{h^-1} != theta_h^-1 at h = " + a.group.render(e.h);
      return v;
    }
  }
  for (const auto& eg : tbl.entries)
    for (const auto& eh : tbl.entries) {
      const auto* egh = tbl.find(a.group, a.group.multiply(eg.h, eh.h));
      if (!egh) continue;
      const auto comp = compose(a, eg.theta, eh.theta);
      // graph-of-map containment at the prefix depth
      if (!clopen_subset(a.graph, map_domain(a, comp), map_domain(a, egh->theta))) {
        v.ok = false;
        v.detail = "dom(theta_g theta_h) not inside dom(theta_gh) for g = " + a.group.render(eg.h) +
                   ", h = " + a.group.render(eh.h);
        return v;
      }
      for (const auto& cyl : map_domain(a, comp).prefixes) {
        const int extra = std::max(0, depth - cyl.length());
        for (const auto& rho : refinements(a.graph, cyl, extra)) {
          const auto x = periodic_completion(a.graph, rho);
          const auto lhs = apply_map_prefix(a, comp, x, depth);
          const auto rhs = apply_map_prefix(a, egh->theta, x, depth);
          if (!lhs || !rhs || *lhs != *rhs) {
            v.ok = false;
            v.detail = "theta_g theta_h disagrees with theta_gh at " + render_path(a.graph, rho);
            return v;
          }
        }
      }
    }
  return v;
}

// ---------------------------------------------------------------------------
// the partial action of the universal group (eq. F_g = ∪ D_{ss*})

struct PieceConflict {
  std::string piece_a;
  std::string piece_b;
  std::string at_prefix;
};

namespace detail {

/// Merge pieces into one partial map.  Comparable in-cylinders must carry
/// agreeing maps: checked structurally first, then pointwise at `depth`;
/// genuine disagreement is a conflict (idempotent purity failing for the
/// supplied σ).
template <GroupBackend G>
std::optional<PieceConflict> merge_pieces(const SelfSimilarAction<G>& a,
                                          std::vector<MapPiece<G>> pieces, int depth,
                                          PartialMap<G>& out) {
  // Path order sorts by length first, so coarser pieces are processed
  // before anything they might subsume.
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const MapPiece<G>& x, const MapPiece<G>& y) { return x.in < y.in; });
  std::vector<MapPiece<G>> kept;
  for (const auto& p : pieces) {
    bool subsumed = false;
    for (const auto& q : kept) {
      if (!is_prefix(a.graph, q.in, p.in)) continue;
      const auto r = restrict_piece(a, q, suffix_after(a.graph, p.in, q.in.length()));
      bool agree = r.out == p.out && a.group.equal(r.g, p.g);
      if (!agree) {
        // labels differ; accept only if genuinely equal pointwise
        agree = true;
        const int extra = std::max(0, depth - p.in.length());
        for (const auto& rho : refinements(a.graph, p.in, extra)) {
          const auto x = periodic_completion(a.graph, rho);
          const PartialMap<G> mq{{q}}, mp{{p}};
          const auto xq = apply_map_prefix(a, mq, x, depth);
          const auto xp = apply_map_prefix(a, mp, x, depth);
          if (!xq || !xp || *xq != *xp)
            return PieceConflict{render_piece(a, q), render_piece(a, p), render_path(a.graph, rho)};
        }
      }
      subsumed = true;
      break;
    }
    if (!subsumed) kept.push_back(p);
  }
  out.pieces = std::move(kept);
  return std::nullopt;
}

}  // namespace detail

template <GroupBackend G>
struct UniversalActionResult {
  std::optional<PieceConflict> conflict;
  PartialMap<G> map;
  ClopenSet domain;    // F_{g^-1} = ∪ D_{s*s}, the domain of θ_g
  ClopenSet codomain;  // F_g = ∪ D_{ss*}
  int preimage_count = 0;
};

/// The Steinberg–Milan style action of U(S) on Σ_E: bundle the θ_s over
/// all σ-preimages s of g.  Overlapping pieces must agree; a conflict
/// witnesses that the supplied σ is not idempotent pure.
template <GroupBackend G, typename Sigma>
UniversalActionResult<G> universal_action(const SelfSimilarAction<G>& a, const Sigma& sigma,
                                          const typename Sigma::TargetElement& g, int path_bound,
                                          int depth) {
  UniversalActionResult<G> res;
  std::vector<MapPiece<G>> pieces;
  for (const auto& s : sigma.preimages(a, g, path_bound)) {
    pieces.push_back(MapPiece<G>{s.beta, s.g, s.alpha});
    ++res.preimage_count;
  }
  res.conflict = detail::merge_pieces(a, std::move(pieces), depth, res.map);
  res.domain = map_domain(a, res.map);
  res.codomain = map_codomain(a, res.map);
  return res;
}

// ---------------------------------------------------------------------------
// the odometer's partial action in closed form (three cases)

template <GroupBackend G>
struct OdometerActionResult {
  bool in_image = false;  // g of the form αβ^-1
  PartialMap<G> map;
};

/// The explicit three-case partial action of BS(1,n) on Σ_{R_n}: equal
/// lengths give a global power of the adding machine λ, longer α prepends
/// a fixed word, longer β strips one.  λ itself is z acting.
inline OdometerActionResult<ZGroup> odometer_action(const SelfSimilarAction<ZGroup>& a,
                                                    const BSGroup::Element& g) {
  const auto shape = detect_odometer(a);
  if (!shape) throw std::invalid_argument("odometer_action needs an odometer fixture");
  const int n = shape->n;
  OdometerActionResult<ZGroup> res;
  const int k = g.k;
  if (g.exp > std::max(0, -k)) return res;  // not αβ^-1 shaped: empty domain
  res.in_image = true;
  auto digits_to_path = [&](long long v, int len) {
    std::vector<int> edges;
    for (int i = 0; i < len; ++i) {
      edges.push_back(shape->edge_of_digit[static_cast<int>(v % n)]);
      v /= n;
    }
    return edges.empty() ? Path::at_vertex(0) : path_from_edges(a.graph, edges);
  };
  long long pw = 1;
  for (int i = 0; i < std::abs(k); ++i) pw *= n;
  if (k == 0) {
    res.map.pieces.push_back(MapPiece<ZGroup>{Path::at_vertex(0), g.num, Path::at_vertex(0)});
  } else if (k > 0) {
    const long long head = ((g.num % pw) + pw) % pw;  // n_{α_g}
    const long long power = (g.num - head) / pw;
    res.map.pieces.push_back(MapPiece<ZGroup>{Path::at_vertex(0), power, digits_to_path(head, k)});
  } else {
    long long q_scaled = g.num;  // q · n^{-k}
    for (int i = g.exp; i < -k; ++i) q_scaled *= n;
    const long long head = ((-q_scaled) % pw + pw) % pw;  // n_{β_g}
    const long long power = (q_scaled + head) / pw;
    res.map.pieces.push_back(MapPiece<ZGroup>{digits_to_path(head, -k), power, Path::at_vertex(0)});
  }
  return res;
}

// ---------------------------------------------------------------------------
// the Quigg-Raeburn action of the free group on E^1 (one-vertex graphs)

/// θ_{αβ^-1} : βΣ → αΣ, βx ↦ αx; empty map when the word is not of the
/// form αβ^-1.
template <GroupBackend G>
PartialMap<G> quigg_raeburn(const SelfSimilarAction<G>& a, const FreeGroup::Element& w) {
  require_one_vertex(a);
  PartialMap<G> out;
  const auto shape = alpha_beta_shape(w);
  if (!shape) return out;
  auto to_path = [&](const std::vector<int>& letters) {
    if (letters.empty()) return Path::at_vertex(0);
    return path_from_edges(a.graph, letters);
  };
  out.pieces.push_back(MapPiece<G>{to_path(shape->second), a.group.identity(), to_path(shape->first)});
  return out;
}

// ---------------------------------------------------------------------------
// induced partial actions E_h = ∪_{g ∈ φ^-1(h)} D_g

template <GroupBackend G>
struct InducedActionResult {
  std::optional<PieceConflict> conflict;
  PartialMap<G> map;
  ClopenSet domain;  // approximation of the domain of θ_h at this bound
  bool stabilized = false;
  int bound = 0;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> preimage_words;  // (α, β) edge lists
};

/// Push the Quigg-Raeburn action along φ : F_{E^1} → U(S), φ(e) = σ(S_e):
/// enumerate reduced pairs αβ^-1 with φ(αβ^-1) = h and |α|+|β| ≤ bound
/// and merge their pieces.  Domains can be strictly increasing unions, so
/// the result records whether the last enumeration step still grew.
template <GroupBackend G, typename Sigma>
InducedActionResult<G> induced_action(const SelfSimilarAction<G>& a, const Sigma& sigma,
                                      const typename Sigma::TargetElement& h, int bound, int depth) {
  require_one_vertex(a);
  InducedActionResult<G> res;
  res.bound = bound;
  auto sigma_of_path = [&](const Path& p) {
    return sigma.apply(a, make_triple(a, p, a.group.identity(), Path::at_vertex(0)));
  };
  std::vector<MapPiece<G>> pieces, pieces_prev;
  for (int total = 0; total <= bound; ++total) {
    for (int la = 0; la <= total; ++la) {
      const int lb = total - la;
      for (const auto& alpha : enumerate_paths(a.graph, la)) {
        const auto sa = sigma_of_path(alpha);
        for (const auto& beta : enumerate_paths(a.graph, lb)) {
          if (!alpha.empty() && !beta.empty() && alpha.edges.back() == beta.edges.back())
            continue;  // not reduced as αβ^-1
          const auto val = sigma.target.multiply(sa, sigma.target.invert(sigma_of_path(beta)));
          if (!sigma.target.equal(val, h)) continue;
          pieces.push_back(MapPiece<G>{beta, a.group.identity(), alpha});
          res.preimage_words.push_back({alpha.edges, beta.edges});
          if (total < bound) pieces_prev.push_back(pieces.back());
        }
      }
    }
  }
  res.conflict = detail::merge_pieces(a, pieces, depth, res.map);
  res.domain = map_domain(a, res.map);
  PartialMap<G> prev_map;
  auto prev_conflict = detail::merge_pieces(a, pieces_prev, depth, prev_map);
  (void)prev_conflict;
  res.stabilized = map_domain(a, prev_map) == res.domain;
  return res;
}

// ---------------------------------------------------------------------------
// surjectivity witnesses from the exhausting property

template <GroupBackend G>
struct SurjectivityWitness {
  Path alpha;
  Path g_alpha;
  bool idempotent_identity_ok = false;  // U_g S_α S*_{gα} = S_{gα} S*_{gα} in S
};

/// From an exhausting witness φ(g, α) = 1: σ(U_g) = σ(S_{gα} S_α*), so the
/// pair (gα, α) expresses σ(U_g) over edge generators.
template <GroupBackend G>
std::optional<SurjectivityWitness<G>> exhausting_surjectivity_witness(
    const SelfSimilarAction<G>& a, const typename G::Element& g, int path_bound) {
  require_one_vertex(a);
  for (int len = 0; len <= path_bound; ++len) {
    for (const auto& alpha : enumerate_paths(a.graph, len)) {
      if (!a.group.equal(restrict_cocycle(a, g, alpha), a.group.identity())) continue;
      SurjectivityWitness<G> w;
      w.alpha = alpha;
      w.g_alpha = act(a, g, alpha);
      const auto vertex = Path::at_vertex(0);
      const auto u_g = make_triple(a, vertex, g, vertex);
      const auto s_alpha = make_triple(a, alpha, a.group.identity(), vertex);
      const auto s_galpha = make_triple(a, w.g_alpha, a.group.identity(), vertex);
      const auto lhs = multiply(a, multiply(a, u_g, s_alpha), star(a, s_galpha));
      const auto rhs = multiply(a, s_galpha, star(a, s_galpha));
      w.idempotent_identity_ok = !lhs.zero && triple_equal(a, lhs, rhs) && is_idempotent(a, lhs);
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace selfsim

#endif
