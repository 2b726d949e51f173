#ifndef SELFSIM_ISG_HPP
#define SELFSIM_ISG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/action.hpp"

namespace selfsim {

/// An element (α, g, β) of S_{G,E} with d(α) = g·d(β), or the zero.
template <GroupBackend G>
struct Triple {
  bool zero = true;
  Path alpha;
  typename G::Element g;
  Path beta;

  static Triple zero_element() { return Triple{}; }
};

template <GroupBackend G>
Triple<G> make_triple(const SelfSimilarAction<G>& a, Path alpha, typename G::Element g, Path beta) {
  if (source_of(a.graph, alpha) != act_vertex(a, g, source_of(a.graph, beta)))
    throw std::invalid_argument("not an element of S: d(alpha) != g d(beta)");
  Triple<G> t;
  t.zero = false;
  t.alpha = std::move(alpha);
  t.g = std::move(g);
  t.beta = std::move(beta);
  return t;
}

template <GroupBackend G>
bool triple_equal(const SelfSimilarAction<G>& a, const Triple<G>& s, const Triple<G>& t) {
  if (s.zero || t.zero) return s.zero == t.zero;
  return s.alpha == t.alpha && s.beta == t.beta && a.group.equal(s.g, t.g);
}

template <GroupBackend G>
std::string render_triple(const SelfSimilarAction<G>& a, const Triple<G>& s) {
  if (s.zero) return "0";
  return "(" + render_path(a.graph, s.alpha) + ", " + a.group.render(s.g) + ", " +
         render_path(a.graph, s.beta) + ")";
}

/// The product of S_{G,E}: absorbing zero, and on nonzero elements
///   (α,g,β)(γ,h,ν) = (α·gγ', φ(g,γ')h, ν)            if γ = βγ'
///                  = (α, g·φ(h⁻¹,β')⁻¹, ν·(h⁻¹β'))   if β = γβ'
///                  = 0                                otherwise.
template <GroupBackend G>
Triple<G> multiply(const SelfSimilarAction<G>& a, const Triple<G>& s, const Triple<G>& t) {
  if (s.zero || t.zero) return Triple<G>::zero_element();
  const Graph& gr = a.graph;
  if (is_prefix(gr, s.beta, t.alpha)) {
    const Path gamma1 = suffix_after(gr, t.alpha, s.beta.length());
    const Path moved = act(a, s.g, gamma1);
    auto left = concat(gr, s.alpha, moved);
    if (!left) return Triple<G>::zero_element();
    return make_triple(a, *left, a.group.multiply(restrict_cocycle(a, s.g, gamma1), t.g), t.beta);
  }
  if (is_prefix(gr, t.alpha, s.beta)) {
    const Path beta1 = suffix_after(gr, s.beta, t.alpha.length());
    const auto h_inv = a.group.invert(t.g);
    const auto mid = a.group.multiply(s.g, a.group.invert(restrict_cocycle(a, h_inv, beta1)));
    auto right = concat(gr, t.beta, act(a, h_inv, beta1));
    if (!right) return Triple<G>::zero_element();
    return make_triple(a, s.alpha, mid, *right);
  }
  return Triple<G>::zero_element();
}

template <GroupBackend G>
Triple<G> star(const SelfSimilarAction<G>& a, const Triple<G>& s) {
  if (s.zero) return s;
  return make_triple(a, s.beta, a.group.invert(s.g), s.alpha);
}

template <GroupBackend G>
bool is_idempotent(const SelfSimilarAction<G>& a, const Triple<G>& s) {
  return triple_equal(a, multiply(a, s, s), s);
}

/// Natural order: s ⩽ t iff s = s s* t.
template <GroupBackend G>
bool leq(const SelfSimilarAction<G>& a, const Triple<G>& s, const Triple<G>& t) {
  return triple_equal(a, multiply(a, multiply(a, s, star(a, s)), t), s);
}

template <GroupBackend G>
Triple<G> cylinder_idempotent(const SelfSimilarAction<G>& a, const Path& p) {
  return make_triple(a, p, a.group.identity(), p);
}

/// ι : S_{G,E} -> S_{G,Ẽ}, (α, g, β) ↦ (Q(α), g, Q(β)); a prehomomorphism
/// onto the collapsed action whenever the product is nonzero.
template <GroupBackend G>
Triple<G> iota(const SelfSimilarAction<G>& collapsed, const Triple<G>& s) {
  if (s.zero) return s;
  Triple<G> out;
  out.zero = false;
  out.alpha = q_map(s.alpha);
  out.g = s.g;
  out.beta = q_map(s.beta);
  (void)collapsed;
  return out;
}

// all nonzero triples with |α|, |β| <= path_length and g in ball(radius),
// in a fixed deterministic order
template <GroupBackend G>
std::vector<Triple<G>> enumerate_triples(const SelfSimilarAction<G>& a, int path_length, int radius) {
  std::vector<Triple<G>> out;
  const auto paths = enumerate_paths_upto(a.graph, path_length);
  const auto ball = a.group.ball(radius);
  for (const auto& alpha : paths)
    for (const auto& g : ball)
      for (const auto& beta : paths)
        if (source_of(a.graph, alpha) == act_vertex(a, g, source_of(a.graph, beta))) {
          Triple<G> t;
          t.zero = false;
          t.alpha = alpha;
          t.g = g;
          t.beta = beta;
          out.push_back(t);
        }
  return out;
}

// ---------------------------------------------------------------------------
// the Zappa-Szép monoid E* ⋈ G of a self-similar group (one-vertex graph)

template <GroupBackend G>
struct ZSPair {
  Path word;
  typename G::Element g;
};

template <GroupBackend G>
void require_one_vertex(const SelfSimilarAction<G>& a) {
  if (a.graph.vertex_count() != 1)
    throw std::invalid_argument("Zappa-Szép product needs a one-vertex graph; collapse first");
}

/// (α, g)(β, h) = (α·gβ, φ(g, β)h); agrees with the S-product on (α, g, ∅).
template <GroupBackend G>
ZSPair<G> zs_multiply(const SelfSimilarAction<G>& a, const ZSPair<G>& p, const ZSPair<G>& q) {
  require_one_vertex(a);
  auto word = concat(a.graph, p.word, act(a, p.g, q.word));
  return ZSPair<G>{*word, a.group.multiply(restrict_cocycle(a, p.g, q.word), q.g)};
}

template <GroupBackend G>
bool zs_equal(const SelfSimilarAction<G>& a, const ZSPair<G>& p, const ZSPair<G>& q) {
  return p.word == q.word && a.group.equal(p.g, q.g);
}

template <GroupBackend G>
std::string render_zs(const SelfSimilarAction<G>& a, const ZSPair<G>& p) {
  return "(" + render_path(a.graph, p.word) + ", " + a.group.render(p.g) + ")";
}

// ---------------------------------------------------------------------------
// bounded decision procedures

template <GroupBackend G>
struct CancellativeVerdict {
  bool violated = false;
  bool left_violated = false;  // never expected; recorded separately
  std::string witness;
  int radius = 0;
  int path_length = 0;
};

/// Bounded cancellativity test for E* ⋈ G.  By the pseudo-freeness
/// equivalence the verdict must match is_pseudo_free on every fixture;
/// failures show up on the right-cancellation side.
template <GroupBackend G>
CancellativeVerdict<G> is_cancellative(const SelfSimilarAction<G>& a, int radius, int path_length) {
  require_one_vertex(a);
  CancellativeVerdict<G> v;
  v.radius = radius;
  v.path_length = path_length;
  const auto paths = enumerate_paths_upto(a.graph, path_length);
  const auto ball = a.group.ball(radius);
  std::vector<ZSPair<G>> elems;
  for (const auto& w : paths)
    for (const auto& g : ball) elems.push_back(ZSPair<G>{w, g});
  auto pair_key = [&](const ZSPair<G>& p) {
    std::string k = a.group.key(p.g) + "#";
    for (int e : p.word.edges) k += std::to_string(e) + ",";
    return k;
  };
  // right cancellation: x·a = y·a with x != y
  for (const auto& e : elems) {
    std::map<std::string, const ZSPair<G>*> products;
    for (const auto& x : elems) {
      const auto prod = zs_multiply(a, x, e);
      auto [it, fresh] = products.insert({pair_key(prod), &x});
      if (!fresh && !zs_equal(a, *it->second, x)) {
        v.violated = true;
        v.witness = render_zs(a, *it->second) + "·" + render_zs(a, e) + " = " + render_zs(a, x) + "·" +
                    render_zs(a, e) + " = " + render_zs(a, prod);
        return v;
      }
    }
  }
  // left cancellation: a·x = a·y with x != y
  for (const auto& e : elems) {
    std::map<std::string, const ZSPair<G>*> products;
    for (const auto& x : elems) {
      const auto prod = zs_multiply(a, e, x);
      auto [it, fresh] = products.insert({pair_key(prod), &x});
      if (!fresh && !zs_equal(a, *it->second, x)) {
        v.violated = true;
        v.left_violated = true;
        v.witness = render_zs(a, e) + "·" + render_zs(a, *it->second) + " = " + render_zs(a, e) + "·" +
                    render_zs(a, x);
        return v;
      }
    }
  }
  return v;
}

template <GroupBackend G>
struct EStarVerdict {
  bool violated = false;
  std::string witness;  // s and e with se a nonzero idempotent, s not idempotent
  int radius = 0;
  int path_length = 0;
};

/// E*-unitary test: se ∈ E(S)\{0} must force s ∈ E(S).
template <GroupBackend G>
EStarVerdict<G> is_estar_unitary(const SelfSimilarAction<G>& a, int radius, int path_length) {
  EStarVerdict<G> v;
  v.radius = radius;
  v.path_length = path_length;
  const auto triples = enumerate_triples(a, path_length, radius);
  for (const auto& s : triples) {
    if (is_idempotent(a, s)) continue;
    for (const auto& gamma : enumerate_paths_upto(a.graph, path_length)) {
      const auto e = cylinder_idempotent(a, gamma);
      const auto se = multiply(a, s, e);
      if (!se.zero && is_idempotent(a, se)) {
        v.violated = true;
        v.witness = "s=" + render_triple(a, s) + ", e=" + render_triple(a, e) +
                    ", se=" + render_triple(a, se);
        return v;
      }
    }
  }
  return v;
}

}  // namespace selfsim

#endif
