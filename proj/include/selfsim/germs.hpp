#ifndef SELFSIM_GERMS_HPP
#define SELFSIM_GERMS_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "selfsim/paction.hpp"

namespace selfsim {

// ---------------------------------------------------------------------------
// germs of the canonical S-action on Σ_E

/// [s, x] with x ∈ D_{s*s} = βΣ_E.
template <GroupBackend G>
struct SGerm {
  Triple<G> s;
  BoundaryPoint x;
};

template <GroupBackend G>
std::optional<BoundaryPoint> sgerm_range(const SelfSimilarAction<G>& a, const SGerm<G>& p) {
  return apply_map(a, triple_map(a, p.s), p.x);
}

enum class GermEquality { equal, distinct, unknown_at_depth };

template <GroupBackend G>
struct GermEqualityVerdict {
  GermEquality verdict = GermEquality::unknown_at_depth;
  int witness_depth = -1;  // k with s·e_k = t·e_k when equal
};

/// Germ equality [s,x] = [t,y]: x = y and some cylinder idempotent
/// e = (x↾k, 1, x↾k) has se = te.  Equality at k propagates to deeper k,
/// so the bounded search is monotone; distinctness is certified by the
/// exact images of x diverging.
template <GroupBackend G>
GermEqualityVerdict<G> sgerm_equal(const SelfSimilarAction<G>& a, const SGerm<G>& p, const SGerm<G>& q,
                                   int depth) {
  GermEqualityVerdict<G> v;
  if (!(p.x == q.x)) {
    v.verdict = GermEquality::distinct;
    return v;
  }
  for (int k = 0; k <= depth; ++k) {
    const Path pk = path_from_edges(a.graph, p.x.prefix_letters(k), range_of(a.graph, p.x));
    const auto e = cylinder_idempotent(a, pk);
    if (triple_equal(a, multiply(a, p.s, e), multiply(a, q.s, e))) {
      v.verdict = GermEquality::equal;
      v.witness_depth = k;
      return v;
    }
  }
  const auto px = sgerm_range(a, p);
  const auto qx = sgerm_range(a, q);
  if (px && qx && !(*px == *qx)) {
    v.verdict = GermEquality::distinct;
    return v;
  }
  v.verdict = GermEquality::unknown_at_depth;
  return v;
}

/// [s, θ_t(y)]·[t, y] = [st, y]; composable when x is exactly the image
/// of y under θ_t.
template <GroupBackend G>
std::optional<SGerm<G>> sgerm_compose(const SelfSimilarAction<G>& a, const SGerm<G>& p,
                                      const SGerm<G>& q) {
  const auto qy = sgerm_range(a, q);
  if (!qy || !(*qy == p.x)) return std::nullopt;
  const auto st = multiply(a, p.s, q.s);
  if (st.zero || !has_prefix(a.graph, q.x, st.beta)) return std::nullopt;
  return SGerm<G>{st, q.x};
}

template <GroupBackend G>
SGerm<G> sgerm_inverse(const SelfSimilarAction<G>& a, const SGerm<G>& p) {
  return SGerm<G>{star(a, p.s), *sgerm_range(a, p)};
}

// ---------------------------------------------------------------------------
// germs of a group partial action (the transformation groupoid G ⋉ Σ_E)

/// (g, x) with x in the domain of θ_g; composition (g,x)(h,y) = (gh, y)
/// when θ_h(y) = x, inverse (g^-1, θ_g(x)), units (1, x).
template <typename Element>
struct GroupGerm {
  Element g;
  BoundaryPoint x;
};

// ---------------------------------------------------------------------------
// sampling helpers (deterministic given the seed)

template <GroupBackend G>
BoundaryPoint sample_point(const SelfSimilarAction<G>& a, std::mt19937_64& rng, int head_max = 4) {
  const Graph& g = a.graph;
  std::uniform_int_distribution<int> head_len(0, head_max);
  const int hl = head_len(rng);
  // random walk for the head, then close a cycle by walking to a repeat
  std::vector<int> head;
  int v = std::uniform_int_distribution<int>(0, g.vertex_count() - 1)(rng);
  for (int i = 0; i < hl; ++i) {
    auto ext = g.extensions_at(v);
    if (ext.empty()) break;
    int e = ext[std::uniform_int_distribution<size_t>(0, ext.size() - 1)(rng)];
    head.push_back(e);
    v = g.edge_source[e];
  }
  std::vector<int> walk;
  std::vector<int> seen_at(g.vertex_count(), -1);
  seen_at[v] = 0;
  int cur = v;
  while (true) {
    auto ext = g.extensions_at(cur);
    int e = ext[std::uniform_int_distribution<size_t>(0, ext.size() - 1)(rng)];
    walk.push_back(e);
    cur = g.edge_source[e];
    if (seen_at[cur] >= 0) {
      head.insert(head.end(), walk.begin(), walk.begin() + seen_at[cur]);
      return make_point(g, head, std::vector<int>(walk.begin() + seen_at[cur], walk.end()));
    }
    seen_at[cur] = static_cast<int>(walk.size());
  }
}

template <GroupBackend G>
Path sample_path(const SelfSimilarAction<G>& a, std::mt19937_64& rng, int from_vertex, int max_len) {
  // a path α with d(α) = from_vertex, so that α·tail stays composable
  const int len = std::uniform_int_distribution<int>(0, max_len)(rng);
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto level = enumerate_paths(a.graph, len);
    std::vector<Path> fit;
    for (auto& p : level)
      if (source_of(a.graph, p) == from_vertex) fit.push_back(p);
    if (!fit.empty()) return fit[std::uniform_int_distribution<size_t>(0, fit.size() - 1)(rng)];
  }
  return Path::at_vertex(from_vertex);
}

// ---------------------------------------------------------------------------
// the germ-level isomorphism checks

struct IsoCheckReport {
  bool ok = true;
  std::string failure;
  long long composition_checks = 0;
  long long inverse_checks = 0;
  long long unit_checks = 0;
  long long injectivity_checks = 0;
  long long associativity_checks = 0;
};

/// [s, ξ] ↦ (σ(s), ξ) from the germ groupoid of the S-action to
/// U(S) ⋉ Σ_E: samples composable germ pairs and checks that the map
/// respects composition, inverses and units, that groupoid associativity
/// holds, and that σ-equal germs over the same point are equal germs.
template <GroupBackend G, typename Sigma>
IsoCheckReport germ_iso_check(const SelfSimilarAction<G>& a, const Sigma& sigma, int samples,
                              int depth, int path_max, unsigned long long seed) {
  IsoCheckReport rep;
  std::mt19937_64 rng(seed);
  const auto ball = a.group.ball(path_max);
  auto sample_triple_at = [&](const BoundaryPoint& x) {
    // some s with x ∈ D_{s*s}: β a prefix of x, any α with d(α) = g d(β)
    const int bl = std::uniform_int_distribution<int>(0, path_max)(rng);
    const Path beta = path_from_edges(a.graph, x.prefix_letters(bl), range_of(a.graph, x));
    for (int attempt = 0; attempt < 128; ++attempt) {
      const auto& g = ball[std::uniform_int_distribution<size_t>(0, ball.size() - 1)(rng)];
      const Path alpha = sample_path(a, rng, act_vertex(a, g, source_of(a.graph, beta)), path_max);
      if (source_of(a.graph, alpha) == act_vertex(a, g, source_of(a.graph, beta)))
        return make_triple(a, alpha, g, beta);
    }
    return cylinder_idempotent(a, beta);
  };
  auto fail = [&](const std::string& what) {
    rep.ok = false;
    rep.failure = what;
  };
  for (int i = 0; i < samples && rep.ok; ++i) {
    const auto y = sample_point(a, rng);
    const auto t = sample_triple_at(y);
    SGerm<G> q{t, y};
    const auto x = sgerm_range(a, q);
    if (!x) {
      fail("sampled germ has no computable range point");
      break;
    }
    const auto s = sample_triple_at(*x);
    SGerm<G> p{s, *x};
    const auto pq = sgerm_compose(a, p, q);
    if (!pq) {
      fail("sampled pair failed to compose");
      break;
    }
    // composition respected: σ(st) = σ(s)σ(t) over the same base point
    ++rep.composition_checks;
    const auto lhs = sigma.apply(a, pq->s);
    const auto rhs = sigma.target.multiply(sigma.apply(a, s), sigma.apply(a, t));
    if (!sigma.target.equal(lhs, rhs) || !(pq->x == y)) {
      fail("composition not respected at " + render_triple(a, s) + " · " + render_triple(a, t));
      break;
    }
    // inverses: [t,y]^-1 ↦ (σ(t)^-1, θ_t(y))
    ++rep.inverse_checks;
    const auto tinv = sgerm_inverse(a, q);
    if (!sigma.target.equal(sigma.apply(a, tinv.s), sigma.target.invert(sigma.apply(a, t))) ||
        !(tinv.x == *x)) {
      fail("inverse not respected at " + render_triple(a, t));
      break;
    }
    // units: [t*t, y] ↦ (1, y)
    ++rep.unit_checks;
    const auto unit = multiply(a, star(a, t), t);
    if (!sigma.target.equal(sigma.apply(a, unit), sigma.target.identity())) {
      fail("unit germ does not map to a unit at " + render_triple(a, t));
      break;
    }
    // associativity on a composable triple (r p) q vs r (p q)
    const auto z = sgerm_range(a, p);
    if (z) {
      const auto r = sample_triple_at(*z);
      SGerm<G> pr{r, *z};
      const auto rp = sgerm_compose(a, pr, p);
      if (rp) {
        ++rep.associativity_checks;
        const auto lhs2 = sgerm_compose(a, *rp, q);
        const auto rhs_inner = sgerm_compose(a, p, q);
        const auto rhs2 = rhs_inner ? sgerm_compose(a, pr, *rhs_inner) : std::nullopt;
        if (!lhs2 || !rhs2 ||
            sgerm_equal(a, *lhs2, *rhs2, depth).verdict != GermEquality::equal) {
          fail("associativity failed near " + render_triple(a, r));
          break;
        }
      }
    }
    // injectivity sample: s·e is σ-equal to s and must be the same germ
    ++rep.injectivity_checks;
    const int k = std::uniform_int_distribution<int>(0, depth)(rng);
    const Path xk = path_from_edges(a.graph, x->prefix_letters(k), range_of(a.graph, *x));
    const auto se = multiply(a, s, cylinder_idempotent(a, xk));
    if (!se.zero) {
      SGerm<G> pe{se, *x};
      if (!sigma.target.equal(sigma.apply(a, se), sigma.apply(a, s)) ||
          sgerm_equal(a, p, pe, depth).verdict != GermEquality::equal) {
        fail("σ-equal germs over the same point are not equal at " + render_triple(a, s));
        break;
      }
    }
  }
  return rep;
}

/// Hunt for an injectivity failure of [s,ξ] ↦ (σ(s),ξ): σ-equal pairs over
/// a shared point whose germs are certifiably distinct.  Used as the
/// negative control with a collapsing σ.
template <GroupBackend G, typename Sigma>
std::optional<std::string> find_injectivity_failure(const SelfSimilarAction<G>& a, const Sigma& sigma,
                                                    int path_max, int depth) {
  const auto triples = enumerate_triples(a, path_max, path_max);
  for (size_t i = 0; i < triples.size(); ++i)
    for (size_t j = i + 1; j < triples.size(); ++j) {
      const auto& s = triples[i];
      const auto& t = triples[j];
      if (!sigma.target.equal(sigma.apply(a, s), sigma.apply(a, t))) continue;
      if (!(source_of(a.graph, s.beta) == source_of(a.graph, t.beta)) ||
          !is_prefix(a.graph, s.beta, t.beta) )
        continue;
      const auto x = periodic_completion(a.graph, t.beta);
      SGerm<G> p{s, x}, q{t, x};
      if (sgerm_equal(a, p, q, depth).verdict == GermEquality::distinct)
        return render_triple(a, s) + " and " + render_triple(a, t) + " at " +
               render_point(a.graph, x);
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Φ : F_{E^1} ⋉ Σ_E → U(S) ⋉ Σ_E  (Quigg-Raeburn to induced action)

/// Samples germs of the Quigg-Raeburn action, maps them through
/// Φ(αβ^-1, βx) = (φ(αβ^-1), βx), and checks homomorphism, injectivity
/// (φ-equal shaped words with intersecting domains coincide in F) and
/// surjectivity (every induced-action germ within the bound is hit).
template <GroupBackend G, typename Sigma>
IsoCheckReport phi_iso_check(const SelfSimilarAction<G>& a, const Sigma& sigma, int bound, int depth,
                             int samples, unsigned long long seed) {
  require_one_vertex(a);
  IsoCheckReport rep;
  std::mt19937_64 rng(seed);
  FreeGroup free_grp = FreeGroup::on(a.graph.edge_names);
  auto phi = [&](const FreeGroup::Element& w) {
    auto acc = sigma.target.identity();
    for (int l : w) {
      const int e = std::abs(l) - 1;
      auto se = sigma.apply(
          a, make_triple(a, path_from_edges(a.graph, {e}), a.group.identity(), Path::at_vertex(0)));
      acc = sigma.target.multiply(acc, l > 0 ? se : sigma.target.invert(se));
    }
    return acc;
  };
  auto rand_word = [&](int len) {
    std::vector<int> w;
    for (int i = 0; i < len; ++i)
      w.push_back(std::uniform_int_distribution<int>(0, a.graph.edge_count() - 1)(rng));
    return w;
  };
  auto fail = [&](const std::string& what) {
    rep.ok = false;
    rep.failure = what;
  };
  for (int i = 0; i < samples && rep.ok; ++i) {
    // a composable QR germ pair: (w1, x)·(w2, y) with x = θ_{w2}(y)
    const auto alpha2 = rand_word(std::uniform_int_distribution<int>(0, bound / 2)(rng));
    const auto beta2 = rand_word(std::uniform_int_distribution<int>(0, bound / 2)(rng));
    Word w2;
    for (int e : alpha2) w2.push_back(e + 1);
    for (auto it = beta2.rbegin(); it != beta2.rend(); ++it) w2.push_back(-(*it + 1));
    const auto w2r = FreeGroup::reduce(w2);
    const auto qr2 = quigg_raeburn(a, w2r);
    if (qr2.pieces.empty()) continue;
    const auto y = prepend(a.graph, qr2.pieces[0].in, sample_point(a, rng, 2));
    const auto x = apply_map(a, qr2, y);
    if (!x) continue;
    const auto alpha1 = rand_word(std::uniform_int_distribution<int>(0, bound / 2)(rng));
    Word w1;
    for (int e : alpha1) w1.push_back(e + 1);
    for (int k = std::uniform_int_distribution<int>(0, 2)(rng); k > 0; --k)
      w1.push_back(-(x->letter(k - 1) + 1));
    std::reverse(w1.begin() + alpha1.size(), w1.end());
    const auto w1r = FreeGroup::reduce(w1);
    const auto qr1 = quigg_raeburn(a, w1r);
    if (qr1.pieces.empty() || !has_prefix(a.graph, *x, qr1.pieces[0].in)) continue;
    // homomorphism: Φ(w1 w2, y) = Φ(w1, x) Φ(w2, y)
    ++rep.composition_checks;
    const auto prod = free_grp.multiply(w1r, w2r);
    if (!sigma.target.equal(phi(prod), sigma.target.multiply(phi(w1r), phi(w2r)))) {
      fail("phi is not multiplicative on " + free_grp.render(w1r) + " · " + free_grp.render(w2r));
      break;
    }
    // inverse germ maps to the inverse
    ++rep.inverse_checks;
    if (!sigma.target.equal(phi(free_grp.invert(w2r)), sigma.target.invert(phi(w2r)))) {
      fail("phi does not respect inverses on " + free_grp.render(w2r));
      break;
    }
  }
  if (!rep.ok) return rep;
  // injectivity: φ-equal shaped words with intersecting in-cylinders are
  // equal elements of the free group
  std::vector<std::pair<FreeGroup::Element, std::string>> shaped;
  for (int la = 0; la + 0 <= bound; ++la)
    for (int lb = 0; la + lb <= bound; ++lb)
      for (const auto& alpha : enumerate_paths(a.graph, la))
        for (const auto& beta : enumerate_paths(a.graph, lb)) {
          if (!alpha.empty() && !beta.empty() && alpha.edges.back() == beta.edges.back()) continue;
          Word w;
          for (int e : alpha.edges) w.push_back(e + 1);
          for (auto it = beta.edges.rbegin(); it != beta.edges.rend(); ++it) w.push_back(-(*it + 1));
          shaped.push_back({FreeGroup::reduce(w), sigma.target.key(phi(FreeGroup::reduce(w)))});
        }
  for (size_t i = 0; i < shaped.size(); ++i)
    for (size_t j = i + 1; j < shaped.size(); ++j) {
      if (shaped[i].second != shaped[j].second) continue;
      ++rep.injectivity_checks;
      const auto si = alpha_beta_shape(shaped[i].first);
      const auto sj = alpha_beta_shape(shaped[j].first);
      if (!si || !sj) continue;
      // domains βΣ intersect iff one β extends the other
      const auto& bi = si->second;
      const auto& bj = sj->second;
      const bool meet = std::equal(bi.begin(), bi.begin() + std::min(bi.size(), bj.size()), bj.begin());
      if (meet && !free_grp.equal(shaped[i].first, shaped[j].first)) {
        rep.ok = false;
        rep.failure = "phi-equal words with intersecting domains differ: " +
                      free_grp.render(shaped[i].first) + " vs " + free_grp.render(shaped[j].first);
        return rep;
      }
    }
  // surjectivity: induced-action germs are hit (their pieces come from
  // explicit preimage words, checked against the exhausting witnesses)
  for (const auto& g : a.group.ball(2)) {
    const auto w = exhausting_surjectivity_witness(a, g, bound);
    if (!w || !w->idempotent_identity_ok) continue;
    Word uw;
    for (int e : w->g_alpha.edges) uw.push_back(e + 1);
    for (auto it = w->alpha.edges.rbegin(); it != w->alpha.edges.rend(); ++it) uw.push_back(-(*it + 1));
    const auto u_g =
        sigma.apply(a, make_triple(a, Path::at_vertex(0), g, Path::at_vertex(0)));
    ++rep.unit_checks;
    if (!sigma.target.equal(phi(FreeGroup::reduce(uw)), u_g)) {
      rep.ok = false;
      rep.failure = "sigma(U_g) is not phi of the exhausting witness word for g = " + a.group.render(g);
      return rep;
    }
    const auto ind = induced_action(a, sigma, u_g, bound, depth);
    if (ind.conflict) {
      rep.ok = false;
      rep.failure = "induced action conflict at " + ind.conflict->at_prefix;
      return rep;
    }
    for (const auto& piece : ind.map.pieces) {
      const auto x = periodic_completion(a.graph, piece.in);
      bool covered = false;
      for (const auto& [pa, pb] : ind.preimage_words) {
        const Path beta = pb.empty() ? Path::at_vertex(0) : path_from_edges(a.graph, pb);
        covered |= has_prefix(a.graph, x, beta);
      }
      if (!covered) {
        rep.ok = false;
        rep.failure = "induced germ without a phi-preimage over " + render_path(a.graph, piece.in);
        return rep;
      }
    }
  }
  return rep;
}

/// Slice property: on every domain cylinder of θ_h, the depth-k germ set
/// {(h, x)} has injective range and source.
template <GroupBackend G>
bool slice_property(const SelfSimilarAction<G>& a, const PartialMap<G>& theta, int depth) {
  return injective_at_depth(a, theta, depth);
}

}  // namespace selfsim

#endif
