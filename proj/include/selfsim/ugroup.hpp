#ifndef SELFSIM_UGROUP_HPP
#define SELFSIM_UGROUP_HPP

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "selfsim/bs.hpp"
#include "selfsim/isg.hpp"

namespace selfsim {

// ---------------------------------------------------------------------------
// presentations of the universal group U(S_{G,E})

/// A finite presentation; relation words are signed 1-based indices into
/// `generators`.
struct Presentation {
  std::vector<std::string> generators;
  std::vector<std::pair<Word, Word>> relations;

  std::string render_word(const Word& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
      if (i) out += " ";
      out += generators[std::abs(w[i]) - 1];
      if (w[i] < 0) out += "^-1";
    }
    return out;
  }
  std::string render_text() const {
    std::string out = "generators:";
    for (const auto& g : generators) out += " " + g;
    out += "\nrelations:";
    if (relations.empty()) out += " (none)";
    out += "\n";
    for (const auto& [l, r] : relations) out += "  " + render_word(l) + " = " + render_word(r) + "\n";
    return out;
  }
};

/// Generators a_e (one per edge) and u_g (one per group generator);
/// relations u_g a_e = a_{ge} u_{φ(g,e)} plus the backend's own relations.
/// Every emitted relation is re-checked as a nonzero product identity in
/// S over the collapsed graph before it is returned.
template <GroupBackend G>
Presentation emit_presentation(const SelfSimilarAction<G>& a) {
  const auto c = collapse_action(a);
  const int ne = a.graph.edge_count();
  const int ng = a.group.generator_count();
  Presentation p;
  for (int e = 0; e < ne; ++e) p.generators.push_back("a_" + a.graph.edge_names[e]);
  for (int j = 0; j < ng; ++j) {
    const std::string name = a.group.generator_name(j);
    p.generators.push_back((ng == 1 && name == "z") ? "Z" : "u_" + name);
  }
  auto edge_letter = [&](int e) { return e + 1; };
  auto group_letter = [&](int j) { return ne + j + 1; };
  auto map_group_word = [&](const Word& w) {
    Word out;
    for (int l : w) out.push_back(l > 0 ? group_letter(l - 1) : -group_letter(-l - 1));
    return out;
  };
  for (int j = 0; j < ng; ++j) {
    for (int e = 0; e < ne; ++e) {
      Word lhs{group_letter(j), edge_letter(e)};
      Word rhs{edge_letter(a.edge_table[j][e])};
      for (int l : map_group_word(a.cocycle_table[j][e])) rhs.push_back(l);
      p.relations.push_back({lhs, rhs});
    }
  }
  for (const auto& [l, r] : a.group.relations())
    p.relations.push_back({map_group_word(l), map_group_word(r)});

  // verify each relation as an identity of nonzero S-elements
  auto eval_in_s = [&](const Word& w) {
    const int vertex = 0;
    auto acc = make_triple(c, Path::at_vertex(vertex), c.group.identity(), Path::at_vertex(vertex));
    for (int l : w) {
      const int idx = std::abs(l) - 1;
      Triple<G> letter =
          idx < ne ? make_triple(c, path_from_edges(c.graph, {idx}), c.group.identity(),
                                 Path::at_vertex(vertex))
                   : make_triple(c, Path::at_vertex(vertex), c.group.generator(idx - ne),
                                 Path::at_vertex(vertex));
      if (l < 0) letter = star(c, letter);
      acc = multiply(c, acc, letter);
    }
    return acc;
  };
  for (const auto& [l, r] : p.relations) {
    const auto lv = eval_in_s(l);
    const auto rv = eval_in_s(r);
    if (lv.zero || rv.zero || !triple_equal(c, lv, rv))
      throw std::logic_error("emitted relation fails in S: " + p.render_word(l) + " = " +
                             p.render_word(r));
  }
  return p;
}

// ---------------------------------------------------------------------------
// the odometer and its σ into BS(1,n)

/// Recognizes the n-odometer shape of a Z-action on a one-vertex graph:
/// z permutes the edges in one n-cycle, the cocycle is trivial except on
/// the single carry edge where it is z.  `digit_of_edge` recovers the
/// base-n digit of each edge (first letter = least significant).
struct OdometerShape {
  int n = 0;
  std::vector<int> digit_of_edge;
  std::vector<int> edge_of_digit;
};

inline std::optional<OdometerShape> detect_odometer(const SelfSimilarAction<ZGroup>& a) {
  if (a.graph.vertex_count() != 1 || !a.invertible) return std::nullopt;
  const int n = a.graph.edge_count();
  if (n < 2) return std::nullopt;
  int carry = -1;
  for (int e = 0; e < n; ++e) {
    const Word& w = a.cocycle_table[0][e];
    if (w.empty()) continue;
    if (w == Word{1} && carry < 0)
      carry = e;
    else
      return std::nullopt;
  }
  if (carry < 0) return std::nullopt;
  OdometerShape s;
  s.n = n;
  s.digit_of_edge.assign(n, -1);
  s.edge_of_digit.assign(n, -1);
  int e = a.edge_table[0][carry];  // digit 0 = z · (carry edge)
  for (int d = 0; d < n; ++d) {
    if (s.digit_of_edge[e] >= 0) return std::nullopt;  // not an n-cycle
    s.digit_of_edge[e] = d;
    s.edge_of_digit[d] = e;
    e = a.edge_table[0][e];
  }
  if (s.edge_of_digit[n - 1] != carry) return std::nullopt;
  return s;
}

/// The prehomomorphism σ : S_{Z,R_n} \ {0} -> BS(1,n),
/// σ(α, z^m, β) = bs(α) Z^m bs(β)^-1 with bs(edge of digit i) = a_i.
struct SigmaBS {
  using Target = BSGroup;
  using TargetElement = BSGroup::Element;

  BSGroup target;
  OdometerShape shape;

  static SigmaBS make(const SelfSimilarAction<ZGroup>& a) {
    auto s = detect_odometer(a);
    if (!s) throw std::invalid_argument("sigma into BS(1,n) needs the n-odometer fixture");
    return SigmaBS{BSGroup(s->n), *s};
  }

  std::string name() const { return "bs(" + std::to_string(shape.n) + ")"; }

  long long value_of_path(const Path& p) const {  // base-n, LSB first
    long long v = 0, pw = 1;
    for (int e : p.edges) {
      v += pw * shape.digit_of_edge[e];
      pw *= shape.n;
    }
    return v;
  }

  BSGroup::Element bs_of_path(const Path& p) const {
    return target.make(value_of_path(p), 0, p.length());
  }

  BSGroup::Element apply(const SelfSimilarAction<ZGroup>&, const Triple<ZGroup>& s) const {
    if (s.zero) throw std::invalid_argument("sigma is undefined at zero");
    return target.multiply(target.multiply(bs_of_path(s.alpha), target.z_power(s.g)),
                           target.invert(bs_of_path(s.beta)));
  }

  /// All s = (α, z^m, β) with σ(s) = g and |α|, |β| <= path_length; the
  /// exponent m is solved exactly, in length-then-lex order.
  std::vector<Triple<ZGroup>> preimages(const SelfSimilarAction<ZGroup>& a, const BSGroup::Element& g,
                                        int path_length) const {
    std::vector<Triple<ZGroup>> out;
    auto by_size = enumerate_paths_upto(a.graph, path_length);
    std::stable_sort(by_size.begin(), by_size.end());
    const int n = shape.n;
    // total word length first, then lexicographic, for reproducible merges
    std::vector<std::pair<const Path*, const Path*>> pairs;
    for (const auto& alpha : by_size)
      for (const auto& beta : by_size)
        if (alpha.length() - beta.length() == g.k) pairs.push_back({&alpha, &beta});
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
      return x.first->length() + x.second->length() < y.first->length() + y.second->length();
    });
    for (const auto& pair : pairs) {
      const Path& alpha = *pair.first;
      const Path& beta = *pair.second;
      // m n^{|α|+|β|} = q n^{|β|} - n_α n^{|β|} + n_β n^{|α|}
      if (g.exp > beta.length()) continue;
      __int128 rhs = static_cast<__int128>(g.num);
      for (int i = g.exp; i < beta.length(); ++i) rhs *= n;
      __int128 pow_a = 1, pow_b = 1;
      for (int i = 0; i < alpha.length(); ++i) pow_a *= n;
      for (int i = 0; i < beta.length(); ++i) pow_b *= n;
      rhs -= static_cast<__int128>(value_of_path(alpha)) * pow_b;
      rhs += static_cast<__int128>(value_of_path(beta)) * pow_a;
      if (rhs % (pow_a * pow_b) != 0) continue;
      const long long m = BSGroup::checked(rhs / (pow_a * pow_b));
      out.push_back(make_triple(a, alpha, m, beta));
    }
    return out;
  }
};

/// σ for a trivial acting group: (α, 1, β) ↦ Q(α) Q(β)^-1 in the free
/// group on the edge set.
template <GroupBackend G>
struct SigmaFree {
  using Target = FreeGroup;
  using TargetElement = FreeGroup::Element;

  FreeGroup target;

  static SigmaFree make(const SelfSimilarAction<G>& a) {
    return SigmaFree{FreeGroup::on(a.graph.edge_names)};
  }
  std::string name() const { return "free"; }

  FreeGroup::Element apply(const SelfSimilarAction<G>& a, const Triple<G>& s) const {
    if (s.zero) throw std::invalid_argument("sigma is undefined at zero");
    if (!a.group.equal(s.g, a.group.identity()))
      throw std::invalid_argument("free sigma needs a trivial acting group");
    Word w;
    for (int e : s.alpha.edges) w.push_back(e + 1);
    for (auto it = s.beta.edges.rbegin(); it != s.beta.edges.rend(); ++it) w.push_back(-(*it + 1));
    return FreeGroup::reduce(w);
  }

  std::vector<Triple<G>> preimages(const SelfSimilarAction<G>& a, const FreeGroup::Element& g,
                                   int path_length) const {
    std::vector<std::pair<int, Triple<G>>> found;
    auto paths = enumerate_paths_upto(a.graph, path_length);
    std::stable_sort(paths.begin(), paths.end());
    for (const auto& alpha : paths)
      for (const auto& beta : paths) {
        if (source_of(a.graph, alpha) != source_of(a.graph, beta)) continue;
        auto s = make_triple(a, alpha, a.group.identity(), beta);
        if (target.equal(apply(a, s), g)) found.push_back({alpha.length() + beta.length(), s});
      }
    std::stable_sort(found.begin(), found.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Triple<G>> out;
    for (auto& [len, s] : found) out.push_back(std::move(s));
    return out;
  }
};

/// The length prehomomorphism s ↦ z^{|α|-|β|}: valid on every fixture but
/// idempotent pure on none of interest; used to exercise failure paths.
template <GroupBackend G>
struct SigmaLength {
  using Target = ZGroup;
  using TargetElement = ZGroup::Element;

  ZGroup target;
  std::string name() const { return "length"; }
  ZGroup::Element apply(const SelfSimilarAction<G>&, const Triple<G>& s) const {
    if (s.zero) throw std::invalid_argument("sigma is undefined at zero");
    return s.alpha.length() - s.beta.length();
  }
  std::vector<Triple<G>> preimages(const SelfSimilarAction<G>& a, const ZGroup::Element& g,
                                   int path_length) const {
    std::vector<Triple<G>> out;
    for (const auto& s : enumerate_triples(a, path_length, path_length))
      if (s.alpha.length() - s.beta.length() == g) out.push_back(s);
    return out;
  }
};

/// Everything to 1: the maximally collapsing prehomomorphism.
template <GroupBackend G>
struct SigmaTrivial {
  using Target = FiniteGroup;
  using TargetElement = FiniteGroup::Element;

  FiniteGroup target = FiniteGroup::trivial();
  std::string name() const { return "trivial"; }
  FiniteGroup::Element apply(const SelfSimilarAction<G>&, const Triple<G>& s) const {
    if (s.zero) throw std::invalid_argument("sigma is undefined at zero");
    return target.identity();
  }
  std::vector<Triple<G>> preimages(const SelfSimilarAction<G>& a, const FiniteGroup::Element&,
                                   int path_length) const {
    return enumerate_triples(a, path_length, path_length);
  }
};

// ---------------------------------------------------------------------------
// idempotent purity and the prehomomorphism law

struct PurityVerdict {
  bool pure = true;
  std::string witness;
  long long checked = 0;
  int path_length = 0;
  int radius = 0;
};

/// σ(s) = 1 ⟺ s idempotent, over all s with |α|, |β| <= path_length and
/// g in ball(radius).
template <GroupBackend G, typename Sigma>
PurityVerdict check_idempotent_pure(const SelfSimilarAction<G>& a, const Sigma& sigma,
                                    int path_length, int radius) {
  PurityVerdict v;
  v.path_length = path_length;
  v.radius = radius;
  const auto one = sigma.target.identity();
  for (const auto& s : enumerate_triples(a, path_length, radius)) {
    ++v.checked;
    const bool maps_to_one = sigma.target.equal(sigma.apply(a, s), one);
    const bool idem = is_idempotent(a, s);
    if (maps_to_one != idem) {
      v.pure = false;
      v.witness = render_triple(a, s) + (maps_to_one ? " maps to 1 but is not idempotent"
                                                     : " is idempotent but does not map to 1");
      return v;
    }
  }
  return v;
}

struct PrehomVerdict {
  bool holds = true;
  std::string witness;
  long long checked = 0;
};

/// σ(st) = σ(s)σ(t) for every nonzero composable pair from the list.
template <GroupBackend G, typename Sigma>
PrehomVerdict check_prehomomorphism(const SelfSimilarAction<G>& a, const Sigma& sigma,
                                    const std::vector<Triple<G>>& elems) {
  PrehomVerdict v;
  for (const auto& s : elems) {
    const auto ss = sigma.apply(a, s);
    for (const auto& t : elems) {
      const auto st = multiply(a, s, t);
      if (st.zero) continue;
      ++v.checked;
      if (!sigma.target.equal(sigma.apply(a, st), sigma.target.multiply(ss, sigma.apply(a, t)))) {
        v.holds = false;
        v.witness = render_triple(a, s) + " · " + render_triple(a, t);
        return v;
      }
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// free-group words of the form αβ^-1 and the BS(1,2) claim

/// Splits a reduced word as α β^-1 with α, β positive words (returned as
/// 0-based letter lists); nullopt when an inverse letter precedes a
/// positive one.
inline std::optional<std::pair<std::vector<int>, std::vector<int>>> alpha_beta_shape(
    const FreeGroup::Element& w) {
  std::vector<int> alpha, beta;
  size_t i = 0;
  while (i < w.size() && w[i] > 0) alpha.push_back(w[i++] - 1);
  while (i < w.size() && w[i] < 0) beta.push_back(-w[i++] - 1);
  if (i != w.size()) return std::nullopt;
  std::reverse(beta.begin(), beta.end());
  return std::make_pair(alpha, beta);
}

struct ClaimResult {
  bool products_equal = false;
  bool holds = true;  // vacuous when products differ
  std::string detail;
};

/// The Example-odo2 claim for BS(1,2) words in a, b (digits 0, 1): if
/// αβ^-1 = νω^-1 then |α|-|β| = |ν|-|ω|, and the longer side's initial
/// segment of that length is shared.
inline ClaimResult bs_claim_check(const std::vector<int>& alpha, const std::vector<int>& beta,
                                  const std::vector<int>& nu, const std::vector<int>& omega) {
  BSGroup bs(2);
  auto word_elem = [&](const std::vector<int>& w) {
    auto acc = bs.identity();
    for (int d : w) acc = bs.multiply(acc, bs.a(d));
    return acc;
  };
  ClaimResult r;
  const auto lhs = bs.multiply(word_elem(alpha), bs.invert(word_elem(beta)));
  const auto rhs = bs.multiply(word_elem(nu), bs.invert(word_elem(omega)));
  r.products_equal = bs.equal(lhs, rhs);
  if (!r.products_equal) return r;
  const int da = static_cast<int>(alpha.size()) - static_cast<int>(beta.size());
  const int dn = static_cast<int>(nu.size()) - static_cast<int>(omega.size());
  if (da != dn) {
    r.holds = false;
    r.detail = "length differences disagree";
    return r;
  }
  if (da > 0 && !std::equal(alpha.begin(), alpha.begin() + da, nu.begin())) {
    r.holds = false;
    r.detail = "initial segments of alpha and nu disagree";
  }
  if (da < 0 && !std::equal(beta.begin(), beta.begin() - da, omega.begin())) {
    r.holds = false;
    r.detail = "initial segments of beta and omega disagree";
  }
  return r;
}

/// Constructive form of "σ(U^k) = αβ^-1 with |α| = |β|": digit words with
/// n_α - n_β = k, verified in BS coordinates.
inline std::optional<std::pair<std::vector<int>, std::vector<int>>> uk_as_equal_length_pair(
    int n, long long k, int max_length) {
  for (int len = 1; len <= max_length; ++len) {
    long long cap = 1;
    for (int i = 0; i < len; ++i) cap *= n;
    const long long nb = k < 0 ? -k : 0;
    const long long na = nb + k;
    if (na >= cap || nb >= cap) continue;
    auto digits = [&](long long v) {
      std::vector<int> d(len);
      for (int i = 0; i < len; ++i) {
        d[i] = static_cast<int>(v % n);
        v /= n;
      }
      return d;
    };
    return std::make_pair(digits(na), digits(nb));
  }
  return std::nullopt;
}

}  // namespace selfsim

#endif
