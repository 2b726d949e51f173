#ifndef SELFSIM_GROUP_HPP
#define SELFSIM_GROUP_HPP

#include <algorithm>
#include <concepts>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace selfsim {

/// A word in the generators of a backend: signed 1-based letters, +i for
/// generator i-1 and -i for its inverse.
using Word = std::vector<int>;

inline Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = -l;
  return out;
}

inline Word concat_words(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// What the algorithms need from an acting group: exact equality, a finite
/// generating set, word-length balls, and exact factorization of elements
/// into generator words (the inverse of `evaluate`).
template <typename G>
concept GroupBackend = requires(const G& g, const typename G::Element& a,
                                const typename G::Element& b, int radius, const Word& w, int i) {
  { g.identity() } -> std::same_as<typename G::Element>;
  { g.multiply(a, b) } -> std::same_as<typename G::Element>;
  { g.invert(a) } -> std::same_as<typename G::Element>;
  { g.equal(a, b) } -> std::same_as<bool>;
  { g.key(a) } -> std::same_as<std::string>;
  { g.render(a) } -> std::same_as<std::string>;
  { g.generator_count() } -> std::same_as<int>;
  { g.generator(i) } -> std::same_as<typename G::Element>;
  { g.generator_name(i) } -> std::same_as<std::string>;
  { g.ball(radius) } -> std::same_as<std::vector<typename G::Element>>;
  { g.evaluate(w) } -> std::same_as<typename G::Element>;
  { g.factorize(a) } -> std::same_as<Word>;
};

template <typename G>
typename G::Element evaluate_word(const G& g, const Word& w) {
  auto acc = g.identity();
  for (int l : w) {
    auto gen = g.generator(std::abs(l) - 1);
    acc = g.multiply(acc, l > 0 ? gen : g.invert(gen));
  }
  return acc;
}

// Deduplicated ball of word length <= radius, identity first, then by
// length and generation order; the fixed order makes witnesses stable.
template <typename G>
std::vector<typename G::Element> word_ball(const G& g, int radius) {
  std::vector<typename G::Element> out{g.identity()};
  std::set<std::string> seen{g.key(g.identity())};
  size_t level_begin = 0;
  for (int r = 0; r < radius; ++r) {
    const size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i) {
      for (int j = 0; j < g.generator_count(); ++j) {
        for (auto next : {g.multiply(out[i], g.generator(j)),
                          g.multiply(out[i], g.invert(g.generator(j)))}) {
          if (seen.insert(g.key(next)).second) out.push_back(next);
        }
      }
    }
    level_begin = level_end;
  }
  return out;
}

/// The integers written multiplicatively, Z = { z^m | m in Z }.
struct ZGroup {
  using Element = long long;

  Element identity() const { return 0; }
  Element multiply(Element a, Element b) const { return a + b; }
  Element invert(Element a) const { return -a; }
  bool equal(Element a, Element b) const { return a == b; }
  std::string key(Element a) const { return std::to_string(a); }
  std::string render(Element a) const {
    if (a == 0) return "1";
    if (a == 1) return "z";
    return "z^" + std::to_string(a);
  }
  int generator_count() const { return 1; }
  Element generator(int i) const {
    if (i != 0) throw std::invalid_argument("Z has one generator");
    return 1;
  }
  std::string generator_name(int i) const {
    if (i != 0) throw std::invalid_argument("Z has one generator");
    return "z";
  }
  std::vector<Element> ball(int radius) const {
    std::vector<Element> out{0};
    for (int m = 1; m <= radius; ++m) {
      out.push_back(m);
      out.push_back(-m);
    }
    return out;
  }
  Element evaluate(const Word& w) const {
    Element m = 0;
    for (int l : w) m += l > 0 ? 1 : -1;
    return m;
  }
  Word factorize(Element a) const { return Word(static_cast<size_t>(a < 0 ? -a : a), a < 0 ? -1 : 1); }
  std::vector<std::pair<Word, Word>> relations() const { return {}; }
};

/// A finite group given by its multiplication table.
struct FiniteGroup {
  using Element = int;

  std::vector<std::string> element_names;
  std::vector<std::vector<int>> table;  // table[a][b] = a*b
  std::vector<int> generator_ids;
  int identity_id = -1;
  std::vector<int> inverse_ids;
  std::vector<Word> words;  // factorization of each element over the generators

  static FiniteGroup make(std::vector<std::string> names, std::vector<std::vector<int>> mul,
                          const std::vector<std::string>& generator_names) {
    FiniteGroup g;
    g.element_names = std::move(names);
    g.table = std::move(mul);
    const int n = static_cast<int>(g.element_names.size());
    if (static_cast<int>(g.table.size()) != n)
      throw std::invalid_argument("multiplication table has wrong row count");
    for (const auto& row : g.table)
      for (int x : row)
        if (static_cast<int>(row.size()) != n || x < 0 || x >= n)
          throw std::invalid_argument("multiplication table entry out of range");
    for (int e = 0; e < n; ++e) {
      bool ok = true;
      for (int a = 0; a < n; ++a) ok &= g.table[e][a] == a && g.table[a][e] == a;
      if (ok) g.identity_id = e;
    }
    if (g.identity_id < 0) throw std::invalid_argument("table has no identity element");
    g.inverse_ids.assign(n, -1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (g.table[a][b] == g.identity_id && g.table[b][a] == g.identity_id) g.inverse_ids[a] = b;
    for (int a = 0; a < n; ++a)
      if (g.inverse_ids[a] < 0) throw std::invalid_argument("element without inverse: " + g.element_names[a]);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (g.table[g.table[a][b]][c] != g.table[a][g.table[b][c]])
            throw std::invalid_argument("multiplication table is not associative");
    for (const auto& name : generator_names) {
      int id = -1;
      for (int a = 0; a < n; ++a)
        if (g.element_names[a] == name) id = a;
      if (id < 0) throw std::invalid_argument("unknown generator: " + name);
      g.generator_ids.push_back(id);
    }
    // breadth-first words; every element must be reachable
    g.words.assign(n, Word{});
    std::vector<bool> reached(n, false);
    reached[g.identity_id] = true;
    std::queue<int> bfs;
    bfs.push(g.identity_id);
    while (!bfs.empty()) {
      int a = bfs.front();
      bfs.pop();
      for (size_t j = 0; j < g.generator_ids.size(); ++j) {
        const int letters[2] = {static_cast<int>(j) + 1, -(static_cast<int>(j) + 1)};
        const int nexts[2] = {g.table[a][g.generator_ids[j]],
                              g.table[a][g.inverse_ids[g.generator_ids[j]]]};
        for (int t = 0; t < 2; ++t) {
          if (!reached[nexts[t]]) {
            reached[nexts[t]] = true;
            g.words[nexts[t]] = g.words[a];
            g.words[nexts[t]].push_back(letters[t]);
            bfs.push(nexts[t]);
          }
        }
      }
    }
    for (int a = 0; a < n; ++a)
      if (!reached[a])
        throw std::invalid_argument("generators do not generate: " + g.element_names[a] + " unreachable");
    return g;
  }

  static FiniteGroup trivial() { return make({"e"}, {{0}}, {}); }

  // Z/k with generator named g (g^k = 1).
  static FiniteGroup cyclic(int k) {
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back(i == 0 ? "e" : (i == 1 ? "g" : "g" + std::to_string(i)));
    std::vector<std::vector<int>> mul(k, std::vector<int>(k));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) mul[a][b] = (a + b) % k;
    return make(names, mul, k > 1 ? std::vector<std::string>{"g"} : std::vector<std::string>{});
  }

  int size() const { return static_cast<int>(element_names.size()); }
  Element identity() const { return identity_id; }
  Element multiply(Element a, Element b) const { return table[a][b]; }
  Element invert(Element a) const { return inverse_ids[a]; }
  bool equal(Element a, Element b) const { return a == b; }
  std::string key(Element a) const { return element_names[a]; }
  std::string render(Element a) const { return element_names[a]; }
  int generator_count() const { return static_cast<int>(generator_ids.size()); }
  Element generator(int i) const { return generator_ids.at(i); }
  std::string generator_name(int i) const { return element_names[generator_ids.at(i)]; }
  std::vector<Element> ball(int radius) const { return word_ball(*this, radius); }
  Element evaluate(const Word& w) const { return evaluate_word(*this, w); }
  Word factorize(Element a) const { return words[a]; }

  std::vector<std::pair<Word, Word>> relations() const {
    std::vector<std::pair<Word, Word>> rels;
    for (int j = 0; j < generator_count(); ++j) {
      int ord = 1;
      Element p = generator(j);
      while (p != identity_id) {
        p = multiply(p, generator(j));
        ++ord;
      }
      rels.push_back({Word(static_cast<size_t>(ord), j + 1), Word{}});
    }
    for (int i = 0; i < generator_count(); ++i)
      for (int j = 0; j < generator_count(); ++j)
        if (i != j) rels.push_back({Word{i + 1, j + 1}, factorize(multiply(generator(i), generator(j)))});
    return rels;
  }
};

/// The free group on a named alphabet; elements are reduced words.
struct FreeGroup {
  using Element = Word;  // reduced

  std::vector<std::string> names;

  static FreeGroup on(std::vector<std::string> letter_names) { return FreeGroup{std::move(letter_names)}; }

  static Element reduce(const Word& w) {
    Element out;
    for (int l : w) {
      if (!out.empty() && out.back() == -l)
        out.pop_back();
      else
        out.push_back(l);
    }
    return out;
  }

  Element identity() const { return {}; }
  Element multiply(const Element& a, const Element& b) const { return reduce(concat_words(a, b)); }
  Element invert(const Element& a) const { return inverse_word(a); }
  bool equal(const Element& a, const Element& b) const { return a == b; }
  std::string key(const Element& a) const {
    std::string out;
    for (int l : a) out += (l > 0 ? "+" : "-") + std::to_string(std::abs(l));
    return out.empty() ? "1" : out;
  }
  std::string render(const Element& a) const {
    if (a.empty()) return "1";
    std::string out;
    for (size_t i = 0; i < a.size(); ++i) {
      if (i) out += " ";
      out += names[std::abs(a[i]) - 1];
      if (a[i] < 0) out += "^-1";
    }
    return out;
  }
  int generator_count() const { return static_cast<int>(names.size()); }
  Element generator(int i) const { return {i + 1}; }
  std::string generator_name(int i) const { return names.at(i); }
  std::vector<Element> ball(int radius) const { return word_ball(*this, radius); }
  Element evaluate(const Word& w) const { return reduce(w); }
  Word factorize(const Element& a) const { return a; }
  std::vector<std::pair<Word, Word>> relations() const { return {}; }
};

// Spot-checks of the backend contract on ball elements: congruence of
// equality, identity and inverse laws, ball nesting, factorize/evaluate
// round trip.  Returns defect strings, empty when fine.
template <GroupBackend G>
std::vector<std::string> backend_defects(const G& g, int radius) {
  std::vector<std::string> out;
  auto b = g.ball(radius);
  auto prev = g.ball(std::max(0, radius - 1));
  if (g.ball(0).size() != 1 || !g.equal(g.ball(0).front(), g.identity()))
    out.push_back("ball(0) is not {1}");
  for (const auto& p : prev) {
    bool found = false;
    for (const auto& q : b) found |= g.equal(p, q);
    if (!found) out.push_back("ball nesting fails at " + g.render(p));
  }
  for (const auto& a : b) {
    if (!g.equal(g.multiply(a, g.identity()), a) || !g.equal(g.multiply(g.identity(), a), a))
      out.push_back("identity law fails at " + g.render(a));
    if (!g.equal(g.multiply(a, g.invert(a)), g.identity()))
      out.push_back("inverse law fails at " + g.render(a));
    if (!g.equal(g.evaluate(g.factorize(a)), a))
      out.push_back("factorize round trip fails at " + g.render(a));
    for (const auto& c : b)
      if ((g.key(a) == g.key(c)) != g.equal(a, c))
        out.push_back("key does not match equality on " + g.render(a) + ", " + g.render(c));
  }
  return out;
}

}  // namespace selfsim

#endif
