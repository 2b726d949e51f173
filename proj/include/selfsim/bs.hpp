#ifndef SELFSIM_BS_HPP
#define SELFSIM_BS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/group.hpp"

namespace selfsim {

/// Baumslag-Solitar group BS(1,n) realized as Z[1/n] ⋊ Z with
///   (q, k)(q', k') = (q + n^k q', k + k').
/// An element stores q = num / n^exp in lowest terms plus the Z-part k.
/// In these coordinates a_i = (i, 1) and Z = (1, 0); the defining relation
/// Z = a_0^-1 Z^n a_0 and the odometer relations Za_i = a_{i+1},
/// Za_{n-1} = a_0 Z all hold, which the test suite certifies.
struct BSGroup {
  struct Element {
    long long num = 0;
    int exp = 0;  // q = num / n^exp, exp >= 0 minimal
    int k = 0;

    friend bool operator==(const Element& a, const Element& b) {
      return a.num == b.num && a.exp == b.exp && a.k == b.k;
    }
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
  };

  int n = 2;

  explicit BSGroup(int n_) : n(n_) {
    if (n < 2) throw std::invalid_argument("BS(1,n) needs n >= 2");
  }

  static long long checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("BS(1,n) coordinate overflow");
    return static_cast<long long>(v);
  }

  Element canon(__int128 num, int exp) const {
    while (exp < 0) {
      num *= n;
      ++exp;
    }
    while (num != 0 && exp > 0 && num % n == 0) {
      num /= n;
      --exp;
    }
    if (num == 0) exp = 0;
    return Element{checked(num), exp, 0};
  }

  Element make(long long num, int exp, int k) const {
    Element e = canon(num, exp);
    e.k = k;
    return e;
  }

  Element identity() const { return Element{}; }

  Element multiply(const Element& a, const Element& b) const {
    // q = a.q + n^{a.k} b.q as a single fraction
    __int128 num_b = b.num;
    int exp_b = b.exp - a.k;
    while (exp_b < 0) {
      num_b *= n;
      ++exp_b;
    }
    int exp = std::max(a.exp, exp_b);
    __int128 num = static_cast<__int128>(a.num) * ipow(exp - a.exp) + num_b * ipow(exp - exp_b);
    Element e = canon(num, exp);
    e.k = a.k + b.k;
    return e;
  }

  Element invert(const Element& a) const {
    Element e = canon(-static_cast<__int128>(a.num), a.exp + a.k);
    e.k = -a.k;
    return e;
  }

  bool equal(const Element& a, const Element& b) const { return a == b; }

  std::string key(const Element& a) const {
    return std::to_string(a.num) + "/" + std::to_string(a.exp) + "|" + std::to_string(a.k);
  }
  std::string render(const Element& a) const {
    std::string q = std::to_string(a.num);
    if (a.exp > 0) q += "/" + std::to_string(n) + "^" + std::to_string(a.exp);
    return "(" + q + ", " + std::to_string(a.k) + ")";
  }

  // generators a_0, ..., a_{n-1}, Z
  int generator_count() const { return n + 1; }
  Element generator(int i) const {
    if (i < 0 || i > n) throw std::invalid_argument("BS generator index out of range");
    if (i == n) return Element{1, 0, 0};  // Z
    return Element{i, 0, 1};              // a_i
  }
  std::string generator_name(int i) const {
    if (i == n) return "Z";
    return "a" + std::to_string(i);
  }

  Element a(int i) const { return generator(i); }
  Element z() const { return generator(n); }
  Element z_power(long long m) const { return make(m, 0, 0); }

  std::vector<Element> ball(int radius) const { return word_ball(*this, radius); }
  Element evaluate(const Word& w) const { return evaluate_word(*this, w); }

  // (q, k) = a_0^-exp · Z^num · a_0^{exp+k}
  Word factorize(const Element& e) const {
    Word w;
    for (int i = 0; i < e.exp; ++i) w.push_back(-1);
    for (long long i = 0; i < (e.num < 0 ? -e.num : e.num); ++i) w.push_back(e.num < 0 ? -(n + 1) : (n + 1));
    const int tail = e.exp + e.k;
    for (int i = 0; i < (tail < 0 ? -tail : tail); ++i) w.push_back(tail < 0 ? -1 : 1);
    return w;
  }

  std::vector<std::pair<Word, Word>> relations() const {
    // Z = a_0^-1 Z^n a_0
    Word rhs{-1};
    for (int i = 0; i < n; ++i) rhs.push_back(n + 1);
    rhs.push_back(1);
    return {{Word{n + 1}, rhs}};
  }

 private:
  __int128 ipow(int e) const {
    __int128 p = 1;
    for (int i = 0; i < e; ++i) p *= n;
    return p;
  }
};

}  // namespace selfsim

#endif
