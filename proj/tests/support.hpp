#ifndef SELFSIM_TESTS_SUPPORT_HPP
#define SELFSIM_TESTS_SUPPORT_HPP

// Test-only oracles, independent of the library's evaluation path.  The
// odometer oracle works by plain base-n arithmetic on word values; the
// adding-machine rule is transcribed literally.  Expected values in the
// suites are computed from these, never from the code under test.

#include <vector>

#include "selfsim/fixtures.hpp"

namespace oracle {

// value of a digit word, least significant digit first
inline long long word_value(const std::vector<int>& digits, int n) {
  long long v = 0, pw = 1;
  for (int d : digits) {
    v += pw * d;
    pw *= n;
  }
  return v;
}

inline std::vector<int> value_word(long long v, int n, int len) {
  std::vector<int> out(len);
  for (int i = 0; i < len; ++i) {
    out[i] = static_cast<int>(v % n);
    v /= n;
  }
  return out;
}

// z^m acting on a length-k word: add m to the value mod n^k; the cocycle
// restriction is the carry z^((value+m) div n^k).
struct OdometerStep {
  std::vector<int> image;
  long long carry;
};

inline OdometerStep odometer_act(const std::vector<int>& digits, long long m, int n) {
  long long pw = 1;
  for (size_t i = 0; i < digits.size(); ++i) pw *= n;
  long long v = word_value(digits, n) + m;
  long long carry = v >= 0 ? v / pw : -((-v + pw - 1) / pw);
  long long rem = v - carry * pw;
  return OdometerStep{value_word(rem, n, static_cast<int>(digits.size())), carry};
}

// the adding machine on infinite binary words: first non-1 becomes 1,
// everything before it becomes 0; all-1 prefixes turn into 0s
inline std::vector<int> lambda_rule_prefix(const std::vector<int>& prefix) {
  std::vector<int> out = prefix;
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i] != 1) {
      out[i] = 1;
      for (size_t j = 0; j < i; ++j) out[j] = 0;
      return out;
    }
  }
  for (size_t i = 0; i < out.size(); ++i) out[i] = 0;
  return out;
}

// naive path counter: walks the incidence structure directly
inline long long count_paths(const selfsim::Graph& g, int len) {
  std::vector<long long> at(g.vertex_count(), 1);  // paths of length 0 ending anywhere
  long long total = 0;
  // count words e_1..e_len with d(e_i) = r(e_{i+1})
  std::vector<std::vector<int>> starts(g.vertex_count());
  if (len == 0) return g.vertex_count();
  std::vector<long long> cur(g.vertex_count(), 0);  // cur[v]: paths of current length with d = v
  for (int e = 0; e < g.edge_count(); ++e) cur[g.edge_source[e]] += 1;
  for (int l = 1; l < len; ++l) {
    std::vector<long long> next(g.vertex_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) {
      // extend any path ending (d) at r(e) by e
      next[g.edge_source[e]] += cur[g.edge_range[e]];
    }
    cur = std::move(next);
  }
  for (long long c : cur) total += c;
  (void)at;
  return total;
}

}  // namespace oracle

#endif
