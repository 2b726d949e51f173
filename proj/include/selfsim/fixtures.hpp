#ifndef SELFSIM_FIXTURES_HPP
#define SELFSIM_FIXTURES_HPP

#include "selfsim/action.hpp"

namespace selfsim {
namespace fixtures {

/// The n-odometer (Z, R_n, φ): one vertex, loops 0..n-1, z adds one with
/// carry: z·i = i+1 and φ(z,i) = 1 for i < n-1, z·(n-1) = 0 with
/// φ(z, n-1) = z.
inline SelfSimilarAction<ZGroup> odometer(int n) {
  std::vector<std::tuple<std::string, std::string, std::string>> edges;
  for (int i = 0; i < n; ++i) edges.push_back({std::to_string(i), "v", "v"});
  Graph g = Graph::make({"v"}, edges);
  std::vector<int> edge_row(n);
  std::vector<Word> coc_row(n);
  for (int i = 0; i < n; ++i) {
    edge_row[i] = (i + 1) % n;
    coc_row[i] = i == n - 1 ? Word{1} : Word{};
  }
  return SelfSimilarAction<ZGroup>::make(g, ZGroup{}, {{0}}, {edge_row}, {coc_row});
}

/// Z/2 acting trivially on R_2 with trivial cocycle: the canonical
/// non-pseudo-free fixture.
inline SelfSimilarAction<FiniteGroup> z2_trivial_r2() {
  Graph g = Graph::make({"v"}, {{"0", "v", "v"}, {"1", "v", "v"}});
  return SelfSimilarAction<FiniteGroup>::make(g, FiniteGroup::cyclic(2), {{0}}, {{0, 1}},
                                              {{Word{}, Word{}}});
}

/// Z/2 swapping the two vertices and the two edges of the 2-cycle graph;
/// the cocycle is forced to be g itself.  Pseudo-free and boundary-ready.
inline SelfSimilarAction<FiniteGroup> swap_c2() {
  Graph g = Graph::make({"u", "w"}, {{"p", "u", "w"}, {"q", "w", "u"}});
  return SelfSimilarAction<FiniteGroup>::make(g, FiniteGroup::cyclic(2), {{1, 0}}, {{1, 0}},
                                              {{Word{1}, Word{1}}});
}

/// The trivial group on R_n: S_{1,R_n} is the Cuntz inverse semigroup,
/// the home of the Quigg-Raeburn action.
inline SelfSimilarAction<FiniteGroup> trivial_group_rn(int n) {
  std::vector<std::tuple<std::string, std::string, std::string>> edges;
  for (int i = 0; i < n; ++i) edges.push_back({std::to_string(i), "v", "v"});
  Graph g = Graph::make({"v"}, edges);
  return SelfSimilarAction<FiniteGroup>::make(g, FiniteGroup::trivial(), {}, {}, {});
}

/// Z acting trivially on R_2 with φ(z, e) = z everywhere: pseudo-free but
/// not exhausting (φ(z, α) = z for every α).
inline SelfSimilarAction<ZGroup> z_diagonal_r2() {
  Graph g = Graph::make({"v"}, {{"0", "v", "v"}, {"1", "v", "v"}});
  return SelfSimilarAction<ZGroup>::make(g, ZGroup{}, {{0}}, {{0, 1}}, {{Word{1}, Word{1}}});
}

}  // namespace fixtures
}  // namespace selfsim

#endif
