#include <catch2/catch_amalgamated.hpp>

#include "selfsim/graph.hpp"
#include "support.hpp"

using namespace selfsim;

namespace {
Graph r2() {
  return Graph::make({"v"}, {{"0", "v", "v"}, {"1", "v", "v"}});
}
Graph two_vertex_chain() {
  // one edge v -> w only: both endpoints defective when boundary-ready
  return Graph::make({"v", "w"}, {{"e", "v", "w"}});
}
Graph c2() {
  return Graph::make({"u", "w"}, {{"p", "u", "w"}, {"q", "w", "u"}});
}
}  // namespace

TEST_CASE("validate flags sources and sinks only when asked") {
  CHECK(validate(r2(), true).empty());  // loops are neither source nor sink

  Graph lonely = Graph::make({"v"}, {});
  CHECK(validate(lonely, false).empty());
  auto defects = validate(lonely, true);
  REQUIRE(defects.size() == 1);
  CHECK(defects[0] == "vertex v is source and sink");

  auto chain = validate(two_vertex_chain(), true);
  CHECK(chain.size() == 2);  // one vertex is a source, the other a sink
}

TEST_CASE("concatenation laws") {
  Graph g = r2();
  Path a = path_from_edges(g, {0, 1});
  Path v = Path::at_vertex(0);

  SECTION("identity laws r(α)α = α = α d(α)") {
    CHECK(*concat(g, v, a) == a);
    CHECK(*concat(g, a, v) == a);
  }
  SECTION("single vertex composes freely: 01 ∘ 10 = 0110") {
    Path b = path_from_edges(g, {1, 0});
    Path ab = *concat(g, a, b);
    CHECK(ab.edges == std::vector<int>{0, 1, 1, 0});
  }
  SECTION("range mismatch is undefined, not zero") {
    Graph h = Graph::make({"v", "w"}, {{"e", "w", "v"}, {"f", "w", "v"}});
    // e and f both run v -> w (range w, source v): d(e) = v != w = r(f)
    Path pe = path_from_edges(h, {0});
    Path pf = path_from_edges(h, {1});
    CHECK(!concat(h, pe, pf).has_value());
  }
  SECTION("associativity whenever both groupings are defined") {
    Graph h = c2();
    auto paths = enumerate_paths_upto(h, 3);
    for (const auto& x : paths)
      for (const auto& y : paths)
        for (const auto& z : paths) {
          auto xy = concat(h, x, y);
          auto yz = concat(h, y, z);
          if (!xy || !yz) continue;
          auto l = concat(h, *xy, z);
          auto r = concat(h, x, *yz);
          REQUIRE(l.has_value());
          REQUIRE(r.has_value());
          CHECK(*l == *r);
        }
  }
}

TEST_CASE("collapse is idempotent and keeps the edge set") {
  Graph g = r2();
  Graph cg = collapse(g);
  CHECK(cg.vertex_count() == 1);
  CHECK(cg.edge_names == g.edge_names);

  Graph h = Graph::make({"a", "b", "c"},
                        {{"e1", "a", "b"},
                         {"e2", "b", "c"},
                         {"e3", "c", "a"},
                         {"e4", "a", "a"},
                         {"e5", "b", "b"}});
  Graph ch = collapse(h);
  CHECK(ch.vertex_count() == 1);
  CHECK(ch.edge_count() == 5);
  for (int e = 0; e < ch.edge_count(); ++e) {
    CHECK(ch.edge_range[e] == 0);
    CHECK(ch.edge_source[e] == 0);
  }
  Graph cch = collapse(ch);
  CHECK(cch.vertex_names == ch.vertex_names);
  CHECK(cch.edge_names == ch.edge_names);
}

TEST_CASE("q_map collapses exactly the vertices") {
  Graph g = c2();
  Path vertex = Path::at_vertex(1);
  CHECK(q_map(vertex).length() == 0);
  CHECK(q_map(vertex).anchor == 0);  // the unique empty word of the collapse

  auto paths = enumerate_paths_upto(g, 4);
  for (const auto& p : paths) {
    CHECK(q_map(p).length() == p.length());  // length-preserving
    if (p.length() >= 1) CHECK(q_map(p).edges == p.edges);
  }
}

TEST_CASE("path enumeration matches the incidence count") {
  Graph g2 = r2();
  for (int k = 0; k <= 6; ++k) {
    CHECK(static_cast<long long>(enumerate_paths(g2, k).size()) == oracle::count_paths(g2, k));
  }
  // for R_n the count at length k is n^k
  CHECK(enumerate_paths(g2, 5).size() == 32);

  Graph gc = c2();
  for (int k = 0; k <= 6; ++k)
    CHECK(static_cast<long long>(enumerate_paths(gc, k).size()) == oracle::count_paths(gc, k));
  CHECK(enumerate_paths(gc, 3).size() == 2);  // one path per starting vertex
}

TEST_CASE("prefix bookkeeping") {
  Graph g = r2();
  Path p = path_from_edges(g, {0, 1, 1});
  CHECK(is_prefix(g, prefix(g, p, 0), p));
  CHECK(is_prefix(g, prefix(g, p, 2), p));
  CHECK(is_prefix(g, p, p));
  CHECK(*concat(g, prefix(g, p, 2), suffix_after(g, p, 2)) == p);
  CHECK(!is_prefix(g, path_from_edges(g, {1}), p));
}

TEST_CASE("boundary points normalize to exact equality") {
  Graph g = r2();
  auto x = make_point(g, {0, 1}, {1});
  auto y = make_point(g, {0}, {1, 1});  // same point, different presentation
  CHECK(x == y);
  auto z = make_point(g, {}, {0, 1, 0, 1});
  CHECK(z == make_point(g, {}, {0, 1}));
  CHECK(z != x);

  CHECK(x.prefix_letters(5) == std::vector<int>{0, 1, 1, 1, 1});
  auto tail = strip_prefix(g, x, path_from_edges(g, {0, 1}));
  CHECK(tail == make_point(g, {}, {1}));
  CHECK(prepend(g, path_from_edges(g, {0, 1}), tail) == x);

  Graph h = c2();
  auto w = periodic_completion(h, Path::at_vertex(0));
  CHECK(is_valid_point(h, w));
  CHECK(range_of(h, w) == 0);
}
