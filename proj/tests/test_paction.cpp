#include <catch2/catch_amalgamated.hpp>

#include "selfsim/paction.hpp"
#include "support.hpp"

using namespace selfsim;
using fixtures::odometer;

namespace {
Path word(const Graph& g, std::vector<int> edges) {
  return edges.empty() ? Path::at_vertex(0) : path_from_edges(g, std::move(edges));
}
}  // namespace

TEST_CASE("clopen algebra") {
  auto a = odometer(2);
  const Graph& g = a.graph;
  auto cyl = [&](std::vector<int> e) { return clopen_of(g, {word(g, std::move(e))}); };

  SECTION("sibling completion: 0Σ ∪ 1Σ = Σ") {
    CHECK(clopen_union(g, cyl({0}), cyl({1})) == clopen_full(g));
    CHECK(clopen_union(g, cyl({0, 0}), clopen_union(g, cyl({0, 1}), cyl({1}))) == clopen_full(g));
  }
  SECTION("prefix order: 01Σ ∩ 0Σ = 01Σ") {
    CHECK(clopen_intersect(g, cyl({0, 1}), cyl({0})) == cyl({0, 1}));
    CHECK(clopen_intersect(g, cyl({0}), cyl({1})).is_empty());
  }
  SECTION("complement and Boolean laws") {
    CHECK(clopen_complement(g, clopen_full(g)).is_empty());
    CHECK(clopen_complement(g, clopen_empty()) == clopen_full(g));
    auto b = cyl({1, 0});
    CHECK(clopen_union(g, b, clopen_complement(g, b)) == clopen_full(g));
    CHECK(clopen_intersect(g, b, clopen_complement(g, b)).is_empty());
    // de Morgan on a small family
    auto x = cyl({0}), y = cyl({1, 1});
    CHECK(clopen_complement(g, clopen_union(g, x, y)) ==
          clopen_intersect(g, clopen_complement(g, x), clopen_complement(g, y)));
  }
  SECTION("canonical form on the 2-vertex graph") {
    auto c = fixtures::swap_c2();
    auto full = clopen_full(c.graph);
    CHECK(full.prefixes.size() == 2);  // one empty path per vertex
    auto pq = clopen_of(c.graph, {word(c.graph, {0}), word(c.graph, {1})});
    CHECK(pq == full);  // each vertex has a single extension
  }
}

TEST_CASE("partial map composition follows the semigroup") {
  auto a = odometer(2);
  SECTION("compose with the identity") {
    auto f = triple_map(a, make_triple(a, word(a.graph, {0}), 1LL, word(a.graph, {1, 1})));
    auto id = identity_map(a, clopen_full(a.graph));
    CHECK(map_equal_structural(a, compose(a, f, id), f));
    CHECK(map_equal_structural(a, compose(a, id, f), f));
  }
  SECTION("map(s) ∘ map(t) = map(st) pointwise at depth 6") {
    const auto triples = enumerate_triples(a, 2, 2);
    for (const auto& s : triples)
      for (const auto& t : triples) {
        const auto st = multiply(a, s, t);
        const auto comp = compose(a, triple_map(a, s), triple_map(a, t));
        if (st.zero) {
          CHECK(comp.pieces.empty());
        } else {
          REQUIRE(maps_agree_pointwise(a, comp, triple_map(a, st), 6));
        }
      }
  }
  SECTION("disjoint domain and range compose to the empty map") {
    auto f = triple_map(a, make_triple(a, word(a.graph, {0}), 0LL, word(a.graph, {0})));
    auto h = triple_map(a, make_triple(a, word(a.graph, {1}), 0LL, word(a.graph, {1})));
    CHECK(compose(a, f, h).pieces.empty());
  }
  SECTION("inverse swaps domain and codomain") {
    auto s = make_triple(a, word(a.graph, {0, 1}), 1LL, word(a.graph, {1}));
    auto f = triple_map(a, s);
    auto finv = inverse_map(a, f);
    CHECK(map_domain(a, finv) == map_codomain(a, f));
    CHECK(maps_agree_pointwise(a, compose(a, finv, f), identity_map(a, map_domain(a, f)), 8));
  }
}

TEST_CASE("partial maps are injective at every depth") {
  auto a = odometer(2);
  for (const auto& s : enumerate_triples(a, 2, 2)) {
    CHECK(injective_at_depth(a, triple_map(a, s), 4));
  }
}

TEST_CASE("universal group action on the odometer") {
  auto a = odometer(2);
  auto sigma = SigmaBS::make(a);
  const auto& bs = sigma.target;

  SECTION("g = σ(U) = ba^-1: domain Σ and the map is λ") {
    auto res = universal_action(a, sigma, bs.make(1, 0, 0), 4, 8);
    REQUIRE(!res.conflict.has_value());
    CHECK(res.domain == clopen_full(a.graph));
    CHECK(res.codomain == clopen_full(a.graph));
    auto lambda = triple_map(a, make_triple(a, Path::at_vertex(0), 1LL, Path::at_vertex(0)));
    CHECK(maps_agree_pointwise(a, res.map, lambda, 8));
    CHECK(res.preimage_count > 1);  // U itself plus refined pieces
  }
  SECTION("g = 1: the identity on Σ") {
    auto res = universal_action(a, sigma, bs.identity(), 3, 8);
    REQUIRE(!res.conflict.has_value());
    CHECK(maps_agree_pointwise(a, res.map, identity_map(a, clopen_full(a.graph)), 8));
  }
  SECTION("g = a = σ(S_0): Σ → 0Σ, x ↦ 0x") {
    auto res = universal_action(a, sigma, bs.a(0), 4, 8);
    REQUIRE(!res.conflict.has_value());
    CHECK(res.domain == clopen_full(a.graph));
    CHECK(res.codomain == clopen_of(a.graph, {word(a.graph, {0})}));
    auto expect = triple_map(a, make_triple(a, word(a.graph, {0}), 0LL, Path::at_vertex(0)));
    CHECK(maps_agree_pointwise(a, res.map, expect, 8));
  }
  SECTION("universal_action(g)^-1 = universal_action(g^-1)") {
    for (const auto& g : {bs.make(1, 0, 0), bs.a(0), bs.multiply(bs.a(1), bs.invert(bs.a(0)))}) {
      auto res = universal_action(a, sigma, g, 4, 8);
      auto res_inv = universal_action(a, sigma, bs.invert(g), 4, 8);
      REQUIRE(!res.conflict.has_value());
      REQUIRE(!res_inv.conflict.has_value());
      CHECK(res.domain == res_inv.codomain);
      CHECK(res.codomain == res_inv.domain);
      CHECK(maps_agree_pointwise(a, inverse_map(a, res.map), res_inv.map, 8));
    }
  }
  SECTION("a collapsing sigma produces a conflict") {
    auto res = universal_action(a, SigmaLength<ZGroup>{}, 0LL, 2, 6);
    REQUIRE(res.conflict.has_value());  // λ and the identity both hit length 0
  }
}

TEST_CASE("odometer action in closed form") {
  auto a = odometer(2);
  auto sigma = SigmaBS::make(a);
  const auto& bs = sigma.target;

  SECTION("λ anchors") {
    auto res = odometer_action(a, bs.make(1, 0, 0));
    REQUIRE(res.in_image);
    auto ones = make_point(a.graph, {}, {1});
    auto img = apply_map(a, res.map, ones);
    REQUIRE(img.has_value());
    CHECK(*img == make_point(a.graph, {}, {0}));  // λ(1^∞) = 0^∞
    // λ(0x) = 1x
    auto x = make_point(a.graph, {0}, {0, 1});
    auto img2 = apply_map(a, res.map, x);
    REQUIRE(img2.has_value());
    CHECK(*img2 == make_point(a.graph, {1}, {0, 1}));
  }
  SECTION("g = ab^-1 is λ^-1 on Σ") {
    auto g = bs.multiply(bs.a(0), bs.invert(bs.a(1)));
    auto res = odometer_action(a, g);
    REQUIRE(res.in_image);
    REQUIRE(res.map.pieces.size() == 1);
    CHECK(res.map.pieces[0].g == -1);
    CHECK(res.map.pieces[0].in.length() == 0);
    CHECK(res.map.pieces[0].out.length() == 0);
  }
  SECTION("case 2: g = a maps Σ into 0Σ") {
    auto res = odometer_action(a, bs.a(0));
    REQUIRE(res.in_image);
    CHECK(map_domain(a, res.map) == clopen_full(a.graph));
    CHECK(map_codomain(a, res.map) == clopen_of(a.graph, {word(a.graph, {0})}));
  }
  SECTION("case 3: g = a^-1 strips a 0") {
    auto res = odometer_action(a, bs.invert(bs.a(0)));
    REQUIRE(res.in_image);
    CHECK(map_domain(a, res.map) == clopen_of(a.graph, {word(a.graph, {0})}));
    CHECK(map_codomain(a, res.map) == clopen_full(a.graph));
  }
  SECTION("elements without αβ^-1 form have empty domain") {
    // (1/2, 1) has k = 1 > 0 but a fractional q: not in the image
    auto res = odometer_action(a, bs.make(1, 1, 1));
    CHECK(!res.in_image);
    CHECK(res.map.pieces.empty());
  }
  SECTION("odometer_action agrees with universal_action for all g = αβ^-1, |α|,|β| ≤ 3") {
    for (const auto& alpha : enumerate_paths_upto(a.graph, 3)) {
      for (const auto& beta : enumerate_paths_upto(a.graph, 3)) {
        const auto g = bs.multiply(sigma.bs_of_path(alpha), bs.invert(sigma.bs_of_path(beta)));
        auto closed = odometer_action(a, g);
        auto bundled = universal_action(a, sigma, g, 4, 8);
        REQUIRE(closed.in_image);
        REQUIRE(!bundled.conflict.has_value());
        CHECK(maps_agree_pointwise(a, closed.map, bundled.map, 8));
      }
    }
  }
}

TEST_CASE("partial action axioms on the odometer table") {
  auto a = odometer(2);
  auto sigma = SigmaBS::make(a);
  const auto& bs = sigma.target;
  const auto A = bs.a(0), B = bs.a(1);
  std::vector<BSGroup::Element> elems = {bs.identity(),
                                         A,
                                         B,
                                         bs.invert(A),
                                         bs.invert(B),
                                         bs.multiply(B, bs.invert(A)),
                                         bs.multiply(A, bs.invert(B))};
  PartialActionTable<ZGroup> tbl;
  std::vector<BSGroup::Element> tags;
  for (const auto& h : elems) {
    auto res = odometer_action(a, h);
    REQUIRE(res.in_image);
    tbl.entries.push_back({0LL, res.map});  // key unused for lookup below
    tags.push_back(h);
  }
  // adapt: the table is keyed by group elements of the *acting* backend in
  // the generic checker; for the BS-indexed table we check the laws directly
  SECTION("theta_g theta_h ⊂ theta_gh and inverses, pointwise at depth 8") {
    for (size_t i = 0; i < elems.size(); ++i)
      for (size_t j = 0; j < elems.size(); ++j) {
        const auto gh = bs.multiply(elems[i], elems[j]);
        auto res_gh = odometer_action(a, gh);
        if (!res_gh.in_image) continue;
        auto comp = compose(a, tbl.entries[i].theta, tbl.entries[j].theta);
        CHECK(clopen_subset(a.graph, map_domain(a, comp), map_domain(a, res_gh.map)));
        for (const auto& cyl : map_domain(a, comp).prefixes) {
          for (const auto& rho : refinements(a.graph, cyl, std::max(0, 8 - cyl.length()))) {
            auto x = periodic_completion(a.graph, rho);
            auto lhs = apply_map_prefix(a, comp, x, 8);
            auto rhs = apply_map_prefix(a, res_gh.map, x, 8);
            REQUIRE(lhs.has_value());
            REQUIRE(rhs.has_value());
            CHECK(*lhs == *rhs);
          }
        }
      }
  }
  SECTION("the generic checker accepts a Z-indexed slice of the action") {
    // θ_{z^m} = λ^m indexed by the acting group Z itself
    PartialActionTable<ZGroup> ztbl;
    for (long long m = -2; m <= 2; ++m)
      ztbl.entries.push_back({m, triple_map(a, make_triple(a, Path::at_vertex(0), m, Path::at_vertex(0)))});
    CHECK(axioms_partial_action(a, ztbl, 8).ok);
  }
  SECTION("a shrunk entry is caught") {
    PartialActionTable<ZGroup> bad;
    for (long long m = -2; m <= 2; ++m) {
      auto full = triple_map(a, make_triple(a, Path::at_vertex(0), m, Path::at_vertex(0)));
      if (m == 2) {
        // θ_{z^2} artificially restricted to 0Σ
        auto piece = restrict_piece(a, full.pieces[0], word(a.graph, {0}));
        bad.entries.push_back({m, PartialMap<ZGroup>{{piece}}});
      } else {
        bad.entries.push_back({m, full});
      }
    }
    auto v = axioms_partial_action(a, bad, 6);
    CHECK(!v.ok);
  }
  SECTION("order-1 group is trivially fine") {
    auto t = fixtures::trivial_group_rn(2);
    PartialActionTable<FiniteGroup> ttbl;
    ttbl.entries.push_back({t.group.identity(), identity_map(t, clopen_full(t.graph))});
    CHECK(axioms_partial_action(t, ttbl, 4).ok);
  }
}

TEST_CASE("Quigg-Raeburn action") {
  auto a = fixtures::trivial_group_rn(2);
  FreeGroup f = FreeGroup::on(a.graph.edge_names);

  SECTION("g = 0·1^-1 maps 1Σ to 0Σ") {
    auto m = quigg_raeburn(a, f.evaluate({1, -2}));
    REQUIRE(m.pieces.size() == 1);
    CHECK(m.pieces[0].in == word(a.graph, {1}));
    CHECK(m.pieces[0].out == word(a.graph, {0}));
    auto x = make_point(a.graph, {1, 0}, {1});
    auto img = apply_map(a, m, x);
    REQUIRE(img.has_value());
    CHECK(*img == make_point(a.graph, {0, 0}, {1}));
  }
  SECTION("the empty word acts as the identity on Σ") {
    auto m = quigg_raeburn(a, f.identity());
    CHECK(map_domain(a, m) == clopen_full(a.graph));
    CHECK(maps_agree_pointwise(a, m, identity_map(a, clopen_full(a.graph)), 6));
  }
  SECTION("0^-1·1 has empty domain") {
    CHECK(quigg_raeburn(a, f.evaluate({-1, 2})).pieces.empty());
  }
}

TEST_CASE("induced action of the universal group") {
  auto a = odometer(2);
  auto sigma = SigmaBS::make(a);
  const auto& bs = sigma.target;
  const auto ba_inv = bs.multiply(bs.a(1), bs.invert(bs.a(0)));  // = σ(U)

  SECTION("E_{ba^-1} at bound 2k is the complement of the b^k cylinder") {
    for (int k = 1; k <= 5; ++k) {
      auto res = induced_action(a, sigma, ba_inv, 2 * k, 8);
      REQUIRE(!res.conflict.has_value());
      CHECK(res.domain ==
            clopen_complement(a.graph, clopen_of(a.graph, {word(a.graph, std::vector<int>(k, 1))})));
      CHECK(!res.stabilized);  // the union keeps growing with the bound
    }
  }
  SECTION("h = 1: identity with domain Σ, stabilized at bound 0") {
    auto res = induced_action(a, sigma, bs.identity(), 4, 8);
    REQUIRE(!res.conflict.has_value());
    CHECK(res.domain == clopen_full(a.graph));
    CHECK(maps_agree_pointwise(a, res.map, identity_map(a, clopen_full(a.graph)), 8));
    CHECK(induced_action(a, sigma, bs.identity(), 1, 8).stabilized);
  }
  SECTION("h = a: domain Σ, x ↦ 0x, stabilized") {
    auto res = induced_action(a, sigma, bs.a(0), 4, 8);
    REQUIRE(!res.conflict.has_value());
    CHECK(res.domain == clopen_full(a.graph));
    auto expect = triple_map(a, make_triple(a, word(a.graph, {0}), 0LL, Path::at_vertex(0)));
    CHECK(maps_agree_pointwise(a, res.map, expect, 8));
    CHECK(res.stabilized);
  }
  SECTION("no conflicts on pseudo-free fixtures") {
    for (int n : {2, 3}) {
      auto an = odometer(n);
      auto sn = SigmaBS::make(an);
      for (const auto& alpha : enumerate_paths_upto(an.graph, 2))
        for (const auto& beta : enumerate_paths_upto(an.graph, 2)) {
          const auto h =
              sn.target.multiply(sn.bs_of_path(alpha), sn.target.invert(sn.bs_of_path(beta)));
          CHECK(!induced_action(an, sn, h, 4, 6).conflict.has_value());
        }
    }
  }
  SECTION("a deliberately collapsing sigma raises a conflict") {
    auto z2 = fixtures::z2_trivial_r2();
    auto res = induced_action(z2, SigmaTrivial<FiniteGroup>{}, 0, 2, 6);
    REQUIRE(res.conflict.has_value());
  }
}

TEST_CASE("exhausting surjectivity witnesses") {
  auto a = odometer(2);
  SECTION("g = z: α = 0, gα = 1, and the idempotent identity holds in S") {
    auto w = exhausting_surjectivity_witness(a, 1LL, 4);
    REQUIRE(w.has_value());
    CHECK(w->alpha == word(a.graph, {0}));
    CHECK(w->g_alpha == word(a.graph, {1}));
    CHECK(w->idempotent_identity_ok);
    // σ(U) = σ(S_1 S_0*) = ba^-1
    auto sigma = SigmaBS::make(a);
    auto s = make_triple(a, w->g_alpha, 0LL, w->alpha);
    CHECK(sigma.target.equal(sigma.apply(a, s), sigma.target.make(1, 0, 0)));
  }
  SECTION("g = 1: a vertex path works") {
    auto w = exhausting_surjectivity_witness(a, 0LL, 4);
    REQUIRE(w.has_value());
    CHECK(w->alpha.length() == 0);
    CHECK(w->idempotent_identity_ok);
  }
  SECTION("no witness within the bound reports failure") {
    auto d = fixtures::z_diagonal_r2();
    CHECK(!exhausting_surjectivity_witness(d, 1LL, 5).has_value());
  }
}
