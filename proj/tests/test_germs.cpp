#include <catch2/catch_amalgamated.hpp>

#include "selfsim/germs.hpp"
#include "support.hpp"

using namespace selfsim;
using fixtures::odometer;

namespace {
Path word(const Graph& g, std::vector<int> edges) {
  return edges.empty() ? Path::at_vertex(0) : path_from_edges(g, std::move(edges));
}
}  // namespace

TEST_CASE("germ composition in the transformation groupoid") {
  auto a = odometer(2);
  const Path empty = Path::at_vertex(0);
  auto lambda_triple = make_triple(a, empty, 1LL, empty);

  SECTION("inverse law: [s,x]^-1 [s,x] is the unit at x") {
    auto x = make_point(a.graph, {0}, {1});
    SGerm<ZGroup> p{lambda_triple, x};
    auto pinv = sgerm_inverse(a, p);
    auto unit = sgerm_compose(a, pinv, p);
    REQUIRE(unit.has_value());
    CHECK(unit->x == x);
    CHECK(is_idempotent(a, unit->s));
  }
  SECTION("unit · p = p as germs") {
    auto x = make_point(a.graph, {}, {1, 0});
    SGerm<ZGroup> p{lambda_triple, x};
    auto r = sgerm_range(a, p);
    REQUIRE(r.has_value());
    SGerm<ZGroup> unit{cylinder_idempotent(a, empty), *r};
    auto up = sgerm_compose(a, unit, p);
    REQUIRE(up.has_value());
    CHECK(sgerm_equal(a, *up, p, 6).verdict == GermEquality::equal);
  }
  SECTION("odometer germs over λ^-1: composing two ba^-1 germs") {
    // evaluate λ^-1(0^∞) with the oracle first: subtracting one from 000…
    // borrows forever, so λ^-1(0^∞) = 1^∞
    auto zeros = make_point(a.graph, {}, {0});
    auto lam_inv = act_point(a, -1LL, zeros);
    REQUIRE(lam_inv.has_value());
    CHECK(*lam_inv == make_point(a.graph, {}, {1}));
    // (ba^-1, 0^∞) · (ba^-1, λ^-1(0^∞)) = ((ba^-1)^2, λ^-1(0^∞))
    SGerm<ZGroup> p{lambda_triple, zeros};
    SGerm<ZGroup> q{lambda_triple, *lam_inv};
    auto pq = sgerm_compose(a, p, q);
    REQUIRE(pq.has_value());
    CHECK(pq->x == *lam_inv);
    CHECK(pq->s.g == 2);  // λ² = z²
  }
}

TEST_CASE("germ equality verdicts") {
  auto a = odometer(2);
  const Path empty = Path::at_vertex(0);

  SECTION("[s,x] = [s·e, x] for a cylinder idempotent below x") {
    auto x = make_point(a.graph, {0, 1}, {1});
    auto s = make_triple(a, word(a.graph, {1}), 1LL, word(a.graph, {0}));
    auto e = cylinder_idempotent(a, word(a.graph, {0, 1}));
    auto se = multiply(a, s, e);
    REQUIRE(!se.zero);
    auto v = sgerm_equal(a, SGerm<ZGroup>{s, x}, SGerm<ZGroup>{se, x}, 6);
    CHECK(v.verdict == GermEquality::equal);
    CHECK(v.witness_depth <= 2);
  }
  SECTION("different base points or diverging images are distinct") {
    auto x = make_point(a.graph, {}, {0});
    auto y = make_point(a.graph, {}, {1});
    auto e0 = cylinder_idempotent(a, word(a.graph, {0}));
    CHECK(sgerm_equal(a, SGerm<ZGroup>{e0, x}, SGerm<ZGroup>{cylinder_idempotent(a, word(a.graph, {1})), y}, 4)
              .verdict == GermEquality::distinct);
    // λ vs identity over the same point: distinct germs
    auto lam = make_triple(a, empty, 1LL, empty);
    auto id = make_triple(a, empty, 0LL, empty);
    CHECK(sgerm_equal(a, SGerm<ZGroup>{lam, x}, SGerm<ZGroup>{id, x}, 6).verdict ==
          GermEquality::distinct);
  }
  SECTION("matched via a depth-2 witness: [(∅,z,∅), x] vs [(1,1,0), ...]") {
    // (∅,z,∅)·e_{0γ} and (1,1,0) agree on 0Σ: z·0γ = 1γ with trivial carry
    auto s = make_triple(a, empty, 1LL, empty);
    auto t = make_triple(a, word(a.graph, {1}), 0LL, word(a.graph, {0}));
    auto x = make_point(a.graph, {0}, {0, 1});
    auto v = sgerm_equal(a, SGerm<ZGroup>{s, x}, SGerm<ZGroup>{t, x}, 6);
    CHECK(v.verdict == GermEquality::equal);
    CHECK(v.witness_depth <= 2);
  }
}

TEST_CASE("the germ isomorphism [s,ξ] ↦ (σ(s),ξ) on the odometer") {
  for (int n : {2, 3}) {
    auto a = odometer(n);
    auto rep = germ_iso_check(a, SigmaBS::make(a), 500, 8, 3, 12345);
    INFO(rep.failure);
    CHECK(rep.ok);
    CHECK(rep.composition_checks == 500);
    CHECK(rep.injectivity_checks > 0);
    CHECK(rep.associativity_checks > 0);
  }
}

TEST_CASE("collapsing sigmas break injectivity, and the failure is exhibited") {
  SECTION("trivially acting Z/2 with the trivial sigma") {
    auto a = fixtures::z2_trivial_r2();
    auto fail = find_injectivity_failure(a, SigmaTrivial<FiniteGroup>{}, 2, 6);
    REQUIRE(fail.has_value());
  }
  SECTION("odometer with the length sigma") {
    auto a = odometer(2);
    auto fail = find_injectivity_failure(a, SigmaLength<ZGroup>{}, 2, 6);
    REQUIRE(fail.has_value());
  }
  SECTION("the honest sigma has no such failure at the same bounds") {
    auto a = odometer(2);
    CHECK(!find_injectivity_failure(a, SigmaBS::make(a), 2, 6).has_value());
  }
}

TEST_CASE("slice property of table entries") {
  auto a = odometer(2);
  auto sigma = SigmaBS::make(a);
  for (const auto& alpha : enumerate_paths_upto(a.graph, 2))
    for (const auto& beta : enumerate_paths_upto(a.graph, 2)) {
      const auto g =
          sigma.target.multiply(sigma.bs_of_path(alpha), sigma.target.invert(sigma.bs_of_path(beta)));
      auto res = odometer_action(a, g);
      REQUIRE(res.in_image);
      CHECK(slice_property(a, res.map, 5));
    }
}

TEST_CASE("Φ from the Quigg-Raeburn groupoid to the induced one") {
  SECTION("odometers pass homomorphism, injectivity and surjectivity sampling") {
    for (int n : {2, 3}) {
      auto a = odometer(n);
      auto rep = phi_iso_check(a, SigmaBS::make(a), 6, 8, 200, 777);
      INFO(rep.failure);
      CHECK(rep.ok);
      CHECK(rep.injectivity_checks > 0);
    }
  }
  SECTION("with a trivial acting group Φ is the identity") {
    auto a = fixtures::trivial_group_rn(2);
    auto sigma = SigmaFree<FiniteGroup>::make(a);
    auto rep = phi_iso_check(a, sigma, 4, 6, 100, 99);
    INFO(rep.failure);
    CHECK(rep.ok);
    // φ(αβ^-1) literally is αβ^-1 here
    auto s = make_triple(a, word(a.graph, {0}), a.group.identity(), word(a.graph, {1}));
    CHECK(sigma.target.render(sigma.apply(a, s)) == "0 1^-1");
  }
}
