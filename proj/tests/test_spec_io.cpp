#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "selfsim/cli.hpp"
#include "selfsim/spec_io.hpp"
#include "support.hpp"

using namespace selfsim;

namespace {
std::string fixture_text(const std::string& name) {
  std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}
struct CliResult {
  int code;
  std::string out;
  std::string err;
};
CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}
}  // namespace

TEST_CASE("every fixture parses and passes the axiom suite") {
  for (const auto& name : {"odometer-r2.action", "odometer-r3.action", "odometer-r4.action",
                           "z2-trivial-r2.action", "swap-c2.action", "cuntz-r2.action",
                           "z-diagonal-r2.action"}) {
    const auto data = parse_action_spec(fixture_text(name));
    const auto fixture = to_action(data);
    std::visit([&](const auto& a) { CHECK(axioms_report(a, 2, 3).ok); }, fixture);
  }
}

TEST_CASE("parse ∘ render ∘ parse = parse on all fixtures") {
  for (const auto& name : {"odometer-r2.action", "odometer-r3.action", "odometer-r4.action",
                           "z2-trivial-r2.action", "swap-c2.action", "cuntz-r2.action",
                           "z-diagonal-r2.action"}) {
    const auto once = parse_action_spec(fixture_text(name));
    const auto twice = parse_action_spec(render_action_spec(once));
    CHECK(render_action_spec(once) == render_action_spec(twice));
  }
}

TEST_CASE("parsed odometer behaves like the built-in one") {
  const auto fixture = to_action(parse_action_spec(fixture_text("odometer-r2.action")));
  const auto* a = std::get_if<SelfSimilarAction<ZGroup>>(&fixture);
  REQUIRE(a != nullptr);
  auto b = fixtures::odometer(2);
  for (const auto& p : enumerate_paths_upto(a->graph, 4))
    for (long long m = -5; m <= 5; ++m) {
      CHECK(act(*a, m, p) == act(b, m, p));
      CHECK(restrict_cocycle(*a, m, p) == restrict_cocycle(b, m, p));
    }
}

TEST_CASE("parse errors name the line and the field") {
  SECTION("malformed edge reference") {
    const std::string bad =
        "name = broken\n\n[graph]\nvertex v\nedge 0 v x\n\n[group]\nbackend = Z\n\n[table]\neact z 0 "
        "= 0 ; -\n";
    try {
      to_action(parse_action_spec(bad));
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("unknown vertex") != std::string::npos);
    }
  }
  SECTION("unknown section") {
    CHECK_THROWS_AS(parse_action_spec("name = x\n[junk]\n"), ParseError);
  }
  SECTION("missing cocycle word") {
    const std::string bad =
        "name = b\n[graph]\nvertex v\nedge 0 v v\n[group]\nbackend = Z\n[table]\neact z 0 = 0\n";
    try {
      parse_action_spec(bad);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.field == "eact");
      CHECK(e.line == 7);
    }
  }
  SECTION("missing table rows are reported with the generator and edge") {
    const std::string bad =
        "name = b\n[graph]\nvertex v\nedge 0 v v\nedge 1 v v\n[group]\nbackend = Z\n[table]\neact z 0 "
        "= 1 ; -\n";
    try {
      to_action(parse_action_spec(bad));
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("edge 1") != std::string::npos);
    }
  }
}

TEST_CASE("cmd_check on the odometer: all verdicts agree, exit 0") {
  auto r = run_cli({"check", fixture_path("odometer-r2.action"), "--json", "--radius", "3",
                    "--pathlen", "3", "--exponent", "8"});
  REQUIRE(r.code == 0);
  auto rep = nlohmann::json::parse(r.out);
  CHECK(rep["schema"] == "v1");
  CHECK(rep["checks"]["pseudo_free"]["verdict"] == "no-violation-up-to");
  CHECK(rep["checks"]["cancellative"]["verdict"] == "ok-up-to-bounds");
  CHECK(rep["checks"]["estar_unitary"]["verdict"] == "ok-up-to-bounds");
  CHECK(rep["checks"]["exhausting"]["verdict"] == "ok");
  CHECK(rep["checks"]["idempotent_pure"]["verdict"] == "pure");
  CHECK(rep["agreement"]["pseudo_free_cancellative_estar_agree"] == true);
  CHECK(rep["expect_mismatches"].empty());
}

TEST_CASE("cmd_check on the Z/2 fixture: violations agree, exit 1") {
  auto r = run_cli({"check", fixture_path("z2-trivial-r2.action"), "--json", "--radius", "2",
                    "--pathlen", "2"});
  CHECK(r.code == 1);
  auto rep = nlohmann::json::parse(r.out);
  CHECK(rep["checks"]["pseudo_free"]["verdict"] == "violated");
  CHECK(rep["checks"]["cancellative"]["verdict"] == "violated");
  CHECK(rep["checks"]["estar_unitary"]["verdict"] == "violated");
  CHECK(rep["agreement"]["pseudo_free_cancellative_estar_agree"] == true);
}

TEST_CASE("reports are byte-stable across runs") {
  auto r1 = run_cli({"check", fixture_path("odometer-r2.action"), "--json", "--radius", "2",
                     "--pathlen", "2", "--exponent", "4"});
  auto r2 = run_cli({"check", fixture_path("odometer-r2.action"), "--json", "--radius", "2",
                     "--pathlen", "2", "--exponent", "4"});
  CHECK(r1.out == r2.out);
  auto r3 = run_cli({"check", fixture_path("swap-c2.action"), "--json"});
  auto r4 = run_cli({"check", fixture_path("swap-c2.action"), "--json"});
  CHECK(r3.out == r4.out);
}

TEST_CASE("cmd_check rejects malformed input with a diagnostic") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto bad = dir / "bad.action";
  std::ofstream(bad) << "name = broken\n[graph]\nvertex v\nedge 0 v nowhere\n[group]\nbackend = Z\n";
  auto r = run_cli({"check", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown vertex") != std::string::npos);
}

TEST_CASE("cmd_present") {
  SECTION("odometer presentation lists Za_0 = a_1 and Za_1 = a_0 Z") {
    auto r = run_cli({"present", fixture_path("odometer-r2.action")});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("generators: a_0 a_1 Z") != std::string::npos);
    CHECK(r.out.find("Z a_0 = a_1") != std::string::npos);
    CHECK(r.out.find("Z a_1 = a_0 Z") != std::string::npos);
  }
  SECTION("trivial group gives the free presentation") {
    auto r = run_cli({"present", fixture_path("cuntz-r2.action")});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("relations: (none)") != std::string::npos);
  }
  SECTION("relation counts follow the emitter contract") {
    auto r = run_cli({"present", fixture_path("swap-c2.action"), "--json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    // |gens(G)|·|E^1| + |G relations| = 1·2 + (g² = 1) = 3
    CHECK(j["relations"].size() == 3);
  }
}

TEST_CASE("cmd_act") {
  SECTION("act z on 111... at depth 4 gives 0000") {
    auto r = run_cli({"act", fixture_path("odometer-r2.action"), "--g", "z", "--point", "/ 1",
                      "--depth", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "0 0 0 0\n");
  }
  SECTION("identity echoes the input prefix") {
    auto r = run_cli({"act", fixture_path("odometer-r2.action"), "--g", "-", "--point", "0 1 / 1",
                      "--depth", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "0 1 1 1\n");
  }
  SECTION("universal words act through the closed form") {
    auto r = run_cli({"act", fixture_path("odometer-r2.action"), "--u", "b a^-1", "--point", "/ 1",
                      "--depth", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "0 0 0 0\n");
    auto r2 = run_cli({"act", fixture_path("odometer-r2.action"), "--u", "a", "--point", "/ 1",
                       "--depth", "4"});
    CHECK(r2.out == "0 1 1 1\n");
  }
  SECTION("triples act as prefix rewrites with a domain") {
    auto r = run_cli({"act", fixture_path("odometer-r2.action"), "--triple", "1 ; z ; 0", "--point",
                      "0 / 1", "--depth", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "1 0 0 0\n");  // 0·(1^∞) ↦ 1·(z·1^∞) = 1 0 0 0 ...
    auto r2 = run_cli({"act", fixture_path("odometer-r2.action"), "--triple", "1 ; z ; 0", "--point",
                       "/ 1", "--depth", "4"});
    CHECK(r2.out == "point outside the domain\n");
  }
  SECTION("unknown generator names fail cleanly") {
    auto r = run_cli({"act", fixture_path("odometer-r2.action"), "--g", "nope", "--point", "/ 1"});
    CHECK(r.code == 2);
  }
}

TEST_CASE("cmd_orbit lists distinct points breadth-first") {
  auto r = run_cli({"orbit", fixture_path("odometer-r2.action"), "--point", "/ 0", "--steps", "2",
                    "--depth", "4"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("(start): 0 0 0 0") != std::string::npos);
  CHECK(r.out.find("z: 1 0 0 0") != std::string::npos);
  CHECK(r.out.find("z^-1: 1 1 1 1") != std::string::npos);
  // deterministic across runs
  auto r2 = run_cli({"orbit", fixture_path("odometer-r2.action"), "--point", "/ 0", "--steps", "2",
                     "--depth", "4"});
  CHECK(r.out == r2.out);
}

TEST_CASE("cmd_export emits the restriction automaton") {
  auto r = run_cli({"export", fixture_path("odometer-r2.action")});
  REQUIRE(r.code == 0);
  // odometer closure: states {z, 1}, 2n labeled edges
  CHECK(r.out.find("digraph action") != std::string::npos);
  size_t states = 0, edges = 0, pos = 0;
  while ((pos = r.out.find("shape=circle", pos)) != std::string::npos) {
    ++states;
    pos += 1;
  }
  pos = 0;
  while ((pos = r.out.find("->", pos)) != std::string::npos) {
    ++edges;
    pos += 1;
  }
  CHECK(states == 2);
  CHECK(edges == 4);
  CHECK(r.out.find("\"z\" -> \"1\" [label=\"0/1\"]") != std::string::npos);
  CHECK(r.out.find("\"z\" -> \"z\" [label=\"1/0\"]") != std::string::npos);
}
