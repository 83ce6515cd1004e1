#include "doctest.h"

#include "cqt/constants.hpp"
#include "cqt/netlist.hpp"

using namespace cqt;

namespace {

const char* kCoupled = R"(# two oscillators sharing a coupling inductor
GROUND gnd
C1 gnd a 1p
C2 gnd b 2p
C3 a b 3p
L1 gnd a 10n
L2 gnd b 20n
L3 a b 30n offset=2.067833848e-15
)";

} // namespace

TEST_SUITE_BEGIN("unit.netlist");

TEST_CASE("suffixed numbers") {
  CHECK(parse_suffixed_number("10p") == doctest::Approx(1e-11).epsilon(1e-15));
  CHECK(parse_suffixed_number("1n") == doctest::Approx(1e-9));
  CHECK(parse_suffixed_number("2.5u") == doctest::Approx(2.5e-6));
  CHECK(parse_suffixed_number("3m") == doctest::Approx(3e-3));
  CHECK(parse_suffixed_number("7k") == doctest::Approx(7e3));
  CHECK(parse_suffixed_number("1.5M") == doctest::Approx(1.5e6));
  CHECK(parse_suffixed_number("5G") == doctest::Approx(5e9));
  CHECK(parse_suffixed_number("2.5e-9") == doctest::Approx(2.5e-9));
  CHECK(parse_suffixed_number("-4") == doctest::Approx(-4.0));
  CHECK(parse_suffixed_number("-0.5m") == doctest::Approx(-5e-4));
  CHECK_THROWS_AS(parse_suffixed_number(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_suffixed_number("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_suffixed_number("1q"), std::invalid_argument);
  CHECK_THROWS_AS(parse_suffixed_number("1..2"), std::invalid_argument);
}

TEST_CASE("parse basic netlist") {
  const CircuitGraph g = parse_netlist(kCoupled);
  CHECK(g.ground == "gnd");
  CHECK(g.nodes == std::set<std::string>{"gnd", "a", "b"});
  REQUIRE(g.branches.size() == 6);
  CHECK(g.branches[0].name == "C1");
  CHECK(g.branches[0].kind == ElementKind::capacitor);
  CHECK(g.branches[0].value == doctest::Approx(1e-12));
  CHECK(g.branches[5].kind == ElementKind::inductor);
  CHECK(g.branches[5].offset == doctest::Approx(2.067833848e-15));
  CHECK(g.non_ground_nodes() == std::vector<std::string>{"a", "b"});
  CHECK(g.ordered_nodes() == std::vector<std::string>{"a", "b", "gnd"});
  const Branch* c3 = g.find_branch("C3");
  REQUIRE(c3 != nullptr);
  CHECK(c3->node_a == "a");
  CHECK(c3->node_b == "b");
  CHECK(g.find_branch("C9") == nullptr);
}

TEST_CASE("josephson value forms") {
  const CircuitGraph g = parse_netlist(
      "C1 0 1 1p\n"
      "J1 0 1 Ej=3.3e-24\n"
      "C2 0 2 1p\n"
      "J2 0 2 f=5G\n");
  CHECK(g.ground == "0");
  CHECK(g.find_branch("J1")->value == doctest::Approx(3.3e-24));
  CHECK(g.find_branch("J2")->value == doctest::Approx(h_planck * 5e9).epsilon(1e-12));
  CHECK(g.find_branch("J2")->kind == ElementKind::josephson);
}

TEST_CASE("comments and blank lines ignored") {
  const CircuitGraph g = parse_netlist(
      "\n# header\n   \nC1 0 1 1p   # trailing comment\nL1 0 1 1n\n");
  CHECK(g.branches.size() == 2);
}

TEST_CASE("parse errors carry line numbers") {
  auto expect_line = [](const char* text, int line) {
    try {
      parse_netlist(text);
      FAIL_CHECK("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line == line);
    }
  };
  expect_line("C1 0 1\n", 1);                       // missing value
  expect_line("C1 0 1 1p\nR1 1 2 50\n", 2);         // unknown kind
  expect_line("C1 0 1 1p\nC1 0 2 2p\n", 2);         // duplicate name
  expect_line("C1 0 1 0\n", 1);                     // nonpositive value
  expect_line("C1 0 1 -1p\n", 1);                   // negative value
  expect_line("C1 1 1 1p\n", 1);                    // self loop
  expect_line("C1 0 1 1p extra=2\n", 1);            // bad trailing token
  expect_line("C1 0 1 Ej=1p\n", 1);                 // Ej= on a capacitor
  expect_line("C1 0 1 f=1G\n", 1);                  // f= on a capacitor
  expect_line("C1 0 1 1p\nGROUND a b\n", 2);        // malformed GROUND
  expect_line("GROUND 0\nGROUND 1\nC1 0 1 1p\n", 2);// duplicate GROUND
  expect_line("C! 0 1 1p\n", 1);                    // bad branch name
  expect_line("C1 0 n! 1p\n", 1);                   // bad node id
  expect_line("# nothing\n\n", 2);                  // empty netlist
}

TEST_CASE("render round-trips") {
  const CircuitGraph g = parse_netlist(kCoupled);
  const CircuitGraph h = parse_netlist(render_netlist(g));
  CHECK(g == h);

  const CircuitGraph j = parse_netlist("C1 0 1 3.87e-15 offset=8e-20\nJ1 0 1 f=0.5G\n");
  CHECK(parse_netlist(render_netlist(j)) == j);
}

TEST_CASE("validate flags problems") {
  SUBCASE("good graph") {
    CHECK(validate(parse_netlist(kCoupled)).ok());
  }
  SUBCASE("ground missing") {
    CircuitGraph g = parse_netlist("C1 a b 1p\nL1 a b 1n\n");
    const auto report = validate(g);
    CHECK_FALSE(report.ok());
    bool found = false;
    for (const auto& i : report.issues) found |= i.code == "ground-missing";
    CHECK(found);
  }
  SUBCASE("disconnected island") {
    CircuitGraph g = parse_netlist("C1 0 a 1p\nL1 0 a 1n\nC2 x y 1p\nL2 x y 1n\n");
    const auto report = validate(g);
    bool found = false;
    for (const auto& i : report.issues) found |= i.code == "disconnected";
    CHECK(found);
  }
  SUBCASE("capacitors not spanning") {
    CircuitGraph g = parse_netlist("C1 0 a 1p\nL1 a b 1n\nL2 0 b 1n\nC2 0 a 2p\n");
    const auto report = validate(g);
    bool not_spanning = false, passive = false;
    for (const auto& i : report.issues) {
      not_spanning |= i.code == "cap-not-spanning";
      passive |= i.code == "passive-inductive-node";
    }
    CHECK(not_spanning);
    CHECK(passive);
  }
  SUBCASE("capacitive subgraph must itself connect to ground") {
    // every node touches a capacitor, but the capacitive path a-b does not
    // reach ground
    CircuitGraph g = parse_netlist("C1 a b 1p\nL1 0 a 1n\nL2 0 b 1n\nC2 a b 2p\n");
    // node 0 touches only inductors -> also cap-not-spanning
    const auto report = validate(g);
    bool found = false;
    for (const auto& i : report.issues) found |= i.code == "cap-not-spanning";
    CHECK(found);
  }
}

TEST_CASE("spanning tree is deterministic and capacitive") {
  const CircuitGraph g = parse_netlist(kCoupled);
  const SpanningTree t = spanning_tree(g);
  // BFS from gnd: neighbors a (via C1) and b (via C2), lexicographic order.
  CHECK(t.tree_branches == std::vector<std::string>{"C1", "C2"});
  CHECK(t.parent_branch.at("a") == "C1");
  CHECK(t.parent_branch.at("b") == "C2");
  CHECK(t.closure_branches == std::vector<std::string>{"C3", "L1", "L2", "L3"});

  // Tie-break on branch name: two capacitors to the same node.
  const CircuitGraph g2 = parse_netlist("Cz 0 a 1p\nCa 0 a 2p\nL1 0 a 1n\n");
  const SpanningTree t2 = spanning_tree(g2);
  CHECK(t2.tree_branches == std::vector<std::string>{"Ca"});
  CHECK(t2.closure_branches == std::vector<std::string>{"Cz", "L1"});

  CHECK_THROWS_AS(spanning_tree(parse_netlist("C1 a b 1p\nL1 a b 1n\n")),
                  std::invalid_argument);
}

TEST_CASE("node classification") {
  // node a: C and L -> active; node b: only C to a -> passive
  const CircuitGraph g = parse_netlist("C1 0 a 1p\nL1 0 a 1n\nC2 a b 1p\nC3 0 b 1p\n");
  const NodeClassification c = classify_nodes(g);
  CHECK(c.active == std::set<std::string>{"a"});
  CHECK(c.passive == std::set<std::string>{"b"});
}

TEST_SUITE_END();
