#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Netlist grammar (one statement per line, '#' starts a comment):
//
//   GROUND <node>
//   <name> <nodeA> <nodeB> <value>[suffix] [offset=<value>[suffix]]
//
// The first letter of <name> selects the element kind: C (farad), L (henry),
// J (Josephson energy in joule).  Josephson values may also be written
// Ej=<joules> or f=<hertz>, the latter meaning E_J = h * f.  Engineering
// suffixes: p n u m k M G.  Node ids are [A-Za-z0-9_]+.  The default ground
// node is "0" unless a GROUND statement says otherwise.
//
// offset is a charge (coulomb) for capacitors and a flux (weber) for the
// inductive kinds.  A branch variable is oriented phi_nodeA - phi_nodeB and
// the offset adds to it, so an inductor contributes
// (phi_a - phi_b + offset)^2 / 2L and a junction -E_J cos((phi_a - phi_b +
// offset)/phi0_reduced).  Individual branch offsets are a gauge choice; only
// their sums around closed loops (fluxes) or into nodes (charges) are
// observable.

namespace cqt {

enum class ElementKind { capacitor, inductor, josephson };

inline bool is_inductive(ElementKind k) { return k != ElementKind::capacitor; }

struct Branch {
  std::string name;
  ElementKind kind = ElementKind::capacitor;
  std::string node_a;
  std::string node_b;
  double value = 0.0;  // F, H or J; always > 0
  double offset = 0.0; // C (capacitor) or Wb (inductive kinds)

  bool operator==(const Branch&) const = default;
};

// Parse/IO errors carry the 1-based netlist line.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct CircuitGraph {
  std::set<std::string> nodes;
  std::vector<Branch> branches;
  std::string ground = "0";

  // Enforces unique name, value > 0 and node_a != node_b; registers nodes.
  void add_branch(Branch b);
  const Branch* find_branch(std::string_view name) const;
  // All nodes in lexicographic order / the same without the ground node.
  std::vector<std::string> ordered_nodes() const;
  std::vector<std::string> non_ground_nodes() const;

  bool operator==(const CircuitGraph&) const = default;
};

struct ValidationIssue {
  std::string code;    // stable identifier, e.g. "cap-not-spanning"
  std::string message; // human-readable, names the offending nodes
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// Capacitive spanning tree rooted at ground; fixes the gauge for node fluxes.
struct SpanningTree {
  std::vector<std::string> tree_branches;              // BFS discovery order
  std::map<std::string, std::string> parent_branch;    // node -> tree branch toward ground
  std::vector<std::string> closure_branches;           // all remaining branches, netlist order
};

struct NodeClassification {
  std::set<std::string> active;  // capacitive and inductive branches meet
  std::set<std::string> passive; // everything else (ground excluded)
};

// Throws ParseError: syntax errors (with line number), duplicate branch name,
// nonpositive value, unknown element kind, self-loop, empty netlist.
CircuitGraph parse_netlist(std::string_view text);

// Inverse of parse_netlist up to formatting; parse(render(g)) == g.
std::string render_netlist(const CircuitGraph& g);

// Checks: non-empty, ground present, connected, capacitive sub-network spans
// every node and is connected, no node touches only inductive branches.
ValidationReport validate(const CircuitGraph& g);

// Deterministic BFS over capacitor branches from ground; neighbors explored
// in lexicographic node order, ties broken by branch name.  Requires a valid
// graph (throws std::invalid_argument otherwise).
SpanningTree spanning_tree(const CircuitGraph& g);

NodeClassification classify_nodes(const CircuitGraph& g);

// "10p", "2.5e-9", "5G" style numbers; used by the netlist parser and the
// CLI.  Throws std::invalid_argument on malformed input.
double parse_suffixed_number(std::string_view token);

} // namespace cqt
