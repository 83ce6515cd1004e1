#include "cqt/netlist.hpp"

#include "cqt/constants.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <deque>
#include <sstream>

namespace cqt {

namespace {

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double suffix_scale(char c, bool& ok) {
  ok = true;
  switch (c) {
    case 'p': return 1e-12;
    case 'n': return 1e-9;
    case 'u': return 1e-6;
    case 'm': return 1e-3;
    case 'k': return 1e3;
    case 'M': return 1e6;
    case 'G': return 1e9;
    default: ok = false; return 1.0;
  }
}

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

double parse_suffixed_number(std::string_view token) {
  if (token.empty()) throw std::invalid_argument("empty number");
  double scale = 1.0;
  std::string_view digits = token;
  bool is_suffix = false;
  const double s = suffix_scale(token.back(), is_suffix);
  if (is_suffix) {
    scale = s;
    digits = token.substr(0, token.size() - 1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size())
    throw std::invalid_argument("malformed number '" + std::string(token) + "'");
  return value * scale;
}

void CircuitGraph::add_branch(Branch b) {
  if (find_branch(b.name)) throw std::invalid_argument("duplicate branch name '" + b.name + "'");
  if (!(b.value > 0.0)) throw std::invalid_argument("nonpositive value on branch '" + b.name + "'");
  if (b.node_a == b.node_b)
    throw std::invalid_argument("branch '" + b.name + "' connects a node to itself");
  nodes.insert(b.node_a);
  nodes.insert(b.node_b);
  branches.push_back(std::move(b));
}

const Branch* CircuitGraph::find_branch(std::string_view name) const {
  for (const Branch& b : branches)
    if (b.name == name) return &b;
  return nullptr;
}

std::vector<std::string> CircuitGraph::ordered_nodes() const {
  return {nodes.begin(), nodes.end()}; // std::set is already sorted
}

std::vector<std::string> CircuitGraph::non_ground_nodes() const {
  std::vector<std::string> out;
  for (const std::string& n : nodes)
    if (n != ground) out.push_back(n);
  return out;
}

CircuitGraph parse_netlist(std::string_view text) {
  CircuitGraph g;
  bool ground_seen = false;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line{raw};
    if (const size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const auto tok = tokenize(line);
    if (tok.empty()) continue;

    if (tok[0] == "GROUND") {
      if (tok.size() != 2) throw ParseError(line_no, "GROUND expects exactly one node id");
      if (!valid_identifier(tok[1]))
        throw ParseError(line_no, "invalid node id '" + std::string(tok[1]) + "'");
      if (ground_seen) throw ParseError(line_no, "duplicate GROUND statement");
      ground_seen = true;
      g.ground = std::string(tok[1]);
      g.nodes.insert(g.ground);
      continue;
    }

    if (tok.size() != 4 && tok.size() != 5)
      throw ParseError(line_no, "expected '<name> <nodeA> <nodeB> <value> [offset=...]'");

    Branch b;
    b.name = std::string(tok[0]);
    if (!valid_identifier(b.name))
      throw ParseError(line_no, "invalid branch name '" + b.name + "'");
    switch (std::toupper(static_cast<unsigned char>(b.name[0]))) {
      case 'C': b.kind = ElementKind::capacitor; break;
      case 'L': b.kind = ElementKind::inductor; break;
      case 'J': b.kind = ElementKind::josephson; break;
      default:
        throw ParseError(line_no, "unknown element kind for '" + b.name +
                                      "' (names start with C, L or J)");
    }
    if (!valid_identifier(tok[1]) || !valid_identifier(tok[2]))
      throw ParseError(line_no, "invalid node id");
    b.node_a = std::string(tok[1]);
    b.node_b = std::string(tok[2]);

    std::string_view value_tok = tok[3];
    bool value_is_frequency = false;
    if (value_tok.size() > 3 && (value_tok.substr(0, 3) == "Ej=" || value_tok.substr(0, 3) == "EJ=" ||
                                 value_tok.substr(0, 3) == "ej=")) {
      if (b.kind != ElementKind::josephson)
        throw ParseError(line_no, "Ej= is only valid on Josephson elements");
      value_tok = value_tok.substr(3);
    } else if (value_tok.size() > 2 && (value_tok.substr(0, 2) == "f=" || value_tok.substr(0, 2) == "F=")) {
      if (b.kind != ElementKind::josephson)
        throw ParseError(line_no, "f= is only valid on Josephson elements");
      value_tok = value_tok.substr(2);
      value_is_frequency = true;
    }
    try {
      b.value = parse_suffixed_number(value_tok);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    if (value_is_frequency) b.value *= h_planck; // E_J = h f
    if (!(b.value > 0.0)) throw ParseError(line_no, "nonpositive value on branch '" + b.name + "'");

    if (tok.size() == 5) {
      std::string_view off = tok[4];
      if (off.substr(0, 7) != "offset=")
        throw ParseError(line_no, "expected offset=<value>, got '" + std::string(off) + "'");
      try {
        b.offset = parse_suffixed_number(off.substr(7));
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
    }

    if (b.node_a == b.node_b)
      throw ParseError(line_no, "branch '" + b.name + "' connects a node to itself");
    try {
      g.add_branch(std::move(b));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (g.branches.empty()) throw ParseError(line_no, "empty netlist");
  g.nodes.insert(g.ground); // default ground participates even when implicit
  return g;
}

std::string render_netlist(const CircuitGraph& g) {
  std::string out = "GROUND " + g.ground + "\n";
  for (const Branch& b : g.branches) {
    out += b.name + " " + b.node_a + " " + b.node_b + " ";
    if (b.kind == ElementKind::josephson) out += "Ej=";
    out += fmt_full(b.value);
    if (b.offset != 0.0) out += " offset=" + fmt_full(b.offset);
    out += "\n";
  }
  return out;
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const ValidationIssue& i : issues) out += i.code + ": " + i.message + "\n";
  return out;
}

namespace {

// Connected component of `start` following branches admitted by `admit`.
std::set<std::string> reachable(const CircuitGraph& g, const std::string& start,
                                bool (*admit)(const Branch&)) {
  std::set<std::string> seen;
  if (!g.nodes.count(start)) return seen;
  std::deque<std::string> queue{start};
  seen.insert(start);
  while (!queue.empty()) {
    const std::string n = queue.front();
    queue.pop_front();
    for (const Branch& b : g.branches) {
      if (!admit(b)) continue;
      const std::string* other = nullptr;
      if (b.node_a == n) other = &b.node_b;
      else if (b.node_b == n) other = &b.node_a;
      if (other && seen.insert(*other).second) queue.push_back(*other);
    }
  }
  return seen;
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const std::string& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

} // namespace

ValidationReport validate(const CircuitGraph& g) {
  ValidationReport report;
  if (g.branches.empty()) {
    report.issues.push_back({"empty-netlist", "netlist has no branches"});
    return report;
  }
  const bool ground_attached = std::any_of(
      g.branches.begin(), g.branches.end(),
      [&](const Branch& b) { return b.node_a == g.ground || b.node_b == g.ground; });
  if (!ground_attached) {
    report.issues.push_back({"ground-missing",
                             "ground node '" + g.ground + "' is not connected to any branch"});
  }

  std::vector<std::string> only_inductive;
  std::vector<std::string> no_capacitor;
  for (const std::string& n : g.nodes) {
    bool has_cap = false, has_ind = false;
    for (const Branch& b : g.branches) {
      if (b.node_a != n && b.node_b != n) continue;
      (b.kind == ElementKind::capacitor ? has_cap : has_ind) = true;
    }
    if (!has_cap) {
      no_capacitor.push_back(n);
      if (has_ind) only_inductive.push_back(n);
    }
  }
  for (const std::string& n : only_inductive)
    report.issues.push_back({"passive-inductive-node",
                             "node '" + n + "' touches only inductive branches"});

  const auto all = reachable(g, g.ground, [](const Branch&) { return true; });
  if (all.size() != g.nodes.size()) {
    std::vector<std::string> missing;
    for (const std::string& n : g.nodes)
      if (!all.count(n)) missing.push_back(n);
    report.issues.push_back({"disconnected",
                             "nodes unreachable from ground: " + join(missing)});
  }

  const auto cap_reach = reachable(g, g.ground, [](const Branch& b) {
    return b.kind == ElementKind::capacitor;
  });
  if (!no_capacitor.empty() || cap_reach.size() != g.nodes.size()) {
    std::vector<std::string> missing;
    for (const std::string& n : g.nodes)
      if (!cap_reach.count(n)) missing.push_back(n);
    report.issues.push_back({"cap-not-spanning",
                             "capacitive sub-network not spanning; uncovered nodes: " + join(missing)});
  }
  return report;
}

SpanningTree spanning_tree(const CircuitGraph& g) {
  const ValidationReport report = validate(g);
  if (!report.ok())
    throw std::invalid_argument("spanning_tree: graph failed validation:\n" + report.to_string());

  SpanningTree tree;
  std::set<std::string> visited{g.ground};
  std::set<std::string> in_tree;
  std::deque<std::string> queue{g.ground};
  while (!queue.empty()) {
    const std::string n = queue.front();
    queue.pop_front();
    // (neighbor, branch) pairs sorted lexicographically: node id first, then
    // branch name, so the traversal is reproducible across runs.
    std::vector<std::pair<std::string, std::string>> frontier;
    for (const Branch& b : g.branches) {
      if (b.kind != ElementKind::capacitor) continue;
      if (b.node_a == n && !visited.count(b.node_b)) frontier.emplace_back(b.node_b, b.name);
      if (b.node_b == n && !visited.count(b.node_a)) frontier.emplace_back(b.node_a, b.name);
    }
    std::sort(frontier.begin(), frontier.end());
    for (const auto& [next, branch] : frontier) {
      if (visited.count(next)) continue; // a sibling may have claimed it
      visited.insert(next);
      in_tree.insert(branch);
      tree.tree_branches.push_back(branch);
      tree.parent_branch[next] = branch;
      queue.push_back(next);
    }
  }
  for (const Branch& b : g.branches)
    if (!in_tree.count(b.name)) tree.closure_branches.push_back(b.name);
  return tree;
}

NodeClassification classify_nodes(const CircuitGraph& g) {
  NodeClassification out;
  for (const std::string& n : g.nodes) {
    if (n == g.ground) continue;
    bool has_cap = false, has_ind = false;
    for (const Branch& b : g.branches) {
      if (b.node_a != n && b.node_b != n) continue;
      (b.kind == ElementKind::capacitor ? has_cap : has_ind) = true;
    }
    (has_cap && has_ind ? out.active : out.passive).insert(n);
  }
  return out;
}

} // namespace cqt
