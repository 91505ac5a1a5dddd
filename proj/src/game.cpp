#include "randctl/game.hpp"

#include <algorithm>
#include <stdexcept>

namespace randctl {

std::optional<NodeId> GameGraph::find(std::string_view name) const {
  for (NodeId v = 0; v < names.size(); ++v)
    if (names[v] == name) return v;
  return std::nullopt;
}

NodeId GameGraph::add_node(std::string name) {
  names.push_back(std::move(name));
  succ.emplace_back();
  return static_cast<NodeId>(names.size() - 1);
}

bool ReachObjective::is_target(NodeId v) const {
  return std::binary_search(targets.begin(), targets.end(), v);
}

size_t PartialOwnership::assigned_count() const {
  size_t n = 0;
  for (const auto& a : assign)
    if (a) ++n;
  return n;
}

BigInt PartialOwnership::encode() const {
  // base-3, node 0 in the least significant digit
  BigInt code = 0;
  for (size_t v = assign.size(); v-- > 0;) {
    int digit = !assign[v] ? 0 : (*assign[v] == Player::Max ? 1 : 2);
    code = code * 3 + digit;
  }
  return code;
}

PartialOwnership PartialOwnership::decode(const BigInt& code, size_t n) {
  if (code < 0) throw std::invalid_argument("ownership code must be nonnegative");
  PartialOwnership own(n);
  BigInt rest = code;
  for (size_t v = 0; v < n; ++v) {
    int digit = BigInt(rest % 3).convert_to<int>();
    rest /= 3;
    if (digit == 1)
      own.assign[v] = Player::Max;
    else if (digit == 2)
      own.assign[v] = Player::Min;
  }
  if (rest != 0) throw std::invalid_argument("ownership code out of range for node count");
  return own;
}

std::optional<ValidationError> validate(const GameGraph& g, const Objective& obj) {
  size_t n = g.node_count();
  if (g.succ.size() != n) return ValidationError{"successor table size mismatch"};
  if (n == 0) return ValidationError{"graph has no nodes"};
  if (g.init >= n) return ValidationError{"init node missing", g.init};
  for (NodeId v = 0; v < n; ++v) {
    if (g.succ[v].empty()) return ValidationError{"dead-end node " + g.names[v], v};
    std::vector<NodeId> seen;
    for (NodeId u : g.succ[v]) {
      if (u >= n) return ValidationError{"dangling edge from " + g.names[v], v};
      if (std::find(seen.begin(), seen.end(), u) != seen.end())
        return ValidationError{"duplicate edge from " + g.names[v], v};
      seen.push_back(u);
    }
  }
  if (const auto* reach = std::get_if<ReachObjective>(&obj)) {
    if (reach->targets.empty()) return ValidationError{"empty target set"};
    if (!std::is_sorted(reach->targets.begin(), reach->targets.end()))
      return ValidationError{"target set not sorted"};
    for (NodeId v : reach->targets)
      if (v >= n) return ValidationError{"target node missing", v};
    for (NodeId v : reach->targets)
      for (NodeId u : g.succ[v])
        if (!reach->is_target(u))
          return ValidationError{"target " + g.names[v] + " has non-target successor " + g.names[u], v};
  } else if (const auto* parity = std::get_if<ParityObjective>(&obj)) {
    if (parity->priority.size() != n) return ValidationError{"priority table size mismatch"};
    for (NodeId v = 0; v < n; ++v)
      if (parity->priority[v] < 0)
        return ValidationError{"missing priority on " + g.names[v], v};
  } else if (const auto* energy = std::get_if<EnergyObjective>(&obj)) {
    if (energy->weight.size() != n) return ValidationError{"weight table size mismatch"};
    for (NodeId v = 0; v < n; ++v)
      if (energy->weight[v] == kMissingWeight)
        return ValidationError{"missing weight on " + g.names[v], v};
    if (energy->credit < 0) return ValidationError{"negative initial credit"};
  }
  return std::nullopt;
}

std::optional<ValidationError> validate_toss(const GameGraph& g, const TossFunction& t) {
  if (t.prob.size() != g.node_count()) return ValidationError{"toss table size mismatch"};
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (t.prob[v] <= 0 || t.prob[v] >= 1)
      return ValidationError{"toss probability of " + g.names[v] + " outside (0,1)", v};
  return std::nullopt;
}

std::optional<ValidationError> validate_stochastic(const StochasticArena& a) {
  size_t n = a.node_count();
  std::vector<int> kind(n, -1);
  auto mark = [&](const std::vector<NodeId>& set, int k) -> std::optional<ValidationError> {
    for (NodeId v : set) {
      if (v >= n) return ValidationError{"node out of range", v};
      if (kind[v] != -1) return ValidationError{"node in two ownership classes", v};
      kind[v] = k;
    }
    return std::nullopt;
  };
  if (auto e = mark(a.max_nodes, 0)) return e;
  if (auto e = mark(a.min_nodes, 1)) return e;
  if (auto e = mark(a.random_nodes, 2)) return e;
  for (NodeId v = 0; v < n; ++v)
    if (kind[v] == -1) return ValidationError{"node in no ownership class", v};
  if (a.init >= n) return ValidationError{"init node missing", a.init};
  if (a.succ.size() != n || a.dist.size() != n)
    return ValidationError{"edge table size mismatch"};
  for (NodeId v = 0; v < n; ++v) {
    if (kind[v] == 2) {
      if (a.dist[v].empty()) return ValidationError{"random node without distribution", v};
      Rational sum = 0;
      for (const auto& [u, p] : a.dist[v]) {
        if (u >= n) return ValidationError{"dangling distribution edge", v};
        if (p <= 0) return ValidationError{"nonpositive probability", v};
        sum += p;
      }
      if (sum != 1) return ValidationError{"distribution does not sum to 1", v};
    } else {
      if (a.succ[v].empty()) return ValidationError{"dead-end node", v};
      for (NodeId u : a.succ[v])
        if (u >= n) return ValidationError{"dangling edge", v};
    }
  }
  return std::nullopt;
}

std::vector<NodeId> relevant_nodes(const GameGraph& g) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    // successor lists are duplicate-free, so >= 2 entries means a real choice
    if (g.succ[v].size() >= 2) out.push_back(v);
  }
  return out;
}

Rational assignment_probability(const TossFunction& t, const PartialOwnership& own,
                                const std::vector<NodeId>& relevant) {
  Rational p = 1;
  for (NodeId v : relevant) {
    if (v >= own.assign.size() || !own.assign[v])
      throw std::invalid_argument("assignment does not cover all relevant nodes");
    if (*own.assign[v] == Player::Max)
      p *= t.prob[v];
    else
      p *= 1 - t.prob[v];
  }
  return p;
}

PartialOwnership AssignmentRange::at(uint64_t index) const {
  PartialOwnership own(universe);
  for (size_t j = 0; j < relevant.size(); ++j)
    own.assign[relevant[j]] = (index >> j & 1) ? Player::Min : Player::Max;
  return own;
}

AssignmentRange enumerate_assignments(const GameGraph& g) {
  AssignmentRange r;
  r.relevant = relevant_nodes(g);
  r.universe = g.node_count();
  if (r.relevant.size() > 62)
    throw std::invalid_argument("too many relevant nodes to enumerate");
  return r;
}

const char* player_name(Player p) { return p == Player::Max ? "max" : "min"; }

}  // namespace randctl
