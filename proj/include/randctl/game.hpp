#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "randctl/rational.hpp"

namespace randctl {

using NodeId = uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class Player : uint8_t { Max = 0, Min = 1 };

inline Player opponent(Player p) { return p == Player::Max ? Player::Min : Player::Max; }

// Finite directed graph with ordered successor lists and a designated initial
// node.  Every node must have at least one successor (no dead ends); successor
// order is the canonical tie-break everywhere a deterministic choice is needed.
struct GameGraph {
  std::vector<std::string> names;            // node id -> display name
  std::vector<std::vector<NodeId>> succ;     // ordered, duplicate-free
  NodeId init = 0;

  size_t node_count() const { return names.size(); }
  std::optional<NodeId> find(std::string_view name) const;
  NodeId add_node(std::string name);
  void add_edge(NodeId from, NodeId to) { succ[from].push_back(to); }
};

// Reach the target set (targets are closed under successors).
struct ReachObjective {
  std::vector<NodeId> targets;  // sorted, unique
  bool is_target(NodeId v) const;
};

// Max wins a play iff the highest priority seen infinitely often is even.
// priority[v] < 0 marks a missing annotation and is flagged by validate().
struct ParityObjective {
  std::vector<int> priority;
};

inline constexpr long long kMissingWeight = std::numeric_limits<long long>::min();

// Max wins a play v0 v1 ... iff credit + sum of weight[v_i] for i <= j stays
// nonnegative for every j >= 0 (the weight of the start node counts).
struct EnergyObjective {
  std::vector<long long> weight;
  long long credit = 0;
};

using Objective = std::variant<ReachObjective, ParityObjective, EnergyObjective>;

// Probability that a node is assigned to Max when its coin is tossed.
// Total over nodes; every value must lie strictly between 0 and 1.
struct TossFunction {
  std::vector<Rational> prob;

  static TossFunction uniform(size_t n) {
    TossFunction t;
    t.prob.assign(n, make_rational(1, 2));
    return t;
  }
};

// Partial node-ownership map with a canonical arbitrary-precision encoding:
// base-3 digits in node-index order, 0 = unassigned, 1 = Max, 2 = Min.
struct PartialOwnership {
  std::vector<std::optional<Player>> assign;

  PartialOwnership() = default;
  explicit PartialOwnership(size_t n) : assign(n) {}

  size_t assigned_count() const;
  BigInt encode() const;
  static PartialOwnership decode(const BigInt& code, size_t n);

  bool operator==(const PartialOwnership& o) const { return assign == o.assign; }
};

// Two-player arena: the graph plus a total ownership partition.
struct Arena {
  const GameGraph* graph = nullptr;
  std::vector<Player> owner;
};

// Turn-based stochastic arena (max / min / random nodes, exact distributions).
struct StochasticArena {
  std::vector<std::string> names;
  std::vector<NodeId> max_nodes, min_nodes, random_nodes;  // disjoint partition
  std::vector<std::vector<NodeId>> succ;                   // owned nodes
  std::vector<std::vector<std::pair<NodeId, Rational>>> dist;  // random nodes
  NodeId init = 0;

  size_t node_count() const { return names.size(); }
};

struct ValidationError {
  std::string message;
  NodeId node = kNoNode;  // offending node when one exists
};

// First violated structural or objective invariant, nullopt when valid.
std::optional<ValidationError> validate(const GameGraph& g, const Objective& obj);

// Toss values must lie strictly inside (0,1); checked separately since not
// every operation needs a toss function.
std::optional<ValidationError> validate_toss(const GameGraph& g, const TossFunction& t);

std::optional<ValidationError> validate_stochastic(const StochasticArena& a);

// Nodes with at least two distinct successors; only these are ever tossed or
// enumerated (single-successor nodes are statically assigned to Max).
std::vector<NodeId> relevant_nodes(const GameGraph& g);

// Probability of a complete assignment of the `relevant` nodes: product of
// t(v) for Max-assigned and 1-t(v) for Min-assigned nodes.  The ownership must
// cover every relevant node.
Rational assignment_probability(const TossFunction& t, const PartialOwnership& own,
                                const std::vector<NodeId>& relevant);

// Enumeration of all 2^k complete assignments of the k relevant nodes in
// canonical ascending index order: bit j of the index gives the owner of the
// j-th relevant node (0 = Max, 1 = Min).
struct AssignmentRange {
  std::vector<NodeId> relevant;
  size_t universe = 0;  // node count of the underlying graph

  uint64_t count() const { return uint64_t(1) << relevant.size(); }
  PartialOwnership at(uint64_t index) const;

  struct Iterator {
    const AssignmentRange* range;
    uint64_t index;
    bool operator!=(const Iterator& o) const { return index != o.index; }
    void operator++() { ++index; }
    std::pair<PartialOwnership, uint64_t> operator*() const {
      return {range->at(index), index};
    }
  };
  Iterator begin() const { return {this, 0}; }
  Iterator end() const { return {this, count()}; }
};

// Guard: k <= 62 so the enumeration index fits a uint64_t.
AssignmentRange enumerate_assignments(const GameGraph& g);

const char* player_name(Player p);

}  // namespace randctl
