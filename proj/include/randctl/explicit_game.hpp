#pragma once

#include <optional>
#include <vector>

#include "randctl/game.hpp"
#include "randctl/solvers.hpp"

namespace randctl {

// One reachable state of the toss-as-you-go explicit game: a partial
// ownership of the tossable groups plus the token position.  own_code is
// base-3 over the relevant groups in ascending group order (digit j for the
// j-th relevant group: 0 unassigned, 1 Max, 2 Min).
struct ExplicitEntry {
  uint64_t own_code = 0;
  NodeId token = kNoNode;
  Rational value;
  uint32_t unassigned = 0;  // relevant groups still untossed in own_code
};

struct ValueTable {
  std::vector<NodeId> groups;      // relevant group ids, ascending
  size_t group_universe = 0;       // ownership domain size (original node count)
  std::vector<ExplicitEntry> entries;

  // expand a compact code into the public base-3-per-node representation
  PartialOwnership decode(uint64_t own_code) const;
};

struct ExplicitOptions {
  size_t max_states = 2'000'000;   // exploration guard
  bool consistency_checks = true;  // per-layer threshold-game cross-checks
};

struct ExplicitStats {
  size_t states = 0;
  size_t toss_states = 0;
  size_t ownerships = 0;     // distinct partial ownerships with owned states
  size_t pgame_solves = 0;
};

struct ExplicitResult {
  Rational value;
  ValueTable table;
  ExplicitStats stats;
};

// Explicit-game input where several graph nodes may share one coin: tossing a
// group fixes the owner of every node in it.  Plain games use the identity
// grouping; the energy product maps each (v, e) copy back to v.  Objective
// must be reachability or parity (energy is compiled into the product first).
struct EngineInput {
  const GameGraph* graph = nullptr;
  Objective objective;
  std::vector<NodeId> group_of;      // node -> group id
  std::vector<Rational> group_toss;  // group id -> toss probability
  size_t group_universe = 0;
};

ExplicitResult solve_explicit(const EngineInput& in, const ExplicitOptions& opt = {});

// Value of the toss-as-you-go game from init.  Energy objectives run on the
// energy product with an adaptive clamp (see value_one_energy).
Rational value_one(const GameGraph& g, const TossFunction& t, const Objective& obj,
                   const ExplicitOptions& opt = {});

ExplicitResult solve_one(const GameGraph& g, const TossFunction& t, const Objective& obj,
                         const ExplicitOptions& opt = {});

// Strong: value >= p.  Weak: value > p.
bool threshold_one(const GameGraph& g, const TossFunction& t, const Objective& obj,
                   const Rational& p, PGameMode mode, const ExplicitOptions& opt = {});

// Energy-credit unfolding: alive states (v, e) with e the clamped running
// energy after charging w(v), one absorbing `dead` state entered whenever the
// energy would drop below zero, and the safety condition "never reach dead"
// encoded as the two-priority parity objective (alive 0, dead 1).  Only
// states reachable from the initial one are materialized.
struct EnergyProduct {
  GameGraph graph;
  std::vector<NodeId> group;       // product node -> original node (dead -> itself)
  std::vector<long long> energy;   // clamped energy per product node (dead: -1)
  NodeId dead = kNoNode;           // kNoNode when no transition can die
  ParityObjective safety;
};

EnergyProduct energy_product(const GameGraph& g, const std::vector<long long>& weight,
                             long long credit, long long cap);

// Solve at clamp cap C = credit + |V|*max|w| and at 2C; accept when the two
// values agree, otherwise double the cap (at most `retries` times).
Rational value_one_energy(const GameGraph& g, const TossFunction& t, const EnergyObjective& obj,
                          const ExplicitOptions& opt = {}, int retries = 6);

struct StateCount {
  BigInt by_relevant;   // 3^(relevant nodes) * nodes
  BigInt by_all_nodes;  // 3^nodes * nodes
};

// Size of the explicit state space (ownership layers times token positions),
// under the relevant-node convention and with every node tossable.
StateCount explicit_state_count(const GameGraph& g);

}  // namespace randctl
