#pragma once

// Shared fixtures: small hand-built games and seeded random instances used by
// the unit suites and the acceptance harness.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "randctl/game.hpp"
#include "randctl/io.hpp"
#include "randctl/reductions.hpp"
#include "randctl/rng.hpp"

namespace randctl::testing {

inline GameGraph build_graph(const std::vector<std::string>& names,
                             const std::vector<std::pair<std::string, std::string>>& edges,
                             const std::string& init) {
  GameGraph g;
  for (const auto& n : names) g.add_node(n);
  for (const auto& [u, v] : edges) {
    auto a = g.find(u), b = g.find(v);
    if (!a || !b) throw std::logic_error("fixture references unknown node");
    g.add_edge(*a, *b);
  }
  auto i = g.find(init);
  if (!i) throw std::logic_error("fixture init unknown");
  g.init = *i;
  return g;
}

// Four-node hub: v0 picks a gateway, each gateway either returns to the hub
// or escapes to the absorbing target.  Uniform coin.  Known values: 5/8
// (toss-as-you-go), 1/2 (toss-at-start), almost-sure but not sure under
// fresh tosses.
inline ParsedGame hub_game() {
  ParsedGame game;
  game.name = "hub";
  game.graph = build_graph({"v0", "v1", "v2", "top"},
                           {{"v0", "v1"},
                            {"v0", "v2"},
                            {"v1", "v0"},
                            {"v1", "top"},
                            {"v2", "v0"},
                            {"v2", "top"},
                            {"top", "top"}},
                           "v0");
  game.toss = TossFunction::uniform(4);
  game.objective = ReachObjective{{*game.graph.find("top")}};
  return game;
}

// Chain of n levels: level node i picks one of two relays (ia, ib), each
// relay either self-loops forever or advances to the next level; level n
// feeds the absorbing target.  Toss-at-start value is exactly (1/2)^n, and
// optimal play needs a different strategy for exponentially many arenas.
inline ParsedGame chain_game(int n) {
  ParsedGame game;
  game.name = "chain-" + std::to_string(n);
  GameGraph& g = game.graph;
  std::vector<NodeId> level(n), relay_a(n), relay_b(n);
  for (int i = 0; i < n; ++i) {
    level[i] = g.add_node(std::to_string(i + 1));
    relay_a[i] = g.add_node(std::to_string(i + 1) + "a");
    relay_b[i] = g.add_node(std::to_string(i + 1) + "b");
  }
  NodeId top = g.add_node("top");
  for (int i = 0; i < n; ++i) {
    NodeId next = i + 1 < n ? level[i + 1] : top;
    g.add_edge(level[i], relay_a[i]);
    g.add_edge(level[i], relay_b[i]);
    g.add_edge(relay_a[i], relay_a[i]);
    g.add_edge(relay_a[i], next);
    g.add_edge(relay_b[i], relay_b[i]);
    g.add_edge(relay_b[i], next);
  }
  g.add_edge(top, top);
  g.init = level[0];
  game.toss = TossFunction::uniform(g.node_count());
  game.objective = ReachObjective{{top}};
  return game;
}

// Two-terminal diamond with a chord: 1 -> {2,3}, 2 -> {3,4}, 3 -> 4.
// With edge probability 1/2 the adjusted reliability is 15/64.
inline ReliabilityInstance diamond_instance() {
  ReliabilityInstance inst;
  inst.graph = build_graph({"n1", "n2", "n3", "n4"},
                           {{"n1", "n2"}, {"n1", "n3"}, {"n2", "n3"}, {"n2", "n4"}, {"n3", "n4"}},
                           "n1");
  inst.s = 0;
  inst.t = 3;
  inst.p = make_rational(1, 2);
  return inst;
}

// Uniform random integer in [0, bound) by rejection; bound >= 1.
inline uint64_t below(Xoshiro256ss& rng, uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t u;
  do u = rng.next();
  while (u >= limit);
  return u % bound;
}

// Random arena (graph + total ownership) with every node owning 1..max_out
// distinct successors; independent of the library's game generator.
inline Arena random_arena(GameGraph& storage, Xoshiro256ss& rng, size_t nodes,
                          size_t max_out = 3) {
  storage = GameGraph{};
  for (size_t v = 0; v < nodes; ++v) storage.add_node("u" + std::to_string(v));
  std::vector<NodeId> pool(nodes);
  for (size_t v = 0; v < nodes; ++v) {
    for (size_t j = 0; j < nodes; ++j) pool[j] = NodeId(j);
    size_t out = 1 + below(rng, max_out < nodes ? max_out : nodes);
    for (size_t j = 0; j < out; ++j) {
      size_t pick = j + below(rng, nodes - j);
      std::swap(pool[j], pool[pick]);
      storage.add_edge(NodeId(v), pool[j]);
    }
    std::sort(storage.succ[v].begin(), storage.succ[v].end());
  }
  storage.init = 0;
  Arena a;
  a.graph = &storage;
  a.owner.resize(nodes);
  for (size_t v = 0; v < nodes; ++v)
    a.owner[v] = below(rng, 2) ? Player::Min : Player::Max;
  return a;
}

inline ParityObjective random_parity(Xoshiro256ss& rng, size_t nodes, int bound = 6) {
  ParityObjective obj;
  obj.priority.resize(nodes);
  for (size_t v = 0; v < nodes; ++v) obj.priority[v] = int(below(rng, uint64_t(bound)));
  return obj;
}

inline EnergyObjective random_energy(Xoshiro256ss& rng, size_t nodes, long long bound = 3,
                                     long long max_credit = 4) {
  EnergyObjective obj;
  obj.weight.resize(nodes);
  for (size_t v = 0; v < nodes; ++v)
    obj.weight[v] = (long long)(below(rng, uint64_t(2 * bound + 1))) - bound;
  obj.credit = (long long)below(rng, uint64_t(max_credit + 1));
  return obj;
}

// Single-pair prenex CNF over x (universal) and y (existential); literals
// use the library encoding x = 1, y = 2, negation by sign.
inline Pcnf pcnf1(const std::vector<std::vector<int>>& clauses) {
  Pcnf f;
  f.pairs = 1;
  f.clauses = clauses;
  return f;
}

}  // namespace randctl::testing
