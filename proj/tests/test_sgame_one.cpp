#include "doctest.h"

#include <cstdint>
#include <vector>

#include "randctl/explicit_game.hpp"
#include "randctl/generator.hpp"
#include "randctl/reductions.hpp"

#include "helpers.hpp"

using namespace randctl;
using namespace randctl::testing;

namespace {

// Independent oracle for the sticky-coin (toss-as-you-go) reachability value:
// Gauss-Seidel least-fixpoint sweep over the full (ownership, token) cube.
// Chance moves strictly shrink the unassigned set, so the sweep terminates;
// identity grouping and at most 8 relevant nodes.
Rational oracle_value_one_reach(const GameGraph& g, const TossFunction& t,
                                const ReachObjective& obj) {
  auto rel = relevant_nodes(g);
  const size_t k = rel.size(), n = g.node_count();
  REQUIRE(k <= 8);
  std::vector<uint32_t> idx(n, UINT32_MAX);
  for (size_t j = 0; j < k; ++j) idx[rel[j]] = uint32_t(j);
  std::vector<uint64_t> pow3(k + 1, 1);
  for (size_t j = 0; j < k; ++j) pow3[j + 1] = pow3[j] * 3;
  const uint64_t codes = pow3[k];

  std::vector<Rational> val(codes * n, Rational(0));
  auto at = [&](uint64_t code, NodeId v) -> Rational& { return val[code * n + v]; };

  size_t sweeps = 0;
  for (bool changed = true; changed;) {
    changed = false;
    REQUIRE(++sweeps <= codes * n + 10);
    for (uint64_t code = 0; code < codes; ++code)
      for (NodeId v = 0; v < n; ++v) {
        Rational next;
        if (obj.is_target(v)) {
          next = 1;
        } else {
          uint32_t j = idx[v];
          if (j != UINT32_MAX && (code / pow3[j]) % 3 == 0) {
            next = t.prob[v] * at(code + pow3[j], v) +
                   (1 - t.prob[v]) * at(code + 2 * pow3[j], v);
          } else {
            bool maxi = j == UINT32_MAX || (code / pow3[j]) % 3 == 1;
            next = at(code, g.succ[v][0]);
            for (size_t s = 1; s < g.succ[v].size(); ++s) {
              Rational c = at(code, g.succ[v][s]);
              if (maxi ? c > next : c < next) next = c;
            }
          }
        }
        if (next != at(code, v)) {
          at(code, v) = next;
          changed = true;
        }
      }
  }
  return at(0, g.init);
}

const ExplicitEntry* find_entry(const ValueTable& t, uint64_t own_code, NodeId token) {
  for (const auto& e : t.entries)
    if (e.own_code == own_code && e.token == token) return &e;
  return nullptr;
}

ParsedGame small_reach_game(uint64_t seed) {
  GeneratorParams p;
  p.nodes = 5;
  p.max_outdegree = 3;
  p.kind = ObjectiveKind::Reachability;
  p.seed = seed;
  return generate_random_game(p);
}

}  // namespace

TEST_CASE("hub walkthrough: root value and intermediate states") {
  ParsedGame game = hub_game();
  auto result = solve_one(game.graph, game.toss, game.objective);
  CHECK(result.value == make_rational(5, 8));

  REQUIRE(result.table.groups == std::vector<NodeId>{0, 1, 2});
  CHECK(result.table.group_universe == 4);

  // base-3 digit j of own_code is the j-th tossable group: code 1 = v0 Max
  const auto* root = find_entry(result.table, 0, 0);
  REQUIRE(root != nullptr);
  CHECK(root->value == make_rational(5, 8));
  CHECK(root->unassigned == 3);

  const auto* v0_max = find_entry(result.table, 1, 0);
  REQUIRE(v0_max != nullptr);
  CHECK(v0_max->value == make_rational(3, 4));
  CHECK(v0_max->unassigned == 2);

  const auto* v0_min = find_entry(result.table, 2, 0);
  REQUIRE(v0_min != nullptr);
  CHECK(v0_min->value == make_rational(1, 2));

  // decode round-trips through the public ownership representation
  PartialOwnership own = result.table.decode(2);
  CHECK(own.assign[0] == Player::Min);
  CHECK_FALSE(own.assign[1].has_value());
  CHECK_FALSE(own.assign[3].has_value());

  CHECK(result.stats.states == result.table.entries.size());
  CHECK(result.stats.toss_states > 0);
  CHECK(result.stats.ownerships > 0);
  CHECK(result.stats.pgame_solves > 0);
}

TEST_CASE("explicit value matches the least-fixpoint oracle") {
  ParsedGame hub = hub_game();
  CHECK(value_one(hub.graph, hub.toss, hub.objective) ==
        oracle_value_one_reach(hub.graph, hub.toss, std::get<ReachObjective>(hub.objective)));

  int compared = 0;
  for (uint64_t seed = 1; compared < 25; ++seed) {
    ParsedGame game = small_reach_game(seed);
    if (relevant_nodes(game.graph).size() > 4) continue;
    // vary the coin away from 1/2
    const Rational menu[] = {make_rational(1, 2), make_rational(1, 3), make_rational(2, 3),
                             make_rational(1, 5)};
    for (size_t v = 0; v < game.graph.node_count(); ++v)
      game.toss.prob[v] = menu[(seed + v) % 4];
    Rational fast = value_one(game.graph, game.toss, game.objective);
    Rational slow = oracle_value_one_reach(game.graph, game.toss,
                                           std::get<ReachObjective>(game.objective));
    REQUIRE(fast == slow);
    CHECK(fast >= 0);
    CHECK(fast <= 1);
    ++compared;
  }
}

TEST_CASE("chain games halve the value per level") {
  for (int n = 1; n <= 2; ++n) {  // oracle cube is 3^(3n) states
    ParsedGame game = chain_game(n);
    CHECK(oracle_value_one_reach(game.graph, game.toss,
                                 std::get<ReachObjective>(game.objective)) ==
          make_rational(1, 1 << n));
  }
  ParsedGame three = chain_game(3);
  CHECK(value_one(three.graph, three.toss, three.objective) == make_rational(1, 8));
}

TEST_CASE("threshold queries compare against the exact value") {
  ParsedGame game = hub_game();
  CHECK(threshold_one(game.graph, game.toss, game.objective, make_rational(5, 8),
                      PGameMode::Strong));
  CHECK_FALSE(threshold_one(game.graph, game.toss, game.objective, make_rational(5, 8),
                            PGameMode::Weak));
  CHECK(threshold_one(game.graph, game.toss, game.objective, make_rational(1, 2),
                      PGameMode::Weak));
  CHECK_FALSE(threshold_one(game.graph, game.toss, game.objective, make_rational(3, 4),
                            PGameMode::Strong));
  CHECK_THROWS_AS(threshold_one(game.graph, game.toss, game.objective, Rational(2),
                                PGameMode::Strong),
                  std::invalid_argument);
}

TEST_CASE("state-space size bookkeeping") {
  ParsedGame game = hub_game();
  StateCount c = explicit_state_count(game.graph);
  CHECK(c.by_relevant == 108);   // 3^3 * 4
  CHECK(c.by_all_nodes == 324);  // 3^4 * 4
}

TEST_CASE("exploration guard throws before exhausting memory") {
  ParsedGame game = hub_game();
  ExplicitOptions opt;
  opt.max_states = 5;
  CHECK_THROWS_AS(solve_one(game.graph, game.toss, game.objective, opt), std::runtime_error);
}

TEST_CASE("cross-check toggle does not change the value") {
  ParsedGame game = hub_game();
  ExplicitOptions off;
  off.consistency_checks = false;
  CHECK(value_one(game.graph, game.toss, game.objective, off) == make_rational(5, 8));
}

TEST_CASE("stored denominators divide the open coin product") {
  ParsedGame game = hub_game();
  game.toss.prob = {make_rational(1, 3), make_rational(2, 5), make_rational(3, 7),
                    make_rational(1, 2)};
  auto result = solve_one(game.graph, game.toss, game.objective);
  for (const auto& e : result.table.entries) {
    PartialOwnership own = result.table.decode(e.own_code);
    BigInt product = 1;
    for (NodeId gid : result.table.groups)
      if (!own.assign[gid].has_value()) product *= rat_den(game.toss.prob[gid]);
    CHECK(product % rat_den(e.value) == 0);
  }
}

TEST_CASE("parity transform preserves the sticky-coin value") {
  for (uint64_t seed = 40; seed < 48; ++seed) {
    ParsedGame game = small_reach_game(seed);
    const auto& reach = std::get<ReachObjective>(game.objective);
    Objective parity = reach_to_parity(game.graph, reach);
    CHECK(value_one(game.graph, game.toss, game.objective) ==
          value_one(game.graph, game.toss, parity));
  }
}

TEST_CASE("energy transform preserves the sticky-coin value") {
  for (uint64_t seed = 60; seed < 66; ++seed) {
    ParsedGame game = small_reach_game(seed);
    const auto& reach = std::get<ReachObjective>(game.objective);
    Objective energy = reach_to_energy(game.graph, reach, CreditContext::TossAsYouGo);
    CHECK(value_one(game.graph, game.toss, game.objective) ==
          value_one(game.graph, game.toss, energy));
  }
}

TEST_CASE("energy hand examples") {
  // toss decides between a pumping loop and a draining loop
  GameGraph g = build_graph({"a", "pump", "drain"},
                            {{"a", "pump"}, {"a", "drain"}, {"pump", "pump"}, {"drain", "drain"}},
                            "a");
  TossFunction t = TossFunction::uniform(3);
  Objective obj = EnergyObjective{{0, 1, -1}, 0};
  CHECK(value_one(g, t, obj) == make_rational(1, 2));

  // a start weight below the credit kills every play outright
  Objective dead_start = EnergyObjective{{-2, 1, -1}, 1};
  CHECK(value_one(g, t, dead_start) == Rational(0));
  Objective saved_start = EnergyObjective{{-2, 1, -1}, 2};
  CHECK(value_one(g, t, saved_start) == make_rational(1, 2));

  // a biased coin shifts the value accordingly
  t.prob[0] = make_rational(1, 3);
  CHECK(value_one(g, t, obj) == make_rational(1, 3));
}

TEST_CASE("credit monotonicity") {
  Xoshiro256ss rng(99);
  for (uint64_t seed = 200; seed < 206; ++seed) {
    ParsedGame game = small_reach_game(seed);
    EnergyObjective obj;
    obj.weight.resize(game.graph.node_count());
    for (size_t v = 0; v < obj.weight.size(); ++v)
      obj.weight[v] = (long long)below(rng, 5) - 2;
    Rational prev = 0;
    for (long long credit = 0; credit <= 4; credit += 2) {
      obj.credit = credit;
      Rational val = value_one(game.graph, game.toss, {obj});
      CHECK(val >= prev);
      prev = val;
    }
  }
}

TEST_CASE("raising a coin never hurts the favoured player") {
  for (uint64_t seed = 300; seed < 306; ++seed) {
    ParsedGame game = small_reach_game(seed);
    if (relevant_nodes(game.graph).size() > 6) continue;
    Rational base = value_one(game.graph, game.toss, game.objective);
    TossFunction richer = game.toss;
    for (auto& p : richer.prob) p = make_rational(3, 4);
    CHECK(value_one(game.graph, richer, game.objective) >= base);
    TossFunction poorer = game.toss;
    for (auto& p : poorer.prob) p = make_rational(1, 4);
    CHECK(value_one(game.graph, poorer, game.objective) <= base);
  }
}

TEST_CASE("energy product unfolds and clamps the running credit") {
  ParsedGame game = hub_game();
  EnergyProduct prod = energy_product(game.graph, {-1, 2, 2, 0}, 1, 3);
  CHECK(prod.graph.node_count() == 9);
  CHECK(prod.dead == kNoNode);
  CHECK(prod.group[prod.graph.init] == 0);
  CHECK(prod.energy[prod.graph.init] == 0);  // credit 1 plus start weight -1

  long long top_energy = -1;
  bool clamped = false;
  for (NodeId v = 0; v < prod.graph.node_count(); ++v) {
    CHECK(prod.energy[v] >= 0);
    CHECK(prod.energy[v] <= 3);
    CHECK(prod.safety.priority[v] == 0);
    if (prod.group[v] == 1 && prod.energy[v] == 3) clamped = true;
    if (prod.group[v] == 3) top_energy = std::max(top_energy, prod.energy[v]);
  }
  CHECK(clamped);        // (v0,2) -> v1 would reach 4 and clamps to 3
  CHECK(top_energy == 3);

  SUBCASE("an unaffordable start collapses to the dead state") {
    EnergyProduct dead = energy_product(game.graph, {-2, 0, 0, 0}, 1, 3);
    REQUIRE(dead.dead != kNoNode);
    CHECK(dead.graph.init == dead.dead);
    CHECK(dead.safety.priority[dead.dead] == 1);
    CHECK(dead.graph.succ[dead.dead] == std::vector<NodeId>{dead.dead});
  }
  SUBCASE("argument guards") {
    CHECK_THROWS_AS(energy_product(game.graph, {0, 0, 0}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(energy_product(game.graph, {0, 0, 0, 0}, -1, 1), std::invalid_argument);
    CHECK_THROWS_AS(energy_product(game.graph, {0, 0, 0, 0}, 2, 1), std::invalid_argument);
  }
}
