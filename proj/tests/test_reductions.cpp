#include "doctest.h"

#include <string>
#include <vector>

#include "randctl/explicit_game.hpp"
#include "randctl/reductions.hpp"
#include "randctl/sgame_two.hpp"

#include "helpers.hpp"

using namespace randctl;
using namespace randctl::testing;

namespace {

bool has_edge(const GameGraph& g, const std::string& u, const std::string& v) {
  auto a = g.find(u), b = g.find(v);
  REQUIRE(a);
  REQUIRE(b);
  for (NodeId w : g.succ[*a])
    if (w == *b) return true;
  return false;
}

}  // namespace

TEST_CASE("round-probability recurrences and closed form") {
  // independent recomputation of the win/handoff split per quantifier round
  Rational round_win = make_rational(1, 2) + make_rational(1, 4) + make_rational(1, 64);
  Rational p = 0, q = 1;
  for (int n = 1; n <= 64; ++n) {
    Rational next_p = p + q * round_win;
    Rational next_q = q / 64;
    QbfThreshold th = qbf_threshold(n);
    CHECK(th.q == next_q / 4);
    CHECK(th.p == next_p + next_q / 2);
    CHECK(th.theta == th.p + th.q / 2);
    // closed form: the handoff probability after n rounds is 2^(-6n)
    BigInt denom = BigInt(1) << (6 * n);
    CHECK(next_q == Rational(BigInt(1), denom));
    p = next_p;
    q = next_q;
  }
  QbfThreshold one = qbf_threshold(1);
  CHECK(one.p == make_rational(99, 128));
  CHECK(one.q == make_rational(1, 256));
  CHECK(one.theta == make_rational(397, 512));
  CHECK_THROWS_AS(qbf_threshold(0), std::invalid_argument);
}

TEST_CASE("formula validation") {
  CHECK_FALSE(validate_pcnf(pcnf1({{1, 2}})).has_value());
  CHECK(validate_pcnf(Pcnf{0, {{1}}}).has_value());     // no quantifier pair
  CHECK(validate_pcnf(pcnf1({})).has_value());          // no clauses
  CHECK(validate_pcnf(pcnf1({{}})).has_value());        // empty clause
  CHECK(validate_pcnf(pcnf1({{3}})).has_value());       // literal out of range
  CHECK(validate_pcnf(pcnf1({{0}})).has_value());       // zero literal
  CHECK(validate_pcnf(pcnf1({{-3}})).has_value());
  CHECK_FALSE(validate_pcnf(Pcnf{2, {{1, -4}, {3}}}).has_value());
}

TEST_CASE("formula oracle on hand-evaluated instances") {
  // forall x exists y ...
  CHECK(qbf_oracle(pcnf1({{1, 2}})));            // x or y
  CHECK(qbf_oracle(pcnf1({{2}})));               // y
  CHECK(qbf_oracle(pcnf1({{1, 2}, {-1, -2}})));  // y := not x
  CHECK(qbf_oracle(pcnf1({{-1, 2}, {1, -2}})));  // y := x
  CHECK_FALSE(qbf_oracle(pcnf1({{1}})));         // x is forced false sometimes
  CHECK_FALSE(qbf_oracle(pcnf1({{-1}})));
  CHECK_FALSE(qbf_oracle(pcnf1({{2}, {-2}})));   // y cannot be both
  CHECK_FALSE(qbf_oracle(pcnf1({{1, 2}, {1, -2}})));  // x false kills one clause

  // two rounds: y1 echoes x1, y2 echoes x2
  Pcnf two;
  two.pairs = 2;
  two.clauses = {{-1, 2}, {1, -2}, {-3, 4}, {3, -4}};
  CHECK(qbf_oracle(two));
  two.clauses.push_back({2, 4});  // additionally y1 or y2, fails when both x false
  CHECK_FALSE(qbf_oracle(two));

  Pcnf guard;
  guard.pairs = 9;
  guard.clauses = {{1}};
  CHECK_THROWS_AS(qbf_oracle(guard), std::invalid_argument);
}

TEST_CASE("formula game graph layout") {
  // single pair, single clause (x or y)
  QbfGame game = qbf_to_game(pcnf1({{1, 2}}));
  CHECK(game.graph.node_count() == 14);  // 10 per pair + 1 clause + and/top/bot
  CHECK(game.theta == make_rational(397, 512));
  CHECK(game.toss.prob == std::vector<Rational>(14, make_rational(1, 2)));
  CHECK(game.graph.init == *game.graph.find("ax1"));
  REQUIRE(game.objective.targets.size() == 1);
  CHECK(game.objective.targets[0] == *game.graph.find("top"));

  // universal choice: pick a polarity of x or bail to the target
  CHECK(has_edge(game.graph, "ax1", "x1"));
  CHECK(has_edge(game.graph, "ax1", "nx1"));
  CHECK(has_edge(game.graph, "ax1", "top"));
  // literal nodes hand over to the existential gadget
  CHECK(has_edge(game.graph, "x1", "ey1"));
  CHECK(has_edge(game.graph, "x1", "top"));
  // the three-step delay chain of the existential choice
  CHECK(has_edge(game.graph, "ey1", "ypp1"));
  CHECK(has_edge(game.graph, "ey1", "nypp1"));
  CHECK(has_edge(game.graph, "ey1", "bot"));
  CHECK(has_edge(game.graph, "ypp1", "yp1"));
  CHECK(has_edge(game.graph, "ypp1", "bot"));
  CHECK(has_edge(game.graph, "yp1", "y1"));
  CHECK(has_edge(game.graph, "yp1", "bot"));
  CHECK(has_edge(game.graph, "y1", "and"));
  CHECK(has_edge(game.graph, "y1", "top"));
  // the conjunction fans out to clauses, clauses to negated literals
  CHECK(has_edge(game.graph, "and", "c1"));
  CHECK(has_edge(game.graph, "and", "top"));
  CHECK(has_edge(game.graph, "c1", "nx1"));
  CHECK(has_edge(game.graph, "c1", "ny1"));
  CHECK(has_edge(game.graph, "c1", "bot"));
  // sinks absorb
  CHECK(game.graph.succ[*game.graph.find("top")] ==
        std::vector<NodeId>{*game.graph.find("top")});
  CHECK(game.graph.succ[*game.graph.find("bot")] ==
        std::vector<NodeId>{*game.graph.find("bot")});

  // two pairs, three clauses
  Pcnf two;
  two.pairs = 2;
  two.clauses = {{1, 2, -4}, {-3, 2}, {3, 4}};
  QbfGame big = qbf_to_game(two);
  CHECK(big.graph.node_count() == 26);  // 20 + 3 + 3
  CHECK(has_edge(big.graph, "y1", "ax2"));       // hand over to the next round
  CHECK(has_edge(big.graph, "ny1", "ax2"));
  CHECK(has_edge(big.graph, "y2", "and"));
  CHECK(has_edge(big.graph, "c1", "nx1"));       // negations of x1, y1, not-y2
  CHECK(has_edge(big.graph, "c1", "ny1"));
  CHECK(has_edge(big.graph, "c1", "y2"));
  CHECK(has_edge(big.graph, "c2", "x2"));
  CHECK(has_edge(big.graph, "c2", "ny1"));
  CHECK(has_edge(big.graph, "c3", "nx2"));
  CHECK(has_edge(big.graph, "c3", "ny2"));
  CHECK_FALSE(validate(big.graph, Objective{big.objective}).has_value());
}

TEST_CASE("satisfiability separates the game value across the threshold") {
  // smallest pair of instances, checked end to end through the sticky-coin value
  QbfThreshold th = qbf_threshold(1);
  Rational false_cap = th.p + th.q / 4;

  QbfGame sat = qbf_to_game(pcnf1({{1, 2}}));
  Rational sat_value = value_one(sat.graph, sat.toss, Objective{sat.objective});
  CHECK(sat_value >= th.theta);

  QbfGame unsat = qbf_to_game(pcnf1({{2}, {-2}}));
  Rational unsat_value = value_one(unsat.graph, unsat.toss, Objective{unsat.objective});
  CHECK(unsat_value <= false_cap);
  CHECK(unsat_value < sat_value);
}

TEST_CASE("reliability validation") {
  ReliabilityInstance inst = diamond_instance();
  CHECK_FALSE(validate_reliability(inst).has_value());
  SUBCASE("terminals must differ") {
    inst.t = inst.s;
    CHECK(validate_reliability(inst).has_value());
  }
  SUBCASE("terminals must exist") {
    inst.t = 9;
    CHECK(validate_reliability(inst).has_value());
  }
  SUBCASE("probability strictly inside the unit interval") {
    inst.p = Rational(1);
    CHECK(validate_reliability(inst).has_value());
    inst.p = Rational(0);
    CHECK(validate_reliability(inst).has_value());
  }
  SUBCASE("duplicate edges rejected") {
    inst.graph.add_edge(0, 1);
    CHECK(validate_reliability(inst).has_value());
  }
}

TEST_CASE("reliability oracle on hand instances") {
  ReliabilityInstance diamond = diamond_instance();
  CHECK(reliability_oracle(diamond) == make_rational(15, 64));

  // single edge s -> t: both the implicit entry edge and the real one must be up
  ReliabilityInstance single;
  single.graph = build_graph({"s", "t"}, {{"s", "t"}}, "s");
  single.s = 0;
  single.t = 1;
  single.p = make_rational(1, 3);
  CHECK(reliability_oracle(single) == make_rational(1, 9));

  // no path at all
  ReliabilityInstance cut;
  cut.graph = build_graph({"s", "t", "z"}, {{"s", "z"}}, "s");
  cut.s = 0;
  cut.t = 1;
  cut.p = make_rational(1, 2);
  CHECK(reliability_oracle(cut) == Rational(0));

  SUBCASE("edge guard") {
    CHECK_THROWS_AS(reliability_oracle(diamond, 4), std::invalid_argument);
  }
}

TEST_CASE("reliability game mirrors edge presence by ownership") {
  ReliabilityInstance diamond = diamond_instance();
  ReliabilityGame game = reliability_to_game(diamond);
  // one node per edge plus init/top/bot
  CHECK(game.graph.node_count() == 8);
  CHECK(game.toss.prob == std::vector<Rational>(8, make_rational(1, 2)));
  CHECK(has_edge(game.graph, "init", "e_n1_n2"));
  CHECK(has_edge(game.graph, "init", "e_n1_n3"));
  CHECK(has_edge(game.graph, "init", "bot"));
  CHECK(has_edge(game.graph, "e_n1_n2", "e_n2_n3"));
  CHECK(has_edge(game.graph, "e_n1_n2", "e_n2_n4"));
  CHECK(has_edge(game.graph, "e_n2_n4", "top"));
  CHECK(has_edge(game.graph, "e_n2_n4", "bot"));
  CHECK_FALSE(validate(game.graph, Objective{game.objective}).has_value());

  CHECK(exact_value_two(game.graph, game.toss, Objective{game.objective}) ==
        make_rational(15, 64));

  // edges into the start terminal carry no information and are dropped from
  // the game, while the oracle enumerates them; the values still agree
  ReliabilityInstance looped = diamond;
  looped.graph.add_edge(3, 0);  // n4 -> n1
  ReliabilityGame looped_game = reliability_to_game(looped);
  CHECK(looped_game.graph.node_count() == 8);  // the extra edge adds no node
  CHECK(exact_value_two(looped_game.graph, looped_game.toss, Objective{looped_game.objective}) ==
        reliability_oracle(looped));
}

TEST_CASE("objective transforms") {
  ParsedGame hub = hub_game();
  const auto& reach = std::get<ReachObjective>(hub.objective);

  ParityObjective parity = reach_to_parity(hub.graph, reach);
  CHECK(parity.priority == std::vector<int>{1, 1, 1, 2});

  EnergyObjective tight = reach_to_energy(hub.graph, reach, CreditContext::TossAtStart);
  CHECK(tight.weight == std::vector<long long>{-1, -1, -1, 1});
  CHECK(tight.credit == 5);  // |V| + 1

  EnergyObjective roomy = reach_to_energy(hub.graph, reach, CreditContext::TossAsYouGo);
  CHECK(roomy.weight == tight.weight);
  CHECK(roomy.credit == 15);  // (|V|+1)(|V|+2)/2

  SUBCASE("targets must be absorbing") {
    GameGraph g = build_graph({"a", "t"}, {{"a", "t"}, {"t", "a"}}, "a");
    CHECK_THROWS_AS(reach_to_parity(g, ReachObjective{{1}}), std::invalid_argument);
    CHECK_THROWS_AS(reach_to_energy(g, ReachObjective{{1}}, CreditContext::TossAtStart),
                    std::invalid_argument);
  }
}
