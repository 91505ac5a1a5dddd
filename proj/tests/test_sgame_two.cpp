#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "randctl/sgame_two.hpp"

#include "helpers.hpp"

using namespace randctl;
using namespace randctl::testing;

TEST_CASE("exact enumeration on known games") {
  ParsedGame hub = hub_game();
  CHECK(exact_value_two(hub.graph, hub.toss, hub.objective) == make_rational(1, 2));

  for (int n = 1; n <= 3; ++n) {
    ParsedGame chain = chain_game(n);
    CHECK(exact_value_two(chain.graph, chain.toss, chain.objective) ==
          make_rational(1, 1 << n));
  }

  // starting on the target wins every arena
  GameGraph g = build_graph({"top", "a"}, {{"top", "top"}, {"a", "top"}, {"a", "a"}}, "top");
  CHECK(exact_value_two(g, TossFunction::uniform(2), ReachObjective{{0}}) == Rational(1));
}

TEST_CASE("exact enumeration matches the per-arena oracle") {
  Xoshiro256ss rng(515);
  for (int round = 0; round < 15; ++round) {
    GameGraph g;
    random_arena(g, rng, 5);  // only the graph shape is used
    g.succ[4] = {4};
    Objective obj = ReachObjective{{4}};
    TossFunction t = TossFunction::uniform(5);
    t.prob[0] = make_rational(2, 7);

    Rational expect = 0;
    AssignmentRange range = enumerate_assignments(g);
    for (auto [own, index] : range) {
      Arena a{&g, std::vector<Player>(5, Player::Max)};
      for (NodeId v = 0; v < 5; ++v)
        if (own.assign[v]) a.owner[v] = *own.assign[v];
      if (brute_force_solve(a, obj).max_region[g.init])
        expect += assignment_probability(t, own, range.relevant);
    }
    CHECK(exact_value_two(g, t, obj) == expect);
  }
}

TEST_CASE("uniform-coin values are dyadic with the cube denominator") {
  ParsedGame hub = hub_game();
  Rational v = exact_value_two(hub.graph, hub.toss, hub.objective);
  CHECK((BigInt(1) << 3) % rat_den(v) == 0);
}

TEST_CASE("worker count does not change the result") {
  ParsedGame chain = chain_game(3);
  TwoOptions serial, parallel;
  serial.workers = 1;
  parallel.workers = 4;
  CHECK(exact_value_two(chain.graph, chain.toss, chain.objective, serial) ==
        exact_value_two(chain.graph, chain.toss, chain.objective, parallel));

  auto a = estimate_with_budget(chain.graph, chain.toss, chain.objective, 2000, 77, 500, serial);
  auto b = estimate_with_budget(chain.graph, chain.toss, chain.objective, 2000, 77, 500,
                                parallel);
  CHECK(a.estimate == b.estimate);
  CHECK(a.trace == b.trace);
}

TEST_CASE("relevant-node guard") {
  ParsedGame chain = chain_game(9);  // 27 relevant nodes
  TwoOptions opt;
  CHECK_THROWS_AS(exact_value_two(chain.graph, chain.toss, chain.objective, opt),
                  std::invalid_argument);
}

TEST_CASE("sample-count formula") {
  CHECK(sample_count(make_rational(1, 200), make_rational(1, 20)) == 73778);
  CHECK(sample_count(make_rational(1, 20), make_rational(1, 20)) == 738);
  CHECK(sample_count(make_rational(1, 2), make_rational(1, 2)) == 3);
  CHECK(sample_count(make_rational(1, 10), make_rational(999, 1000)) >= 1);
  CHECK_THROWS_AS(sample_count(Rational(0), make_rational(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(sample_count(Rational(1), make_rational(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(sample_count(make_rational(1, 2), Rational(1)), std::invalid_argument);

  // the count must dominate the real bound ln(2/delta) / (2 eps^2)
  double bound = std::log(2.0 / 0.05) / (2 * 0.005 * 0.005);
  CHECK(double(73778) >= bound);
  CHECK(double(73778) - bound < 1.0);
}

TEST_CASE("logarithm enclosures bracket the true value") {
  struct Probe {
    Rational y;
    double expect;
  } probes[] = {{Rational(2), std::log(2.0)},
                {make_rational(3, 2), std::log(1.5)},
                {Rational(40), std::log(40.0)},
                {make_rational(401, 400), std::log(401.0 / 400.0)}};
  for (const auto& probe : probes) {
    auto [lo, hi] = ln_enclosure(probe.y);
    CHECK(lo < hi);
    CHECK(lo <= Rational(probe.expect + 1e-12));
    CHECK(hi >= Rational(probe.expect - 1e-12));
  }
  CHECK_THROWS_AS(ln_enclosure(Rational(1)), std::invalid_argument);
}

TEST_CASE("sampled assignments are complete, reproducible and unbiased") {
  ParsedGame hub = hub_game();
  auto relevant = relevant_nodes(hub.graph);
  TossFunction t = hub.toss;
  t.prob[0] = make_rational(1, 3);

  Xoshiro256ss a(42), b(42);
  for (int i = 0; i < 50; ++i) {
    PartialOwnership sa = sample_assignment(t, relevant, 4, a);
    PartialOwnership sb = sample_assignment(t, relevant, 4, b);
    CHECK(sa == sb);
    CHECK(sa.assigned_count() == 3);
    CHECK_FALSE(sa.assign[3].has_value());
  }

  // frequency of Max on the biased coin: 1/3 within 3 sigma over 60000 draws
  Xoshiro256ss rng(7);
  int hits = 0;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i)
    if (sample_assignment(t, relevant, 4, rng).assign[0] == Player::Max) ++hits;
  double freq = double(hits) / draws;
  CHECK(freq > 1.0 / 3 - 3 * 0.0020);
  CHECK(freq < 1.0 / 3 + 3 * 0.0020);
}

TEST_CASE("estimator report bookkeeping") {
  ParsedGame hub = hub_game();
  auto report = estimate_value_two(hub.graph, hub.toss, hub.objective, make_rational(1, 20),
                                   make_rational(1, 20), 42);
  CHECK(report.samples == 738);
  CHECK(report.epsilon == make_rational(1, 20));
  CHECK(report.delta == make_rational(1, 20));
  CHECK(report.seed == 42);
  CHECK(report.estimate >= 0);
  CHECK(report.estimate <= 1);
  CHECK(rat_den(report.estimate) <= 738);
  REQUIRE(report.trace.size() == 1);  // stride 0 keeps only the endpoint
  CHECK(report.trace[0].first == 738);
  CHECK(report.trace[0].second == report.estimate);

  // same seed, same answer; budget interface agrees with the count interface
  auto again = estimate_with_budget(hub.graph, hub.toss, hub.objective, 738, 42);
  CHECK(again.estimate == report.estimate);
  CHECK(again.epsilon == Rational(0));
  CHECK(again.delta == Rational(0));

  auto strided = estimate_with_budget(hub.graph, hub.toss, hub.objective, 250, 42, 100);
  REQUIRE(strided.trace.size() == 3);
  CHECK(strided.trace[0].first == 100);
  CHECK(strided.trace[1].first == 200);
  CHECK(strided.trace[2].first == 250);
  CHECK(strided.trace[2].second == strided.estimate);

  CHECK_THROWS_AS(estimate_with_budget(hub.graph, hub.toss, hub.objective, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("degenerate games estimate exactly") {
  // value 1: init is the target
  GameGraph g = build_graph({"top", "a"}, {{"top", "top"}, {"a", "top"}, {"a", "a"}}, "top");
  auto one = estimate_with_budget(g, TossFunction::uniform(2), ReachObjective{{0}}, 500, 9);
  CHECK(one.estimate == Rational(1));

  // value 0: the target is unreachable
  GameGraph h = build_graph({"a", "b", "top"},
                            {{"a", "b"}, {"a", "a"}, {"b", "a"}, {"b", "b"}, {"top", "top"}},
                            "a");
  auto zero = estimate_with_budget(h, TossFunction::uniform(3), ReachObjective{{2}}, 500, 9);
  CHECK(zero.estimate == Rational(0));
}

TEST_CASE("estimates concentrate near the exact value") {
  ParsedGame hub = hub_game();
  int close = 0;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    auto r = estimate_with_budget(hub.graph, hub.toss, hub.objective, 738, 1000 + seed);
    Rational err = r.estimate - make_rational(1, 2);
    if (err < 0) err = -err;
    if (err <= make_rational(1, 20)) ++close;
  }
  CHECK(close >= 36);  // Hoeffding promises >= 95% on average
}
