#pragma once

#include <optional>
#include <vector>

#include "randctl/game.hpp"

namespace randctl {

// Quantified boolean formula with strictly alternating prefix
// forall x1 exists y1 ... forall xn exists yn and a CNF matrix.
// Literal encoding: variable x_i is 2i-1, y_i is 2i; negation by sign.
struct Pcnf {
  int pairs = 0;                          // n
  std::vector<std::vector<int>> clauses;  // each nonempty
};

std::optional<ValidationError> validate_pcnf(const Pcnf& f);

// Probabilities of the QBF game graph under the uniform coin: p is the
// probability that Max wins before the token reaches a clause node, q the
// probability of reaching a clause node with Max in control, and
// theta = p + q/2 the satisfiability threshold.  A satisfiable formula gives
// a game of value >= theta; an unsatisfiable one of value <= p + q/4.
struct QbfThreshold {
  Rational p, q, theta;
};

QbfThreshold qbf_threshold(int pairs);

struct QbfGame {
  GameGraph graph;
  TossFunction toss;  // uniformly 1/2
  ReachObjective objective;
  Rational theta;
};

// Assignment game over the formula: universal choice nodes pick x_i or its
// negation, existential gadget chains pick y_i, the conjunction node fans out
// to clauses, and each clause points at the negations of its literals.
QbfGame qbf_to_game(const Pcnf& f);

// Exhaustive minimax over the alternating assignment tree (guard: pairs <= 8).
bool qbf_oracle(const Pcnf& f);

// Adjusted two-terminal reliability: every edge of `graph` is independently
// present with probability p, and the (implicit) incoming edge of s as well;
// asked is p * Pr[s reaches t].  `graph` is a plain digraph here - dead ends
// are permitted and init is ignored.
struct ReliabilityInstance {
  GameGraph graph;
  NodeId s = 0, t = 0;
  Rational p;
};

std::optional<ValidationError> validate_reliability(const ReliabilityInstance& inst);

struct ReliabilityGame {
  GameGraph graph;
  TossFunction toss;  // constant p
  ReachObjective objective;
};

// One node per edge of the instance (edges into s carry no information for
// s -> t reachability and are dropped), plus init/top/bot; node ownership
// mimics edge presence, so the toss-at-start value equals the adjusted
// reliability.
ReliabilityGame reliability_to_game(const ReliabilityInstance& inst);

// p * sum over all edge subsets with s -> t connectivity of the subset
// probability, computed exactly (guard: at most max_edges edges).
Rational reliability_oracle(const ReliabilityInstance& inst, size_t max_edges = 24);

// Reachability -> parity: targets get priority 2, everything else 1.
// Requires every target to carry a self-loop (targets are absorbing).
ParityObjective reach_to_parity(const GameGraph& g, const ReachObjective& reach);

// Reachability -> energy: weight +1 on targets, -1 elsewhere.  The credit
// must outlast the longest useful play prefix, which differs per variant:
// toss-at-start strategies are memoryless so |V|+1 suffices, toss-as-you-go
// strategies may detour after each fresh toss so (|V|+1)(|V|+2)/2 is used.
enum class CreditContext { TossAsYouGo, TossAtStart };

EnergyObjective reach_to_energy(const GameGraph& g, const ReachObjective& reach,
                                CreditContext context);

}  // namespace randctl
