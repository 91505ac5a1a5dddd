#pragma once

#include <array>
#include <optional>
#include <vector>

#include "randctl/game.hpp"

namespace randctl {

// A play init = stem[0], ..., stem.back() = cycle[0], cycle[1], ... repeating
// cycle forever (cycle.front() == cycle.back()).  Witnesses that Max does NOT
// win surely: the lasso violates the objective.
struct LassoWitness {
  std::vector<NodeId> stem;   // starts at init, ends at the cycle entry
  std::vector<NodeId> cycle;  // closed walk, first == last
};

// Checks structural validity and that the lasso play violates the objective
// (reachability: no target visited; parity: odd top cycle priority; energy:
// a prefix dip below zero or a negative cycle sum).  Independent of sure_win.
bool lasso_violates(const GameGraph& g, const Objective& obj, const LassoWitness& w);

struct SureWinResult {
  bool sure = false;
  std::optional<LassoWitness> witness;  // present iff !sure
};

// Max wins surely iff *every* play from init satisfies the objective --
// ownership is irrelevant, so this is a pure graph search for a violating
// lasso (deterministic: lowest-index tie-breaks).
SureWinResult sure_win(const GameGraph& g, const Objective& obj);

// Random-turn reachability is won almost surely iff no node reachable from
// init is a dead end for the targets (every reachable node can still reach
// the target set).
bool almost_sure_rtg_reach(const GameGraph& g, const ReachObjective& obj);

struct QualitativeOneTwo {
  bool almost_sure = false;
  bool sure = false;
};

// In both coin-toss variants, ownership sticks once assigned, so any violating
// lasso has positive probability: almost-sure and sure winning coincide.
QualitativeOneTwo qualitative_one_two(const GameGraph& g, const Objective& obj);

struct TranslationResult {
  StochasticArena arena;
  Objective lifted;
  // original node -> (random copy, max copy, min copy); for reachability
  // targets all three entries are the kept original node
  std::vector<std::array<NodeId, 3>> copies;
};

// Expand a random-turn game into a turn-based stochastic arena: each tossed
// node becomes a random copy branching to a Max copy (probability t(v)) and a
// Min copy; owned copies inherit the successors, redirected to random copies.
// Reachability targets are kept as single absorbing nodes.  The random copy
// carries the original priority and weight 0; owned copies carry the original
// weight.
TranslationResult translate_rtg_to_stochastic(const GameGraph& g, const TossFunction& t,
                                              const Objective& obj);

}  // namespace randctl
