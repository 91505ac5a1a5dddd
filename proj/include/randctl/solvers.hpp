#pragma once

#include <optional>
#include <vector>

#include "randctl/game.hpp"

namespace randctl {

// Winning regions plus memoryless witness strategies.  max_strategy[v] is the
// chosen successor for Max-owned v inside the Max region (kNoNode elsewhere);
// min_strategy likewise for Min-owned nodes outside the Max region.  The
// choice among equally good successors is deterministic.
struct SolveResult {
  std::vector<bool> max_region;
  std::vector<NodeId> max_strategy;
  std::vector<NodeId> min_strategy;

  std::vector<bool> min_region() const {
    std::vector<bool> out(max_region.size());
    for (size_t v = 0; v < out.size(); ++v) out[v] = !max_region[v];
    return out;
  }
};

// Player-`p` attractor of `target` inside the arena: the least set containing
// the targets and closed under "p can enter / opponent cannot avoid".  When
// `strategy` is given it receives, for p-owned nodes added by the fixpoint, the
// lowest-index successor that entered strictly earlier (targets untouched).
// `rank_out`, when given, receives the insertion round (targets have rank 0,
// nodes outside the attractor keep rank SIZE_MAX).
std::vector<bool> attractor(const Arena& a, const std::vector<bool>& target, Player p,
                            std::vector<NodeId>* strategy = nullptr,
                            std::vector<size_t>* rank_out = nullptr);

SolveResult solve_reachability(const Arena& a, const ReachObjective& obj);

// Zielonka's recursive algorithm; recursion depth is bounded by the number of
// distinct priorities.
SolveResult solve_parity(const Arena& a, const ParityObjective& obj);

inline constexpr long long kInfiniteCredit = std::numeric_limits<long long>::max();

// Minimal initial credit per node under optimal play (kInfiniteCredit when no
// finite credit suffices).  Computed by progress-measure lifting capped at
// |V| * max|weight|; every finite value is at most that cap.  `lift_time`,
// when given, receives the position of each node's final lift in the
// computation (0 for nodes never lifted); strategy extraction uses it to
// follow the support of a credit requirement back to its cause.
std::vector<long long> min_credit(const Arena& a, const std::vector<long long>& weight,
                                  std::vector<size_t>* lift_time = nullptr);

SolveResult solve_energy(const Arena& a, const EnergyObjective& obj);

SolveResult solve(const Arena& a, const Objective& obj);

enum class PGameMode : uint8_t {
  Strong,  // boundary value >= threshold wins for Max
  Weak,    // boundary value >  threshold wins for Max
};

// Boundary nodes (those with a value set) are cut off and replaced by
// absorbing sinks classified as winning or losing for Max by comparing their
// value against the threshold under the given mode.
struct BoundarySpec {
  std::vector<std::optional<Rational>> values;  // size = node count, each in [0,1]
  PGameMode mode = PGameMode::Strong;
  Rational threshold;

  bool is_boundary(NodeId v) const { return v < values.size() && values[v].has_value(); }
};

// Solve the threshold game: the graph with boundary nodes turned into sinks
// (self-loop only).  Winning sinks join the objective's winning side
// (reachability: extra targets; parity: priority 0; energy: weight +1) and
// losing sinks the losing side (non-target; priority 1; weight -1).
SolveResult solve_p_game(const Arena& a, const Objective& obj, const BoundarySpec& boundary);

// Exhaustive memoryless strategy-pair enumeration; independent oracle for the
// other solvers.  Throws when the node count exceeds `max_nodes`.
SolveResult brute_force_solve(const Arena& a, const Objective& obj, size_t max_nodes = 12);

// Winner of the unique play from `start` under the two fixed strategies
// (choice[v] = the successor node taken from v).  Used by tests to check
// that extracted strategies witness their regions.
Player play_winner(const Arena& a, const Objective& obj, NodeId start,
                   const std::vector<NodeId>& successor_choice);

}  // namespace randctl
