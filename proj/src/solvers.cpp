#include "randctl/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <stdexcept>

namespace randctl {

namespace {

std::vector<std::vector<NodeId>> predecessors(const GameGraph& g) {
  std::vector<std::vector<NodeId>> pred(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (NodeId u : g.succ[v]) pred[u].push_back(v);
  return pred;
}

// Attractor restricted to `active`; targets are assumed active.
std::vector<bool> attr_masked(const GameGraph& g, const std::vector<Player>& owner,
                              const std::vector<bool>& active, const std::vector<bool>& target,
                              Player p, const std::vector<std::vector<NodeId>>& pred,
                              std::vector<NodeId>* strategy, std::vector<size_t>* rank_out) {
  size_t n = g.node_count();
  std::vector<bool> in(n, false);
  std::vector<size_t> rank(n, SIZE_MAX);
  std::vector<size_t> escape(n, 0);  // active successors not yet attracted (opponent nodes)
  std::deque<NodeId> queue;
  for (NodeId v = 0; v < n; ++v) {
    if (!active[v]) continue;
    if (target[v]) {
      in[v] = true;
      rank[v] = 0;
      queue.push_back(v);
    } else if (owner[v] != p) {
      for (NodeId u : g.succ[v])
        if (active[u]) ++escape[v];
    }
  }
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : pred[u]) {
      if (!active[v] || in[v]) continue;
      if (owner[v] == p) {
        in[v] = true;
        rank[v] = rank[u] + 1;
        queue.push_back(v);
      } else if (--escape[v] == 0) {
        in[v] = true;
        rank[v] = rank[u] + 1;
        queue.push_back(v);
      }
    }
  }
  if (strategy) {
    // lowest-index successor that entered strictly earlier: guarantees progress
    for (NodeId v = 0; v < n; ++v) {
      if (!active[v] || !in[v] || target[v] || owner[v] != p) continue;
      for (NodeId u : g.succ[v]) {
        if (active[u] && in[u] && rank[u] < rank[v]) {
          (*strategy)[v] = u;
          break;
        }
      }
    }
  }
  if (rank_out) *rank_out = std::move(rank);
  return in;
}

std::vector<bool> full_mask(size_t n) { return std::vector<bool>(n, true); }

}  // namespace

std::vector<bool> attractor(const Arena& a, const std::vector<bool>& target, Player p,
                            std::vector<NodeId>* strategy, std::vector<size_t>* rank_out) {
  const GameGraph& g = *a.graph;
  if (strategy) strategy->assign(g.node_count(), kNoNode);
  auto pred = predecessors(g);
  return attr_masked(g, a.owner, full_mask(g.node_count()), target, p, pred, strategy, rank_out);
}

SolveResult solve_reachability(const Arena& a, const ReachObjective& obj) {
  const GameGraph& g = *a.graph;
  size_t n = g.node_count();
  std::vector<bool> target(n, false);
  for (NodeId v : obj.targets) target[v] = true;

  SolveResult r;
  r.max_strategy.assign(n, kNoNode);
  r.min_strategy.assign(n, kNoNode);
  r.max_region = attractor(a, target, Player::Max, &r.max_strategy);
  for (NodeId v = 0; v < n; ++v) {
    if (r.max_region[v]) {
      // inside a target: any successor keeps winning (targets are closed)
      if (target[v] && a.owner[v] == Player::Max) r.max_strategy[v] = g.succ[v][0];
    } else if (a.owner[v] == Player::Min) {
      for (NodeId u : g.succ[v])
        if (!r.max_region[u]) {
          r.min_strategy[v] = u;
          break;
        }
    }
  }
  return r;
}

namespace {

// Zielonka recursion; winner/strategy slots are overwritten by whichever call
// finally claims a node, so only the last write per node survives.
struct ZielonkaSolver {
  const GameGraph& g;
  const std::vector<Player>& owner;
  const std::vector<int>& pri;
  std::vector<std::vector<NodeId>> pred;
  std::vector<Player> winner;
  std::vector<NodeId> strat;  // winning player's move at their own nodes

  explicit ZielonkaSolver(const Arena& a, const ParityObjective& obj)
      : g(*a.graph),
        owner(a.owner),
        pri(obj.priority),
        pred(predecessors(g)),
        winner(g.node_count(), Player::Max),
        strat(g.node_count(), kNoNode) {}

  void run(std::vector<bool> active) {
    int d = -1;
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (active[v]) d = std::max(d, pri[v]);
    if (d < 0) return;  // empty subgame
    Player i = (d % 2 == 0) ? Player::Max : Player::Min;

    std::vector<bool> top(g.node_count(), false);
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (active[v] && pri[v] == d) top[v] = true;

    std::vector<NodeId> attr_strat(g.node_count(), kNoNode);
    std::vector<bool> A = attr_masked(g, owner, active, top, i, pred, &attr_strat, nullptr);

    std::vector<bool> rest(g.node_count(), false);
    bool rest_nonempty = false;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      rest[v] = active[v] && !A[v];
      rest_nonempty = rest_nonempty || rest[v];
    }
    if (rest_nonempty) run(rest);

    bool opponent_wins_some = false;
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (rest[v] && winner[v] != i) opponent_wins_some = true;

    if (!opponent_wins_some) {
      // player i wins all of `active`
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!active[v]) continue;
        winner[v] = i;
        if (owner[v] != i) continue;
        if (top[v]) {
          for (NodeId u : g.succ[v])
            if (active[u]) {
              strat[v] = u;
              break;
            }
        } else if (A[v]) {
          strat[v] = attr_strat[v];
        }
        // nodes of `rest` keep the strategy the recursive call wrote
      }
      return;
    }

    std::vector<bool> opp_won(g.node_count(), false);
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (rest[v] && winner[v] != i) opp_won[v] = true;

    std::vector<NodeId> opp_attr_strat(g.node_count(), kNoNode);
    std::vector<bool> B =
        attr_masked(g, owner, active, opp_won, opponent(i), pred, &opp_attr_strat, nullptr);

    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (!active[v] || !B[v]) continue;
      winner[v] = opponent(i);
      if (owner[v] == opponent(i) && !opp_won[v]) strat[v] = opp_attr_strat[v];
      // nodes inside opp_won keep their recursive strategy
    }

    std::vector<bool> remaining(g.node_count(), false);
    bool any = false;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      remaining[v] = active[v] && !B[v];
      any = any || remaining[v];
    }
    if (any) run(remaining);
  }
};

}  // namespace

SolveResult solve_parity(const Arena& a, const ParityObjective& obj) {
  ZielonkaSolver z(a, obj);
  z.run(full_mask(a.graph->node_count()));
  SolveResult r;
  size_t n = a.graph->node_count();
  r.max_region.assign(n, false);
  r.max_strategy.assign(n, kNoNode);
  r.min_strategy.assign(n, kNoNode);
  for (NodeId v = 0; v < n; ++v) {
    r.max_region[v] = z.winner[v] == Player::Max;
    if (z.winner[v] == Player::Max && a.owner[v] == Player::Max) r.max_strategy[v] = z.strat[v];
    if (z.winner[v] == Player::Min && a.owner[v] == Player::Min) r.min_strategy[v] = z.strat[v];
  }
  return r;
}

std::vector<long long> min_credit(const Arena& a, const std::vector<long long>& weight,
                                  std::vector<size_t>* lift_time) {
  const GameGraph& g = *a.graph;
  size_t n = g.node_count();
  if (weight.size() != n) throw std::invalid_argument("weight table size mismatch");
  __int128 max_abs = 0;
  for (long long w : weight) {
    __int128 mag = w < 0 ? -__int128(w) : __int128(w);
    max_abs = std::max(max_abs, mag);
  }
  const __int128 cap = __int128(n) * max_abs;

  // least fixpoint of f(v) = max(0, best over successors of f(u) - w(v)),
  // where Max minimizes and Min maximizes; values above the cap are infinite
  std::vector<__int128> f(n, 0);
  const __int128 INF = __int128(1) << 100;
  auto evaluate = [&](NodeId v) -> __int128 {
    __int128 best = a.owner[v] == Player::Max ? INF : -1;
    for (NodeId u : g.succ[v]) {
      if (a.owner[v] == Player::Max)
        best = std::min(best, f[u]);
      else
        best = std::max(best, f[u]);
    }
    if (best >= INF) return INF;
    __int128 cand = best - __int128(weight[v]);
    if (cand < 0) cand = 0;
    return cand > cap ? INF : cand;
  };

  auto pred = predecessors(g);
  std::deque<NodeId> queue;
  std::vector<bool> queued(n, true);
  std::vector<size_t> when(n, 0);
  size_t clock = 0;
  for (NodeId v = 0; v < n; ++v) queue.push_back(v);
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    queued[v] = false;
    __int128 nv = evaluate(v);
    if (nv > f[v]) {
      f[v] = nv;
      when[v] = ++clock;
      for (NodeId p : pred[v])
        if (!queued[p]) {
          queued[p] = true;
          queue.push_back(p);
        }
    }
  }
  if (lift_time) *lift_time = std::move(when);

  std::vector<long long> out(n);
  for (NodeId v = 0; v < n; ++v)
    out[v] = f[v] >= INF ? kInfiniteCredit : static_cast<long long>(f[v]);
  return out;
}

SolveResult solve_energy(const Arena& a, const EnergyObjective& obj) {
  const GameGraph& g = *a.graph;
  size_t n = g.node_count();
  std::vector<size_t> when;
  std::vector<long long> f = min_credit(a, obj.weight, &when);
  SolveResult r;
  r.max_region.assign(n, false);
  r.max_strategy.assign(n, kNoNode);
  r.min_strategy.assign(n, kNoNode);
  for (NodeId v = 0; v < n; ++v)
    r.max_region[v] = f[v] != kInfiniteCredit && f[v] <= obj.credit;

  // Max keeps the energy at or above the requirement by always moving to the
  // cheapest successor.
  for (NodeId v = 0; v < n; ++v)
    if (r.max_region[v] && a.owner[v] == Player::Max) {
      NodeId best = kNoNode;
      for (NodeId u : g.succ[v])
        if (best == kNoNode || f[u] < f[best]) best = u;
      r.max_strategy[v] = best;
    }

  // Min chases the cause of an unaffordable requirement: among the successors
  // with the largest requirement, the one that settled first in the lifting
  // actually supports f[v], and following supports backwards in settle order
  // cannot cycle without draining energy.
  for (NodeId v = 0; v < n; ++v)
    if (!r.max_region[v] && a.owner[v] == Player::Min && f[v] != kInfiniteCredit) {
      NodeId best = kNoNode;
      for (NodeId u : g.succ[v])
        if (best == kNoNode || f[u] > f[best] ||
            (f[u] == f[best] && when[u] < when[best]))
          best = u;
      r.min_strategy[v] = best;
    }

  // Where no finite credit helps Max, Min forces a strictly negative drain
  // rate.  That part of the graph is closed for Min; on it a second lifting
  // with the roles swapped and weights -(n*w+1) turns the drain rate into a
  // finite safety certificate whose safe side yields Min's choices.
  std::vector<NodeId> sub_id(n, kNoNode);
  std::vector<NodeId> top_nodes;
  for (NodeId v = 0; v < n; ++v)
    if (f[v] == kInfiniteCredit) {
      sub_id[v] = static_cast<NodeId>(top_nodes.size());
      top_nodes.push_back(v);
    }
  if (!top_nodes.empty()) {
    GameGraph sub;
    std::vector<Player> sub_owner;
    std::vector<long long> sub_weight;
    for (NodeId v : top_nodes) {
      sub.add_node(g.names[v]);
      sub_owner.push_back(a.owner[v] == Player::Max ? Player::Min : Player::Max);
      __int128 w = -(__int128(n) * obj.weight[v] + 1);
      if (w < std::numeric_limits<long long>::min() ||
          w > std::numeric_limits<long long>::max())
        throw std::invalid_argument("energy weights too large for strategy extraction");
      sub_weight.push_back(static_cast<long long>(w));
    }
    for (size_t i = 0; i < top_nodes.size(); ++i)
      for (NodeId u : g.succ[top_nodes[i]])
        if (sub_id[u] != kNoNode) sub.succ[i].push_back(sub_id[u]);
    Arena sub_arena{&sub, sub_owner};
    std::vector<long long> drain = min_credit(sub_arena, sub_weight);
    for (size_t i = 0; i < top_nodes.size(); ++i) {
      if (drain[i] == kInfiniteCredit)
        throw std::logic_error("drain certificate missing on a divergent node");
      NodeId v = top_nodes[i];
      if (a.owner[v] != Player::Min) continue;
      NodeId best = kNoNode;
      for (NodeId u : sub.succ[i])
        if (best == kNoNode || drain[u] < drain[best]) best = u;
      r.min_strategy[v] = top_nodes[best];
    }
  }
  return r;
}

SolveResult solve(const Arena& a, const Objective& obj) {
  if (const auto* reach = std::get_if<ReachObjective>(&obj)) return solve_reachability(a, *reach);
  if (const auto* parity = std::get_if<ParityObjective>(&obj)) return solve_parity(a, *parity);
  return solve_energy(a, std::get<EnergyObjective>(obj));
}

SolveResult solve_p_game(const Arena& a, const Objective& obj, const BoundarySpec& boundary) {
  if (boundary.threshold < 0 || boundary.threshold > 1)
    throw std::invalid_argument("threshold outside [0,1]");
  const GameGraph& g = *a.graph;
  size_t n = g.node_count();
  for (NodeId v = 0; v < n; ++v)
    if (boundary.is_boundary(v) && (*boundary.values[v] < 0 || *boundary.values[v] > 1))
      throw std::invalid_argument("boundary value outside [0,1]");

  GameGraph g2;
  g2.names = g.names;
  g2.succ = g.succ;
  g2.init = g.init;
  std::vector<bool> winning(n, false);
  for (NodeId v = 0; v < n; ++v) {
    if (!boundary.is_boundary(v)) continue;
    g2.succ[v] = {v};  // absorbing sink
    winning[v] = boundary.mode == PGameMode::Strong ? *boundary.values[v] >= boundary.threshold
                                                    : *boundary.values[v] > boundary.threshold;
  }
  Arena a2{&g2, a.owner};

  if (const auto* reach = std::get_if<ReachObjective>(&obj)) {
    ReachObjective obj2;
    for (NodeId v : reach->targets)
      if (!boundary.is_boundary(v)) obj2.targets.push_back(v);
    for (NodeId v = 0; v < n; ++v)
      if (boundary.is_boundary(v) && winning[v]) obj2.targets.push_back(v);
    std::sort(obj2.targets.begin(), obj2.targets.end());
    obj2.targets.erase(std::unique(obj2.targets.begin(), obj2.targets.end()), obj2.targets.end());
    return solve_reachability(a2, obj2);
  }
  if (const auto* parity = std::get_if<ParityObjective>(&obj)) {
    ParityObjective obj2 = *parity;
    for (NodeId v = 0; v < n; ++v)
      if (boundary.is_boundary(v)) obj2.priority[v] = winning[v] ? 0 : 1;
    return solve_parity(a2, obj2);
  }
  EnergyObjective obj2 = std::get<EnergyObjective>(obj);
  for (NodeId v = 0; v < n; ++v)
    if (boundary.is_boundary(v)) obj2.weight[v] = winning[v] ? 1 : -1;
  return solve_energy(a2, obj2);
}

Player play_winner(const Arena& a, const Objective& obj, NodeId start,
                   const std::vector<NodeId>& successor_choice) {
  const GameGraph& g = *a.graph;
  size_t n = g.node_count();
  std::vector<size_t> seen_at(n, SIZE_MAX);
  std::vector<NodeId> path;
  NodeId v = start;
  while (seen_at[v] == SIZE_MAX) {
    seen_at[v] = path.size();
    path.push_back(v);
    v = successor_choice[v];
  }
  size_t cycle_start = seen_at[v];

  if (const auto* reach = std::get_if<ReachObjective>(&obj)) {
    for (NodeId u : path)
      if (reach->is_target(u)) return Player::Max;
    return Player::Min;
  }
  if (const auto* parity = std::get_if<ParityObjective>(&obj)) {
    int top = -1;
    for (size_t i = cycle_start; i < path.size(); ++i)
      top = std::max(top, parity->priority[path[i]]);
    return top % 2 == 0 ? Player::Max : Player::Min;
  }
  const auto& energy = std::get<EnergyObjective>(obj);
  __int128 e = energy.credit;
  for (NodeId u : path) {
    e += energy.weight[u];
    if (e < 0) return Player::Min;
  }
  __int128 cycle_sum = 0;
  for (size_t i = cycle_start; i < path.size(); ++i) {
    // second pass around the cycle: lowest base, so any dip shows here
    cycle_sum += energy.weight[path[i]];
    e += energy.weight[path[i]];
    if (e < 0) return Player::Min;
  }
  return cycle_sum < 0 ? Player::Min : Player::Max;
}

namespace {

// Odometer over the successor choices of `mine`-owned nodes.
struct StrategyIter {
  const GameGraph& g;
  std::vector<NodeId> nodes;     // nodes this player picks for
  std::vector<size_t> digit;     // current successor index per node
  bool done = false;

  StrategyIter(const Arena& a, Player mine) : g(*a.graph) {
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (a.owner[v] == mine) nodes.push_back(v);
    digit.assign(nodes.size(), 0);
  }
  void write(std::vector<NodeId>& choice) const {
    for (size_t i = 0; i < nodes.size(); ++i) choice[nodes[i]] = g.succ[nodes[i]][digit[i]];
  }
  void advance() {
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (++digit[i] < g.succ[nodes[i]].size()) return;
      digit[i] = 0;
    }
    done = true;
  }
};

}  // namespace

SolveResult brute_force_solve(const Arena& a, const Objective& obj, size_t max_nodes) {
  const GameGraph& g = *a.graph;
  size_t n = g.node_count();
  if (n > max_nodes) throw std::invalid_argument("graph too large for brute-force solve");

  std::vector<NodeId> choice(n, kNoNode);
  std::vector<bool> region(n, false);

  // pass 1: region[v] = exists a Max strategy beating every Min strategy
  for (StrategyIter ms(a, Player::Max); !ms.done; ms.advance()) {
    ms.write(choice);
    std::vector<bool> wins_all(n, true);
    for (StrategyIter mt(a, Player::Min); !mt.done; mt.advance()) {
      mt.write(choice);
      for (NodeId v = 0; v < n; ++v)
        if (wins_all[v] && play_winner(a, obj, v, choice) != Player::Max) wins_all[v] = false;
    }
    for (NodeId v = 0; v < n; ++v)
      if (wins_all[v]) region[v] = true;
  }

  SolveResult r;
  r.max_region = region;
  r.max_strategy.assign(n, kNoNode);
  r.min_strategy.assign(n, kNoNode);

  // pass 2: a single strategy winning on the whole region exists by
  // memoryless determinacy; find the first for each player
  for (StrategyIter ms(a, Player::Max); !ms.done; ms.advance()) {
    ms.write(choice);
    bool good = true;
    for (StrategyIter mt(a, Player::Min); good && !mt.done; mt.advance()) {
      mt.write(choice);
      for (NodeId v = 0; v < n && good; ++v)
        if (region[v] && play_winner(a, obj, v, choice) != Player::Max) good = false;
    }
    if (good) {
      for (NodeId v = 0; v < n; ++v)
        if (region[v] && a.owner[v] == Player::Max) r.max_strategy[v] = choice[v];
      break;
    }
  }
  for (StrategyIter mt(a, Player::Min); !mt.done; mt.advance()) {
    mt.write(choice);
    bool good = true;
    for (StrategyIter ms(a, Player::Max); good && !ms.done; ms.advance()) {
      ms.write(choice);
      for (NodeId v = 0; v < n && good; ++v)
        if (!region[v] && play_winner(a, obj, v, choice) != Player::Min) good = false;
    }
    if (good) {
      for (NodeId v = 0; v < n; ++v)
        if (!region[v] && a.owner[v] == Player::Min) r.min_strategy[v] = choice[v];
      break;
    }
  }
  return r;
}

}  // namespace randctl
