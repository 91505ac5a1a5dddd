#include "randctl/qualitative.hpp"

#include <algorithm>
#include <deque>

namespace randctl {

namespace {

// Lowest-index-first BFS path from `from` to `to`, empty when unreachable.
// `allowed` restricts the search when non-null.
std::vector<NodeId> bfs_path(const GameGraph& g, NodeId from, NodeId to,
                             const std::vector<bool>* allowed = nullptr) {
  size_t n = g.node_count();
  std::vector<NodeId> parent(n, kNoNode);
  std::vector<bool> seen(n, false);
  std::deque<NodeId> queue;
  seen[from] = true;
  queue.push_back(from);
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    if (v == to && v != from) break;
    for (NodeId u : g.succ[v]) {
      if (seen[u] || (allowed && !(*allowed)[u])) continue;
      seen[u] = true;
      parent[u] = v;
      queue.push_back(u);
    }
  }
  if (from == to) return {from};
  if (!seen[to]) return {};
  std::vector<NodeId> path;
  for (NodeId v = to; v != kNoNode; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  if (path.front() != from) return {};
  return path;
}

std::vector<bool> reachable_from(const GameGraph& g, NodeId start,
                                 const std::vector<bool>* allowed = nullptr) {
  std::vector<bool> seen(g.node_count(), false);
  if (allowed && !(*allowed)[start]) return seen;
  std::deque<NodeId> queue;
  seen[start] = true;
  queue.push_back(start);
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : g.succ[v])
      if (!seen[u] && (!allowed || (*allowed)[u])) {
        seen[u] = true;
        queue.push_back(u);
      }
  }
  return seen;
}

// Deterministic DFS cycle search inside `allowed`, starting at `start`.
// On success fills `stem` (start .. cycle entry) and `cycle` (closed).
bool find_cycle(const GameGraph& g, NodeId start, const std::vector<bool>& allowed,
                std::vector<NodeId>* stem, std::vector<NodeId>* cycle) {
  if (!allowed[start]) return false;
  size_t n = g.node_count();
  std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<NodeId> path;
  std::vector<size_t> next_edge(n, 0);
  std::vector<size_t> pos(n, 0);

  path.push_back(start);
  state[start] = 1;
  pos[start] = 0;
  while (!path.empty()) {
    NodeId v = path.back();
    if (next_edge[v] < g.succ[v].size()) {
      NodeId u = g.succ[v][next_edge[v]++];
      if (!allowed[u]) continue;
      if (state[u] == 1) {
        // back edge v -> u closes the cycle
        stem->assign(path.begin(), path.begin() + pos[u] + 1);
        cycle->assign(path.begin() + pos[u], path.end());
        cycle->push_back(u);
        return true;
      }
      if (state[u] == 0) {
        state[u] = 1;
        pos[u] = path.size();
        path.push_back(u);
      }
    } else {
      state[v] = 2;
      path.pop_back();
    }
  }
  return false;
}

SureWinResult sure_reach(const GameGraph& g, const ReachObjective& obj) {
  if (obj.is_target(g.init)) return {true, std::nullopt};
  std::vector<bool> allowed(g.node_count(), true);
  for (NodeId v : obj.targets) allowed[v] = false;
  LassoWitness w;
  if (find_cycle(g, g.init, allowed, &w.stem, &w.cycle)) return {false, std::move(w)};
  // the target-free region reachable from init is acyclic: every play reaches
  // a target
  return {true, std::nullopt};
}

SureWinResult sure_parity(const GameGraph& g, const ParityObjective& obj) {
  std::vector<bool> from_init = reachable_from(g, g.init);
  std::vector<int> odd;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (from_init[v] && obj.priority[v] % 2 == 1) odd.push_back(obj.priority[v]);
  std::sort(odd.begin(), odd.end());
  odd.erase(std::unique(odd.begin(), odd.end()), odd.end());

  for (auto it = odd.rbegin(); it != odd.rend(); ++it) {
    int d = *it;
    std::vector<bool> low(g.node_count(), false);
    for (NodeId v = 0; v < g.node_count(); ++v) low[v] = obj.priority[v] <= d;
    for (NodeId x = 0; x < g.node_count(); ++x) {
      if (!from_init[x] || obj.priority[x] != d) continue;
      // cycle through x using only priorities <= d; the stem may pass anywhere
      std::vector<NodeId> back;
      bool found = false;
      for (NodeId u : g.succ[x]) {
        if (!low[u]) continue;
        back = bfs_path(g, u, x, &low);
        if (!back.empty()) {
          found = true;
          break;
        }
      }
      if (!found) continue;
      LassoWitness w;
      w.stem = bfs_path(g, g.init, x);
      w.cycle.push_back(x);
      w.cycle.insert(w.cycle.end(), back.begin(), back.end());
      return {false, std::move(w)};
    }
  }
  return {true, std::nullopt};
}

// Follow lowest-index successors from `v` until a node repeats; returns the
// extension up to the cycle entry and the closed cycle.
void default_continuation(const GameGraph& g, NodeId v, std::vector<NodeId>* extension,
                          std::vector<NodeId>* cycle) {
  std::vector<size_t> seen_at(g.node_count(), SIZE_MAX);
  std::vector<NodeId> walk;
  NodeId u = v;
  while (seen_at[u] == SIZE_MAX) {
    seen_at[u] = walk.size();
    walk.push_back(u);
    u = g.succ[u][0];
  }
  size_t entry = seen_at[u];
  extension->assign(walk.begin(), walk.begin() + entry + 1);
  cycle->assign(walk.begin() + entry, walk.end());
  cycle->push_back(u);
}

const __int128 kBFInf = __int128(1) << 100;

// Reconstruct a walk ending at v that realizes hist[round][v], by stepping
// back through the per-round snapshots; hist[0] has exactly one finite entry,
// the walk's first node.
std::vector<NodeId> bf_walk(const GameGraph& g, const std::vector<long long>& weight,
                            const std::vector<std::vector<__int128>>& hist, NodeId v,
                            size_t round) {
  size_t n = g.node_count();
  std::vector<NodeId> walk{v};
  NodeId x = v;
  for (size_t r = round; r > 0;) {
    if (hist[r - 1][x] == hist[r][x]) {
      --r;
      continue;
    }
    NodeId chosen = kNoNode;
    for (NodeId u = 0; u < n && chosen == kNoNode; ++u) {
      if (hist[r - 1][u] >= kBFInf) continue;
      for (NodeId s : g.succ[u])
        if (s == x && hist[r - 1][u] + weight[x] == hist[r][x]) {
          chosen = u;
          break;
        }
    }
    x = chosen;
    walk.push_back(x);
    --r;
  }
  std::reverse(walk.begin(), walk.end());
  return walk;
}

SureWinResult sure_energy(const GameGraph& g, const EnergyObjective& obj) {
  size_t n = g.node_count();

  // Bellman-Ford on minimal prefix sums (node weights charged on entry, the
  // initial node's weight included); per-round snapshots for reconstruction.
  std::vector<std::vector<__int128>> hist;
  std::vector<__int128> dist(n, kBFInf);
  dist[g.init] = __int128(obj.credit) + obj.weight[g.init];
  hist.push_back(dist);

  auto dip_witness = [&](NodeId v, size_t round) -> LassoWitness {
    LassoWitness w;
    w.stem = bf_walk(g, obj.weight, hist, v, round);
    std::vector<NodeId> ext;
    default_continuation(g, v, &ext, &w.cycle);
    w.stem.insert(w.stem.end(), ext.begin() + 1, ext.end());
    return w;
  };

  if (dist[g.init] < 0) return {false, dip_witness(g.init, 0)};

  bool changed = true;
  for (size_t round = 1; round <= n && changed; ++round) {
    changed = false;
    std::vector<__int128> next = dist;
    for (NodeId u = 0; u < n; ++u) {
      if (dist[u] >= kBFInf) continue;
      for (NodeId v : g.succ[u]) {
        __int128 cand = dist[u] + obj.weight[v];
        if (cand < next[v]) {
          next[v] = cand;
          changed = true;
        }
      }
    }
    dist = std::move(next);
    hist.push_back(dist);
    for (NodeId v = 0; v < n; ++v)
      if (dist[v] < 0) return {false, dip_witness(v, round)};
  }
  if (!changed) return {true, std::nullopt};  // converged with no dip

  // Still relaxing after n rounds: some reachable cycle has negative total
  // weight.  Find one by a closed-walk search from each reachable node; any
  // node on a negative cycle admits a negative closed walk of <= n edges.
  std::vector<bool> from_init = reachable_from(g, g.init);
  for (NodeId x = 0; x < n; ++x) {
    if (!from_init[x]) continue;
    std::vector<std::vector<__int128>> hist2;
    std::vector<__int128> d2(n, kBFInf);
    d2[x] = 0;
    hist2.push_back(d2);
    for (size_t round = 1; round <= n; ++round) {
      std::vector<__int128> next = d2;
      for (NodeId u = 0; u < n; ++u) {
        if (d2[u] >= kBFInf) continue;
        for (NodeId v : g.succ[u]) {
          __int128 cand = d2[u] + obj.weight[v];
          if (cand < next[v]) next[v] = cand;
        }
      }
      d2 = std::move(next);
      hist2.push_back(d2);
      if (d2[x] < 0) {
        LassoWitness w;
        w.cycle = bf_walk(g, obj.weight, hist2, x, round);  // closed: starts and ends at x
        w.stem = bfs_path(g, g.init, x);
        return {false, std::move(w)};
      }
    }
  }
  return {true, std::nullopt};  // unreachable: relaxation progress implies a witness
}

}  // namespace

bool lasso_violates(const GameGraph& g, const Objective& obj, const LassoWitness& w) {
  if (w.stem.empty() || w.cycle.size() < 2) return false;
  if (w.stem.front() != g.init) return false;
  if (w.cycle.front() != w.stem.back() || w.cycle.back() != w.cycle.front()) return false;
  auto edge_ok = [&](NodeId a, NodeId b) {
    const auto& s = g.succ[a];
    return std::find(s.begin(), s.end(), b) != s.end();
  };
  for (size_t i = 0; i + 1 < w.stem.size(); ++i)
    if (!edge_ok(w.stem[i], w.stem[i + 1])) return false;
  for (size_t i = 0; i + 1 < w.cycle.size(); ++i)
    if (!edge_ok(w.cycle[i], w.cycle[i + 1])) return false;

  if (const auto* reach = std::get_if<ReachObjective>(&obj)) {
    for (NodeId v : w.stem)
      if (reach->is_target(v)) return false;
    for (NodeId v : w.cycle)
      if (reach->is_target(v)) return false;
    return true;
  }
  if (const auto* parity = std::get_if<ParityObjective>(&obj)) {
    int top = -1;
    for (size_t i = 0; i + 1 < w.cycle.size(); ++i)
      top = std::max(top, parity->priority[w.cycle[i]]);
    return top % 2 == 1;
  }
  const auto& energy = std::get<EnergyObjective>(obj);
  __int128 e = energy.credit;
  for (NodeId v : w.stem) {
    e += energy.weight[v];
    if (e < 0) return true;
  }
  __int128 cycle_sum = 0;
  for (size_t i = 1; i < w.cycle.size(); ++i) {
    e += energy.weight[w.cycle[i]];
    cycle_sum += energy.weight[w.cycle[i]];
    if (e < 0) return true;
  }
  return cycle_sum < 0;
}

SureWinResult sure_win(const GameGraph& g, const Objective& obj) {
  if (const auto* reach = std::get_if<ReachObjective>(&obj)) return sure_reach(g, *reach);
  if (const auto* parity = std::get_if<ParityObjective>(&obj)) return sure_parity(g, *parity);
  return sure_energy(g, std::get<EnergyObjective>(obj));
}

bool almost_sure_rtg_reach(const GameGraph& g, const ReachObjective& obj) {
  std::vector<bool> from_init = reachable_from(g, g.init);
  // backward reachability from the targets
  std::vector<std::vector<NodeId>> pred(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (NodeId u : g.succ[v]) pred[u].push_back(v);
  std::vector<bool> to_target(g.node_count(), false);
  std::deque<NodeId> queue;
  for (NodeId v : obj.targets) {
    to_target[v] = true;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId u : pred[v])
      if (!to_target[u]) {
        to_target[u] = true;
        queue.push_back(u);
      }
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (from_init[v] && !to_target[v]) return false;
  return true;
}

QualitativeOneTwo qualitative_one_two(const GameGraph& g, const Objective& obj) {
  // a violating lasso keeps positive probability once ownership is fixed along
  // it, so almost-sure and sure winning coincide in both coin-toss variants
  SureWinResult s = sure_win(g, obj);
  return {s.sure, s.sure};
}

TranslationResult translate_rtg_to_stochastic(const GameGraph& g, const TossFunction& t,
                                              const Objective& obj) {
  size_t n = g.node_count();
  const auto* reach = std::get_if<ReachObjective>(&obj);

  TranslationResult out;
  StochasticArena& a = out.arena;
  out.copies.assign(n, {kNoNode, kNoNode, kNoNode});

  auto new_node = [&](const std::string& name) {
    a.names.push_back(name);
    a.succ.emplace_back();
    a.dist.emplace_back();
    return static_cast<NodeId>(a.names.size() - 1);
  };

  for (NodeId v = 0; v < n; ++v) {
    if (reach && reach->is_target(v)) {
      NodeId kept = new_node(g.names[v]);
      a.max_nodes.push_back(kept);  // absorbing; owner does not matter
      out.copies[v] = {kept, kept, kept};
    } else {
      NodeId rv = new_node(g.names[v]);
      NodeId mv = new_node(g.names[v] + "+");
      NodeId nv = new_node(g.names[v] + "-");
      a.random_nodes.push_back(rv);
      a.max_nodes.push_back(mv);
      a.min_nodes.push_back(nv);
      out.copies[v] = {rv, mv, nv};
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    auto [rv, mv, nv] = out.copies[v];
    if (rv == mv) {  // kept target
      for (NodeId u : g.succ[v]) a.succ[rv].push_back(out.copies[u][0]);
      continue;
    }
    a.dist[rv] = {{mv, t.prob[v]}, {nv, 1 - t.prob[v]}};
    for (NodeId u : g.succ[v]) {
      a.succ[mv].push_back(out.copies[u][0]);
      a.succ[nv].push_back(out.copies[u][0]);
    }
  }
  a.init = out.copies[g.init][0];

  size_t m = a.names.size();
  if (reach) {
    ReachObjective lifted;
    for (NodeId v : reach->targets) lifted.targets.push_back(out.copies[v][0]);
    std::sort(lifted.targets.begin(), lifted.targets.end());
    out.lifted = std::move(lifted);
  } else if (const auto* parity = std::get_if<ParityObjective>(&obj)) {
    ParityObjective lifted;
    lifted.priority.assign(m, 0);
    for (NodeId v = 0; v < n; ++v)
      for (NodeId c : out.copies[v]) lifted.priority[c] = parity->priority[v];
    out.lifted = std::move(lifted);
  } else {
    const auto& energy = std::get<EnergyObjective>(obj);
    EnergyObjective lifted;
    lifted.credit = energy.credit;
    lifted.weight.assign(m, 0);
    for (NodeId v = 0; v < n; ++v) {
      auto [rv, mv, nv] = out.copies[v];
      lifted.weight[rv] = 0;  // the toss step is free
      lifted.weight[mv] = energy.weight[v];
      lifted.weight[nv] = energy.weight[v];
    }
    out.lifted = std::move(lifted);
  }
  return out;
}

}  // namespace randctl
