#include "randctl/reductions.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace randctl {

std::optional<ValidationError> validate_pcnf(const Pcnf& f) {
  if (f.pairs < 1) return ValidationError{"formula needs at least one quantifier pair"};
  if (f.clauses.empty()) return ValidationError{"formula needs at least one clause"};
  for (const auto& clause : f.clauses) {
    if (clause.empty()) return ValidationError{"empty clause"};
    for (int lit : clause) {
      int var = lit < 0 ? -lit : lit;
      if (lit == 0 || var > 2 * f.pairs)
        return ValidationError{"literal " + std::to_string(lit) + " outside the prefix"};
    }
  }
  return std::nullopt;
}

QbfThreshold qbf_threshold(int pairs) {
  if (pairs < 1) throw std::invalid_argument("need at least one quantifier pair");
  // per round: win chance 1/2 + 1/4 + 1/64, survival chance 1/64
  const Rational round_win = make_rational(1, 2) + make_rational(1, 4) + make_rational(1, 64);
  Rational q_i = 1, p_i = 0;
  for (int i = 1; i <= pairs; ++i) {
    p_i += q_i * round_win;
    q_i /= 64;
  }
  QbfThreshold out;
  out.q = q_i / 4;
  out.p = p_i + q_i / 2;
  out.theta = out.p + out.q / 2;
  return out;
}

QbfGame qbf_to_game(const Pcnf& f) {
  if (auto err = validate_pcnf(f)) throw std::invalid_argument(err->message);
  const int n = f.pairs;
  const size_t m = f.clauses.size();

  QbfGame out;
  GameGraph& g = out.graph;
  std::vector<NodeId> ax(n + 1), x(n + 1), nx(n + 1), ey(n + 1);
  std::vector<NodeId> ypp(n + 1), yp(n + 1), y(n + 1), nypp(n + 1), nyp(n + 1), ny(n + 1);
  for (int i = 1; i <= n; ++i) {
    std::string suffix = std::to_string(i);
    ax[i] = g.add_node("ax" + suffix);
    x[i] = g.add_node("x" + suffix);
    nx[i] = g.add_node("nx" + suffix);
    ey[i] = g.add_node("ey" + suffix);
    ypp[i] = g.add_node("ypp" + suffix);
    yp[i] = g.add_node("yp" + suffix);
    y[i] = g.add_node("y" + suffix);
    nypp[i] = g.add_node("nypp" + suffix);
    nyp[i] = g.add_node("nyp" + suffix);
    ny[i] = g.add_node("ny" + suffix);
  }
  std::vector<NodeId> clause(m);
  for (size_t j = 0; j < m; ++j) clause[j] = g.add_node("c" + std::to_string(j + 1));
  NodeId conj = g.add_node("and");
  NodeId top = g.add_node("top");
  NodeId bot = g.add_node("bot");

  for (int i = 1; i <= n; ++i) {
    NodeId next = i < n ? ax[i + 1] : conj;
    g.add_edge(ax[i], x[i]);
    g.add_edge(ax[i], nx[i]);
    g.add_edge(ax[i], top);
    g.add_edge(x[i], ey[i]);
    g.add_edge(x[i], top);
    g.add_edge(nx[i], ey[i]);
    g.add_edge(nx[i], top);
    g.add_edge(ey[i], ypp[i]);
    g.add_edge(ey[i], nypp[i]);
    g.add_edge(ey[i], bot);
    g.add_edge(ypp[i], yp[i]);
    g.add_edge(ypp[i], bot);
    g.add_edge(nypp[i], nyp[i]);
    g.add_edge(nypp[i], bot);
    g.add_edge(yp[i], y[i]);
    g.add_edge(yp[i], bot);
    g.add_edge(nyp[i], ny[i]);
    g.add_edge(nyp[i], bot);
    g.add_edge(y[i], next);
    g.add_edge(y[i], top);
    g.add_edge(ny[i], next);
    g.add_edge(ny[i], top);
  }
  for (size_t j = 0; j < m; ++j) g.add_edge(conj, clause[j]);
  g.add_edge(conj, top);
  for (size_t j = 0; j < m; ++j) {
    for (int lit : f.clauses[j]) {
      int var = lit < 0 ? -lit : lit;
      int i = (var + 1) / 2;
      NodeId negated;  // the node for the literal's negation
      if (var % 2 == 1)
        negated = lit > 0 ? nx[i] : x[i];
      else
        negated = lit > 0 ? ny[i] : y[i];
      auto& list = g.succ[clause[j]];
      if (std::find(list.begin(), list.end(), negated) == list.end())
        g.add_edge(clause[j], negated);
    }
    g.add_edge(clause[j], bot);
  }
  g.add_edge(top, top);
  g.add_edge(bot, bot);
  g.init = ax[1];

  out.toss = TossFunction::uniform(g.node_count());
  out.objective.targets = {top};
  out.theta = qbf_threshold(n).theta;
  return out;
}

namespace {

bool matrix_satisfied(const Pcnf& f, const std::vector<bool>& val) {
  for (const auto& clause : f.clauses) {
    bool sat = false;
    for (int lit : clause) {
      int var = lit < 0 ? -lit : lit;
      if ((lit > 0) == val[var]) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

bool eval_from(const Pcnf& f, int i, std::vector<bool>& val) {
  if (i > f.pairs) return matrix_satisfied(f, val);
  for (bool choice : {false, true}) {
    val[2 * i - 1] = choice;
    bool exists = false;
    for (bool response : {false, true}) {
      val[2 * i] = response;
      if (eval_from(f, i + 1, val)) {
        exists = true;
        break;
      }
    }
    if (!exists) return false;
  }
  return true;
}

}  // namespace

bool qbf_oracle(const Pcnf& f) {
  if (auto err = validate_pcnf(f)) throw std::invalid_argument(err->message);
  if (f.pairs > 8) throw std::invalid_argument("oracle guard: at most 8 quantifier pairs");
  std::vector<bool> val(2 * f.pairs + 1, false);
  return eval_from(f, 1, val);
}

std::optional<ValidationError> validate_reliability(const ReliabilityInstance& inst) {
  size_t n = inst.graph.node_count();
  if (n == 0) return ValidationError{"empty graph"};
  if (inst.s >= n) return ValidationError{"start terminal out of range", inst.s};
  if (inst.t >= n) return ValidationError{"target terminal out of range", inst.t};
  if (inst.s == inst.t) return ValidationError{"terminals coincide", inst.s};
  if (!(inst.p > 0 && inst.p < 1)) return ValidationError{"edge probability outside (0,1)"};
  for (NodeId v = 0; v < n; ++v) {
    auto sorted = inst.graph.succ[v];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      return ValidationError{"duplicate edge", v};
    for (NodeId u : inst.graph.succ[v])
      if (u >= n) return ValidationError{"dangling edge", v};
  }
  return std::nullopt;
}

ReliabilityGame reliability_to_game(const ReliabilityInstance& inst) {
  if (auto err = validate_reliability(inst)) throw std::invalid_argument(err->message);
  const GameGraph& g = inst.graph;

  ReliabilityGame out;
  GameGraph& gg = out.graph;
  NodeId init = gg.add_node("init");
  // edge nodes in (tail, successor-list) order; edges into s are irrelevant
  // for s -> t reachability and get no node
  std::vector<std::vector<NodeId>> enode(g.node_count());
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    enode[u].assign(g.succ[u].size(), kNoNode);
    for (size_t idx = 0; idx < g.succ[u].size(); ++idx) {
      NodeId v = g.succ[u][idx];
      if (v == inst.s) continue;
      enode[u][idx] = gg.add_node("e_" + g.names[u] + "_" + g.names[v]);
      edges.push_back({u, v});
    }
  }
  NodeId top = gg.add_node("top");
  NodeId bot = gg.add_node("bot");

  for (size_t idx = 0; idx < g.succ[inst.s].size(); ++idx)
    if (enode[inst.s][idx] != kNoNode) gg.add_edge(init, enode[inst.s][idx]);
  gg.add_edge(init, bot);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (size_t idx = 0; idx < g.succ[u].size(); ++idx) {
      NodeId me = enode[u][idx];
      if (me == kNoNode) continue;
      NodeId v = g.succ[u][idx];
      for (size_t nxt = 0; nxt < g.succ[v].size(); ++nxt)
        if (enode[v][nxt] != kNoNode) gg.add_edge(me, enode[v][nxt]);
      if (v == inst.t) gg.add_edge(me, top);
      gg.add_edge(me, bot);
    }
  }
  gg.add_edge(top, top);
  gg.add_edge(bot, bot);
  gg.init = init;

  out.toss.prob.assign(gg.node_count(), inst.p);
  out.objective.targets = {top};
  return out;
}

Rational reliability_oracle(const ReliabilityInstance& inst, size_t max_edges) {
  if (auto err = validate_reliability(inst)) throw std::invalid_argument(err->message);
  const GameGraph& g = inst.graph;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.succ[u]) edges.push_back({u, v});
  if (edges.size() > max_edges) throw std::invalid_argument("edge-count guard exceeded");

  Rational alpha = 0;
  for (uint64_t subset = 0; subset < (uint64_t(1) << edges.size()); ++subset) {
    std::vector<std::vector<NodeId>> adj(g.node_count());
    Rational prob = 1;
    for (size_t idx = 0; idx < edges.size(); ++idx) {
      if ((subset >> idx) & 1) {
        adj[edges[idx].first].push_back(edges[idx].second);
        prob *= inst.p;
      } else {
        prob *= 1 - inst.p;
      }
    }
    std::vector<bool> seen(g.node_count(), false);
    std::vector<NodeId> stack{inst.s};
    seen[inst.s] = true;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId u : adj[v])
        if (!seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
    }
    if (seen[inst.t]) alpha += prob;
  }
  return inst.p * alpha;
}

namespace {

void require_absorbing_targets(const GameGraph& g, const ReachObjective& reach) {
  for (NodeId v : reach.targets) {
    const auto& list = g.succ[v];
    if (std::find(list.begin(), list.end(), v) == list.end())
      throw std::invalid_argument("target " + g.names[v] + " lacks a self-loop");
  }
}

}  // namespace

ParityObjective reach_to_parity(const GameGraph& g, const ReachObjective& reach) {
  require_absorbing_targets(g, reach);
  ParityObjective out;
  out.priority.assign(g.node_count(), 1);
  for (NodeId v : reach.targets) out.priority[v] = 2;
  return out;
}

EnergyObjective reach_to_energy(const GameGraph& g, const ReachObjective& reach,
                                CreditContext context) {
  require_absorbing_targets(g, reach);
  EnergyObjective out;
  out.weight.assign(g.node_count(), -1);
  for (NodeId v : reach.targets) out.weight[v] = 1;
  long long n = static_cast<long long>(g.node_count());
  out.credit = context == CreditContext::TossAtStart ? n + 1 : (n + 1) * (n + 2) / 2;
  return out;
}

}  // namespace randctl
