#include "randctl/explicit_game.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace randctl {

namespace {

struct KeyHash {
  size_t operator()(const std::pair<uint64_t, NodeId>& k) const {
    uint64_t h = (k.first + k.second) * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 32;
    return static_cast<size_t>(h);
  }
};

}  // namespace

PartialOwnership ValueTable::decode(uint64_t own_code) const {
  PartialOwnership own(group_universe);
  uint64_t rest = own_code;
  for (NodeId gid : groups) {
    uint64_t digit = rest % 3;
    rest /= 3;
    if (digit == 1)
      own.assign[gid] = Player::Max;
    else if (digit == 2)
      own.assign[gid] = Player::Min;
  }
  return own;
}

ExplicitResult solve_explicit(const EngineInput& in, const ExplicitOptions& opt) {
  const GameGraph& g = *in.graph;
  size_t n = g.node_count();
  if (std::holds_alternative<EnergyObjective>(in.objective))
    throw std::invalid_argument("explicit engine takes reachability or parity objectives");
  if (in.group_of.size() != n || in.group_toss.size() != in.group_universe)
    throw std::invalid_argument("group tables inconsistent");

  // a group is tossable iff some member node has a real choice
  std::vector<bool> has_choice(in.group_universe, false);
  for (NodeId v = 0; v < n; ++v)
    if (g.succ[v].size() >= 2) has_choice[in.group_of[v]] = true;
  std::vector<NodeId> rel;
  for (NodeId gid = 0; gid < in.group_universe; ++gid)
    if (has_choice[gid]) rel.push_back(gid);
  size_t k = rel.size();
  if (k > 40) throw std::invalid_argument("too many tossable groups for the compact encoding");

  std::vector<uint32_t> rel_index(in.group_universe, UINT32_MAX);
  for (size_t j = 0; j < k; ++j) rel_index[rel[j]] = static_cast<uint32_t>(j);
  std::vector<uint64_t> pow3(k + 1, 1);
  for (size_t j = 0; j < k; ++j) pow3[j + 1] = pow3[j] * 3;

  // -------- forward exploration (the states vector doubles as the queue)
  struct State {
    uint64_t own;
    NodeId token;
    uint32_t unassigned;
    bool toss;
  };
  std::vector<State> states;
  std::unordered_map<std::pair<uint64_t, NodeId>, uint32_t, KeyHash> index;

  auto intern = [&](uint64_t own, NodeId token, uint32_t unassigned) -> uint32_t {
    auto [it, fresh] = index.try_emplace({own, token}, static_cast<uint32_t>(states.size()));
    if (fresh) {
      if (states.size() >= opt.max_states)
        throw std::runtime_error("explicit state-space guard exceeded");
      uint32_t j = rel_index[in.group_of[token]];
      bool toss = j != UINT32_MAX && (own / pow3[j]) % 3 == 0;
      states.push_back({own, token, unassigned, toss});
    }
    return it->second;
  };

  intern(0, g.init, static_cast<uint32_t>(k));
  for (size_t qi = 0; qi < states.size(); ++qi) {
    State s = states[qi];  // by value: intern may reallocate
    if (s.toss) {
      uint32_t j = rel_index[in.group_of[s.token]];
      intern(s.own + pow3[j], s.token, s.unassigned - 1);
      intern(s.own + 2 * pow3[j], s.token, s.unassigned - 1);
    } else {
      for (NodeId u : g.succ[s.token]) intern(s.own, u, s.unassigned);
    }
  }

  // -------- backward induction over ownership layers
  std::vector<std::vector<uint32_t>> layer(k + 1);
  for (uint32_t i = 0; i < states.size(); ++i) layer[states[i].unassigned].push_back(i);

  std::vector<Rational> value(states.size(), Rational(0));
  ExplicitStats stats;
  stats.states = states.size();

  auto solve_ownership = [&](uint64_t own, const std::vector<uint32_t>& members) {
    // deterministic game for this partial ownership: assigned groups follow
    // their coin, untossed groups become valued boundary sinks, everything
    // else is statically Max-owned
    std::vector<Player> owner(n, Player::Max);
    BoundarySpec spec;
    spec.values.assign(n, std::nullopt);
    std::vector<Rational> cand{Rational(0), Rational(1)};
    for (NodeId v = 0; v < n; ++v) {
      uint32_t j = rel_index[in.group_of[v]];
      if (j == UINT32_MAX) continue;
      uint64_t d = (own / pow3[j]) % 3;
      if (d == 1) {
        owner[v] = Player::Max;
      } else if (d == 2) {
        owner[v] = Player::Min;
      } else {
        // boundary: value of its toss state; unreached boundary nodes are
        // shielded behind reached ones, so any classification works
        auto it = index.find({own, v});
        if (it != index.end()) {
          spec.values[v] = value[it->second];
          cand.push_back(value[it->second]);
        } else {
          spec.values[v] = Rational(0);
        }
      }
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    Arena arena{&g, owner};

    std::map<size_t, std::vector<bool>> strong_regions;
    auto strong = [&](size_t ci) -> const std::vector<bool>& {
      auto it = strong_regions.find(ci);
      if (it == strong_regions.end()) {
        spec.mode = PGameMode::Strong;
        spec.threshold = cand[ci];
        ++stats.pgame_solves;
        it = strong_regions.emplace(ci, solve_p_game(arena, in.objective, spec).max_region).first;
      }
      return it->second;
    };

    std::vector<NodeId> toks;
    for (uint32_t i : members) toks.push_back(states[i].token);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());

    // value = largest candidate whose strong game Max wins; the candidate
    // ladder is split divide-and-conquer style so each token costs O(log)
    // solves.  Invariant: `list` lies inside strong(lo)'s region and outside
    // strong(hi+1)'s (when hi+1 exists).
    std::map<NodeId, Rational> node_value;
    std::function<void(std::vector<NodeId>, size_t, size_t)> assign_range =
        [&](std::vector<NodeId> list, size_t lo, size_t hi) {
          if (list.empty()) return;
          if (lo == hi) {
            for (NodeId v : list) node_value[v] = cand[lo];
            return;
          }
          size_t mid = (lo + hi + 1) / 2;
          const auto& region = strong(mid);
          std::vector<NodeId> inside, outside;
          for (NodeId v : list) (region[v] ? inside : outside).push_back(v);
          assign_range(std::move(inside), mid, hi);
          assign_range(std::move(outside), lo, mid - 1);
        };
    {
      const auto& region0 = strong(0);
      std::vector<NodeId> inside;
      for (NodeId v : toks) {
        if (region0[v])
          inside.push_back(v);
        else
          node_value[v] = 0;  // Max cannot even win the all-sinks-good game
      }
      assign_range(std::move(inside), 0, cand.size() - 1);
    }

    if (opt.consistency_checks) {
      // trichotomy: a state of value p < 1 must lose the weak p-game (strong
      // membership for p > 0 holds by construction)
      std::map<Rational, std::vector<bool>> weak_regions;
      for (NodeId v : toks) {
        const Rational& p = node_value.at(v);
        if (p == 1) continue;
        auto it = weak_regions.find(p);
        if (it == weak_regions.end()) {
          spec.mode = PGameMode::Weak;
          spec.threshold = p;
          ++stats.pgame_solves;
          it = weak_regions.emplace(p, solve_p_game(arena, in.objective, spec).max_region).first;
        }
        if (it->second[v])
          throw std::logic_error("threshold-game cross-check failed at node " + g.names[v]);
      }
    }

    for (uint32_t i : members) value[i] = node_value.at(states[i].token);
  };

  for (uint32_t m = 0; m <= k; ++m) {
    if (layer[m].empty()) continue;
    for (uint32_t i : layer[m]) {
      const State& s = states[i];
      if (!s.toss) continue;
      ++stats.toss_states;
      uint32_t j = rel_index[in.group_of[s.token]];
      uint32_t cmax = index.at({s.own + pow3[j], s.token});
      uint32_t cmin = index.at({s.own + 2 * pow3[j], s.token});
      const Rational& t = in.group_toss[in.group_of[s.token]];
      value[i] = t * value[cmax] + (1 - t) * value[cmin];
    }
    std::map<uint64_t, std::vector<uint32_t>> by_own;
    for (uint32_t i : layer[m])
      if (!states[i].toss) by_own[states[i].own].push_back(i);
    for (auto& [own, members] : by_own) {
      ++stats.ownerships;
      solve_ownership(own, members);
    }
  }

  ExplicitResult out;
  out.value = value[0];
  out.stats = stats;
  out.table.groups = rel;
  out.table.group_universe = in.group_universe;
  out.table.entries.reserve(states.size());
  for (uint32_t i = 0; i < states.size(); ++i)
    out.table.entries.push_back({states[i].own, states[i].token, value[i], states[i].unassigned});
  return out;
}

namespace {

EngineInput identity_input(const GameGraph& g, const TossFunction& t, Objective obj) {
  EngineInput in;
  in.graph = &g;
  in.objective = std::move(obj);
  in.group_of.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) in.group_of[v] = v;
  in.group_toss = t.prob;
  in.group_universe = g.node_count();
  return in;
}

ExplicitResult solve_energy_at_cap(const GameGraph& g, const TossFunction& t,
                                   const EnergyObjective& obj, long long cap,
                                   const ExplicitOptions& opt) {
  EnergyProduct product = energy_product(g, obj.weight, obj.credit, cap);
  size_t n_orig = g.node_count();
  EngineInput in;
  in.graph = &product.graph;
  in.objective = product.safety;
  in.group_universe = n_orig + 1;  // one synthetic group for `dead`
  in.group_of.resize(product.graph.node_count());
  for (NodeId p = 0; p < product.graph.node_count(); ++p)
    in.group_of[p] = (p == product.dead) ? static_cast<NodeId>(n_orig) : product.group[p];
  in.group_toss = t.prob;
  in.group_toss.push_back(make_rational(1, 2));  // dead's group is never tossed
  return solve_explicit(in, opt);
}

ExplicitResult solve_one_energy(const GameGraph& g, const TossFunction& t,
                                const EnergyObjective& obj, const ExplicitOptions& opt,
                                int retries) {
  long long max_abs = 0;
  for (long long w : obj.weight) max_abs = std::max(max_abs, w < 0 ? -w : w);
  long long cap = obj.credit + static_cast<long long>(g.node_count()) * max_abs;
  for (int attempt = 0;; ++attempt) {
    ExplicitResult at_cap = solve_energy_at_cap(g, t, obj, cap, opt);
    ExplicitResult at_double = solve_energy_at_cap(g, t, obj, 2 * cap, opt);
    if (at_cap.value == at_double.value) return at_cap;
    if (attempt >= retries) throw std::runtime_error("energy clamp did not stabilize");
    cap *= 2;
  }
}

}  // namespace

ExplicitResult solve_one(const GameGraph& g, const TossFunction& t, const Objective& obj,
                         const ExplicitOptions& opt) {
  if (const auto* energy = std::get_if<EnergyObjective>(&obj))
    return solve_one_energy(g, t, *energy, opt, 6);
  return solve_explicit(identity_input(g, t, obj), opt);
}

Rational value_one(const GameGraph& g, const TossFunction& t, const Objective& obj,
                   const ExplicitOptions& opt) {
  return solve_one(g, t, obj, opt).value;
}

bool threshold_one(const GameGraph& g, const TossFunction& t, const Objective& obj,
                   const Rational& p, PGameMode mode, const ExplicitOptions& opt) {
  if (p < 0 || p > 1) throw std::invalid_argument("threshold outside [0,1]");
  Rational v = value_one(g, t, obj, opt);
  return mode == PGameMode::Strong ? v >= p : v > p;
}

EnergyProduct energy_product(const GameGraph& g, const std::vector<long long>& weight,
                             long long credit, long long cap) {
  if (weight.size() != g.node_count()) throw std::invalid_argument("weight table size mismatch");
  if (credit < 0) throw std::invalid_argument("negative initial credit");
  if (cap < credit) throw std::invalid_argument("cap below initial credit");

  EnergyProduct out;
  std::map<std::pair<NodeId, long long>, NodeId> ids;

  auto make_dead = [&]() {
    if (out.dead == kNoNode) {
      out.dead = out.graph.add_node("dead");
      out.group.push_back(out.dead);
      out.energy.push_back(-1);
    }
    return out.dead;
  };
  auto intern = [&](NodeId v, long long e) {
    auto [it, fresh] = ids.try_emplace({v, e}, kNoNode);
    if (fresh) {
      it->second = out.graph.add_node(g.names[v] + "@" + std::to_string(e));
      out.group.push_back(v);
      out.energy.push_back(e);
    }
    return it->second;
  };

  long long e0 = credit + weight[g.init];
  std::vector<std::pair<NodeId, long long>> queue;
  if (e0 < 0) {
    out.graph.init = make_dead();
  } else {
    e0 = std::min(e0, cap);
    out.graph.init = intern(g.init, e0);
    queue.push_back({g.init, e0});
  }
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    auto [v, e] = queue[qi];
    NodeId pv = ids.at({v, e});
    for (NodeId u : g.succ[v]) {
      long long eu = e + weight[u];
      NodeId pu;
      if (eu < 0) {
        pu = make_dead();
      } else {
        eu = std::min(eu, cap);
        bool fresh = ids.find({u, eu}) == ids.end();
        pu = intern(u, eu);
        if (fresh) queue.push_back({u, eu});
      }
      // distinct live successors stay distinct; only `dead` can repeat
      auto& list = out.graph.succ[pv];
      if (std::find(list.begin(), list.end(), pu) == list.end()) list.push_back(pu);
    }
  }
  if (out.dead != kNoNode) out.graph.add_edge(out.dead, out.dead);

  out.safety.priority.assign(out.graph.node_count(), 0);
  if (out.dead != kNoNode) out.safety.priority[out.dead] = 1;
  return out;
}

Rational value_one_energy(const GameGraph& g, const TossFunction& t, const EnergyObjective& obj,
                          const ExplicitOptions& opt, int retries) {
  return solve_one_energy(g, t, obj, opt, retries).value;
}

StateCount explicit_state_count(const GameGraph& g) {
  StateCount out;
  size_t n = g.node_count();
  size_t k = relevant_nodes(g).size();
  BigInt p3k = 1, p3n = 1;
  for (size_t i = 0; i < k; ++i) p3k *= 3;
  for (size_t i = 0; i < n; ++i) p3n *= 3;
  out.by_relevant = p3k * n;
  out.by_all_nodes = p3n * n;
  return out;
}

}  // namespace randctl
