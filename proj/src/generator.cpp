#include "randctl/generator.hpp"

#include <numeric>
#include <stdexcept>

#include "randctl/rng.hpp"

namespace randctl {

namespace {

// uniform draw from [0, bound) without modulo bias
uint64_t uniform_below(Xoshiro256ss& rng, uint64_t bound) {
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t draw;
  do {
    draw = rng.next();
  } while (draw >= limit);
  return draw % bound;
}

}  // namespace

ParsedGame generate_random_game(const GeneratorParams& params) {
  if (params.nodes < 1) throw std::invalid_argument("need at least one node");
  if (params.max_outdegree < 1) throw std::invalid_argument("max outdegree must be positive");
  if (params.priority_bound < 1) throw std::invalid_argument("priority bound must be positive");
  if (params.weight_bound < 0) throw std::invalid_argument("negative weight bound");
  if (params.credit < 0) throw std::invalid_argument("negative credit");
  if (!(params.toss > 0 && params.toss < 1))
    throw std::invalid_argument("toss default outside (0,1)");

  Xoshiro256ss rng(params.seed);
  ParsedGame out;
  out.name = "generated-" + std::to_string(params.seed);
  GameGraph& g = out.graph;
  const size_t n = params.nodes;
  for (size_t v = 0; v < n; ++v) g.add_node("v" + std::to_string(v));
  g.init = 0;

  bool reach = params.kind == ObjectiveKind::Reachability;
  NodeId target = static_cast<NodeId>(n - 1);
  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (NodeId v = 0; v < n; ++v) {
    if (reach && v == target) {
      g.add_edge(v, v);
      continue;
    }
    size_t degree = 1 + uniform_below(rng, std::min(params.max_outdegree, n));
    // partial Fisher-Yates: the first `degree` entries are the successors
    for (size_t i = 0; i < degree; ++i) {
      size_t j = i + uniform_below(rng, n - i);
      std::swap(pool[i], pool[j]);
      g.add_edge(v, pool[i]);
    }
  }

  out.toss.prob.assign(n, params.toss);

  if (reach) {
    out.objective = ReachObjective{{target}};
  } else if (params.kind == ObjectiveKind::Parity) {
    ParityObjective parity;
    parity.priority.resize(n);
    for (size_t v = 0; v < n; ++v)
      parity.priority[v] = static_cast<int>(uniform_below(rng, params.priority_bound));
    out.objective = std::move(parity);
  } else {
    EnergyObjective energy;
    energy.credit = params.credit;
    energy.weight.resize(n);
    for (size_t v = 0; v < n; ++v)
      energy.weight[v] =
          static_cast<long long>(uniform_below(rng, 2 * params.weight_bound + 1)) -
          params.weight_bound;
    out.objective = std::move(energy);
  }

  if (auto err = validate(g, out.objective))
    throw std::logic_error("generated game invalid: " + err->message);
  return out;
}

}  // namespace randctl
