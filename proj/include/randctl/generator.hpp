#pragma once

#include <cstdint>

#include "randctl/io.hpp"

namespace randctl {

enum class ObjectiveKind { Reachability, Parity, Energy };

struct GeneratorParams {
  size_t nodes = 12;
  size_t max_outdegree = 4;
  ObjectiveKind kind = ObjectiveKind::Reachability;
  int priority_bound = 6;        // priorities drawn uniformly from [0, bound)
  long long weight_bound = 10;   // weights drawn uniformly from [-bound, bound]
  long long credit = 0;
  Rational toss = make_rational(1, 2);
  uint64_t seed = 0;
};

// Seeded random game: every node gets a uniform outdegree in
// [1, max_outdegree] worth of distinct successors; reachability games
// designate the last node as the absorbing target.  Always validates.
ParsedGame generate_random_game(const GeneratorParams& params);

}  // namespace randctl
