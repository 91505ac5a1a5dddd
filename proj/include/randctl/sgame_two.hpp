#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "randctl/game.hpp"
#include "randctl/rng.hpp"
#include "randctl/solvers.hpp"

namespace randctl {

struct TwoOptions {
  unsigned workers = 0;      // 0 = one per hardware thread
  size_t max_relevant = 24;  // enumeration guard (2^k deterministic solves)
};

// Value of the toss-at-start game: sum over all complete assignments of the
// relevant nodes of assignment_probability * [Max wins the induced
// deterministic game from init].  Exact; guarded by opt.max_relevant.
Rational exact_value_two(const GameGraph& g, const TossFunction& t, const Objective& obj,
                         const TwoOptions& opt = {});

// Smallest n with n >= ln(2/delta) / (2 epsilon^2).  The logarithm is
// evaluated by interval arithmetic (atanh series with explicit remainder
// bounds), escalating precision until both interval ends round to the same
// ceiling, so the count is exact and platform-independent.
uint64_t sample_count(const Rational& epsilon, const Rational& delta);

// One Bernoulli draw per relevant node: Max iff u / 2^64 < t(v) for a 64-bit
// uniform u, compared exactly.  Toss probabilities whose denominator does not
// divide 2^64 incur a bias below 2^-64.
PartialOwnership sample_assignment(const TossFunction& t, const std::vector<NodeId>& relevant,
                                   size_t universe, Xoshiro256ss& rng);

struct EstimateReport {
  Rational estimate;  // wins / samples
  uint64_t samples = 0;
  Rational epsilon, delta;
  uint64_t seed = 0;
  std::vector<std::pair<uint64_t, Rational>> trace;  // (sample index, running estimate)
};

// Monte-Carlo estimator: draws sample_count(epsilon, delta) assignments,
// solves each induced deterministic game and reports the winning frequency,
// with |estimate - value| <= epsilon at confidence 1 - delta (Hoeffding).
// Per-sample randomness is derived from (seed, sample index), so the report
// is bit-identical for any worker count.  trace_stride = 0 records only the
// final entry; otherwise entries appear at stride multiples plus the end.
EstimateReport estimate_value_two(const GameGraph& g, const TossFunction& t, const Objective& obj,
                                  const Rational& epsilon, const Rational& delta, uint64_t seed,
                                  uint64_t trace_stride = 0, const TwoOptions& opt = {});

// Same estimator with an explicit sample budget instead of a Hoeffding count;
// the report's epsilon and delta are left at zero.
EstimateReport estimate_with_budget(const GameGraph& g, const TossFunction& t,
                                    const Objective& obj, uint64_t samples, uint64_t seed,
                                    uint64_t trace_stride = 0, const TwoOptions& opt = {});

// [lower, upper] enclosure of ln(y) for rational y > 1 (atanh series with an
// explicit remainder bound); `terms` trades width for work.
std::pair<Rational, Rational> ln_enclosure(const Rational& y, int terms = 64);

}  // namespace randctl
