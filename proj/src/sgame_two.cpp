#include "randctl/sgame_two.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace randctl {

namespace {

unsigned resolve_workers(unsigned requested, uint64_t items) {
  unsigned w = requested ? requested : std::thread::hardware_concurrency();
  if (w == 0) w = 1;
  if (items < w) w = items ? static_cast<unsigned>(items) : 1;
  return w;
}

// run fn(chunk, lo, hi) on `workers` threads over contiguous ranges of [0, n)
template <typename Fn>
void parallel_chunks(uint64_t n, unsigned workers, Fn fn) {
  if (workers <= 1) {
    fn(0u, uint64_t(0), n);
    return;
  }
  std::vector<std::thread> pool;
  uint64_t per = (n + workers - 1) / workers;
  for (unsigned c = 0; c < workers; ++c) {
    uint64_t lo = c * per, hi = std::min(n, lo + per);
    if (lo >= hi) break;
    pool.emplace_back([&fn, c, lo, hi] { fn(c, lo, hi); });
  }
  for (auto& th : pool) th.join();
}

bool max_wins(const GameGraph& g, const std::vector<Player>& owner, const Objective& obj) {
  Arena arena{&g, owner};
  return solve(arena, obj).max_region[g.init];
}

BigInt ceil_positive(const Rational& r) {
  BigInt num = rat_num(r), den = rat_den(r);
  BigInt q = num / den;
  if (q * den != num) ++q;
  return q;
}

// [lower, upper] enclosure of atanh(z) for rational z in [0, 1)
std::pair<Rational, Rational> atanh_interval(const Rational& z, int terms) {
  Rational sum = 0, pw = z;
  const Rational z2 = z * z;
  for (int i = 0; i < terms; ++i) {
    sum += pw / (2 * i + 1);
    pw *= z2;
  }
  Rational rem = pw / ((2 * terms + 1) * (1 - z2));
  return {sum, sum + rem};
}

}  // namespace

// ln y = m ln 2 + 2 atanh((y' - 1) / (y' + 1)) with y' in [1, 2)
std::pair<Rational, Rational> ln_enclosure(const Rational& value, int terms) {
  if (!(value > 1)) throw std::invalid_argument("ln enclosure needs y > 1");
  Rational y = value;
  long long m = 0;
  while (y >= 2) {
    y /= 2;
    ++m;
  }
  auto ln2 = atanh_interval(make_rational(1, 3), terms);
  auto frac = atanh_interval((y - 1) / (y + 1), terms);
  return {2 * (m * ln2.first + frac.first), 2 * (m * ln2.second + frac.second)};
}

Rational exact_value_two(const GameGraph& g, const TossFunction& t, const Objective& obj,
                         const TwoOptions& opt) {
  std::vector<NodeId> relevant = relevant_nodes(g);
  size_t k = relevant.size();
  if (k > opt.max_relevant) throw std::invalid_argument("relevant-node count exceeds guard");
  uint64_t total = uint64_t(1) << k;

  unsigned workers = resolve_workers(opt.workers, total);
  std::vector<Rational> partial(workers, Rational(0));
  parallel_chunks(total, workers, [&](unsigned chunk, uint64_t lo, uint64_t hi) {
    std::vector<Player> owner(g.node_count(), Player::Max);
    Rational sum = 0;
    for (uint64_t index = lo; index < hi; ++index) {
      Rational prob = 1;
      for (size_t j = 0; j < k; ++j) {
        bool min_owned = (index >> j) & 1;
        owner[relevant[j]] = min_owned ? Player::Min : Player::Max;
        prob *= min_owned ? 1 - t.prob[relevant[j]] : t.prob[relevant[j]];
      }
      if (max_wins(g, owner, obj)) sum += prob;
    }
    partial[chunk] = std::move(sum);
  });

  Rational value = 0;
  for (const Rational& part : partial) value += part;
  return value;
}

uint64_t sample_count(const Rational& epsilon, const Rational& delta) {
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon outside (0,1)");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta outside (0,1)");
  const Rational y = 2 / delta;
  const Rational denom = 2 * epsilon * epsilon;
  for (int terms = 8; terms <= 1 << 14; terms *= 2) {
    auto [llo, lhi] = ln_enclosure(y, terms);
    BigInt clo = ceil_positive(llo / denom);
    BigInt chi = ceil_positive(lhi / denom);
    if (clo == chi) return clo.convert_to<uint64_t>();
  }
  throw std::runtime_error("sample count interval did not collapse");
}

PartialOwnership sample_assignment(const TossFunction& t, const std::vector<NodeId>& relevant,
                                   size_t universe, Xoshiro256ss& rng) {
  PartialOwnership own(universe);
  for (NodeId v : relevant) {
    uint64_t u = rng.next();
    bool max_owned = BigInt(u) * rat_den(t.prob[v]) < (rat_num(t.prob[v]) << 64);
    own.assign[v] = max_owned ? Player::Max : Player::Min;
  }
  return own;
}

EstimateReport estimate_with_budget(const GameGraph& g, const TossFunction& t,
                                    const Objective& obj, uint64_t samples, uint64_t seed,
                                    uint64_t trace_stride, const TwoOptions& opt) {
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  EstimateReport report;
  report.seed = seed;
  report.samples = samples;

  std::vector<NodeId> relevant = relevant_nodes(g);
  std::vector<uint8_t> win(report.samples, 0);
  unsigned workers = resolve_workers(opt.workers, report.samples);
  parallel_chunks(report.samples, workers, [&](unsigned, uint64_t lo, uint64_t hi) {
    std::vector<Player> owner(g.node_count(), Player::Max);
    for (uint64_t index = lo; index < hi; ++index) {
      Xoshiro256ss rng = Xoshiro256ss::for_sample(seed, index);
      for (NodeId v : relevant) {
        uint64_t u = rng.next();
        bool max_owned = BigInt(u) * rat_den(t.prob[v]) < (rat_num(t.prob[v]) << 64);
        owner[v] = max_owned ? Player::Max : Player::Min;
      }
      win[index] = max_wins(g, owner, obj) ? 1 : 0;
    }
  });

  uint64_t stride = trace_stride ? trace_stride : report.samples;
  uint64_t wins = 0;
  for (uint64_t i = 0; i < report.samples; ++i) {
    wins += win[i];
    uint64_t done = i + 1;
    if (done % stride == 0 || done == report.samples)
      report.trace.emplace_back(done, Rational(wins) / done);
  }
  report.estimate = Rational(wins) / report.samples;
  return report;
}

EstimateReport estimate_value_two(const GameGraph& g, const TossFunction& t, const Objective& obj,
                                  const Rational& epsilon, const Rational& delta, uint64_t seed,
                                  uint64_t trace_stride, const TwoOptions& opt) {
  EstimateReport report =
      estimate_with_budget(g, t, obj, sample_count(epsilon, delta), seed, trace_stride, opt);
  report.epsilon = epsilon;
  report.delta = delta;
  return report;
}

}  // namespace randctl
