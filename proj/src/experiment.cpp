#include "randctl/experiment.hpp"

#include <sstream>
#include <stdexcept>

#include "randctl/rng.hpp"

namespace randctl {

namespace {

constexpr int kCsvDigits = 9;

// floor(sqrt(x)) rendered with `digits` decimals; a lower bound of sqrt(x)
Rational sqrt_lower(const Rational& x, int digits) {
  BigInt scale = 1;
  for (int i = 0; i < 2 * digits; ++i) scale *= 10;
  BigInt scaled = rat_num(x) * scale / rat_den(x);
  BigInt root = boost::multiprecision::sqrt(scaled);
  BigInt den = 1;
  for (int i = 0; i < digits; ++i) den *= 10;
  return Rational(root, den);
}

}  // namespace

uint64_t derive_seed(uint64_t master, uint64_t index) {
  uint64_t state = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  return splitmix64(state);
}

ExperimentResult run_convergence_experiment(const ExperimentParams& params) {
  if (params.games.empty()) throw std::invalid_argument("no games");
  if (params.total_samples == 0) throw std::invalid_argument("no samples");
  if (params.stride == 0) throw std::invalid_argument("zero stride");

  ExperimentResult out;
  out.seed = params.seed;
  const size_t games = params.games.size();
  TwoOptions two;
  two.workers = params.workers;

  for (size_t i = 0; i < games; ++i) {
    const ParsedGame& game = params.games[i];
    Rational exact = exact_value_two(game.graph, game.toss, game.objective, two);
    EstimateReport report =
        estimate_with_budget(game.graph, game.toss, game.objective, params.total_samples,
                             derive_seed(params.seed, i), params.stride, two);
    if (i == 0) {
      out.sample_index.reserve(report.trace.size());
      for (const auto& [at, value] : report.trace) out.sample_index.push_back(at);
    }
    bool absolute = exact == 0;
    std::vector<Rational> errors;
    errors.reserve(report.trace.size());
    std::ostringstream csv;
    csv << "samples,estimate," << (absolute ? "abs_error" : "ratio_error") << "\n";
    for (const auto& [at, estimate] : report.trace) {
      Rational err = absolute ? Rational(abs(estimate)) : Rational(abs(estimate / exact - 1));
      csv << at << "," << decimal_string(estimate, kCsvDigits) << ","
          << decimal_string(err, kCsvDigits) << "\n";
      errors.push_back(std::move(err));
    }
    out.exact_value.push_back(std::move(exact));
    out.absolute_error.push_back(absolute);
    out.error.push_back(std::move(errors));
    out.per_game_csv.push_back(csv.str());
  }

  const size_t rows = out.sample_index.size();
  for (const auto& errors : out.error)
    if (errors.size() != rows) throw std::logic_error("trace shapes diverged");

  auto [ln_lower, ln_upper] = ln_enclosure(2 / params.delta);
  (void)ln_upper;
  std::ostringstream csv;
  csv << "samples,mean_error,variance,hoeffding_eps\n";
  for (size_t r = 0; r < rows; ++r) {
    Rational mean = 0;
    for (const auto& errors : out.error) mean += errors[r];
    mean /= static_cast<long long>(games);
    Rational variance = 0;
    for (const auto& errors : out.error) variance += (errors[r] - mean) * (errors[r] - mean);
    variance /= static_cast<long long>(games);
    Rational eps = sqrt_lower(ln_lower / (2 * static_cast<long long>(out.sample_index[r])),
                              kCsvDigits);
    csv << out.sample_index[r] << "," << decimal_string(mean, kCsvDigits) << ","
        << decimal_string(variance, kCsvDigits) << "," << decimal_string(eps, kCsvDigits) << "\n";
    out.mean_error.push_back(std::move(mean));
    out.variance.push_back(std::move(variance));
    out.hoeffding.push_back(std::move(eps));
  }
  out.aggregate_csv = csv.str();
  return out;
}

}  // namespace randctl
