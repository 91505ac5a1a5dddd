#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "randctl/io.hpp"
#include "randctl/sgame_two.hpp"

namespace randctl {

struct ExperimentParams {
  std::vector<ParsedGame> games;
  Rational epsilon = make_rational(1, 200);  // Hoeffding reference curve only
  Rational delta = make_rational(1, 20);
  uint64_t total_samples = 20'000;
  uint64_t stride = 100;
  uint64_t seed = 0;  // master; per-game sub-seeds derived from it
  unsigned workers = 0;
};

struct ExperimentResult {
  uint64_t seed = 0;
  std::vector<uint64_t> sample_index;          // one entry per trace row
  std::vector<Rational> exact_value;           // per game
  std::vector<bool> absolute_error;            // per game: exact value is 0
  std::vector<std::vector<Rational>> error;    // per game, per row
  std::vector<Rational> mean_error, variance;  // across games, per row
  std::vector<Rational> hoeffding;             // sqrt(ln(2/delta)/(2n)) lower bound, per row
  std::vector<std::string> per_game_csv;       // samples,estimate,ratio_error|abs_error
  std::string aggregate_csv;                   // samples,mean_error,variance,hoeffding_eps
};

// Per game: exact toss-at-start value E, then a seeded sampling run whose
// running estimates O yield |O/E - 1| per row (absolute error |O - E| when
// E = 0, flagged).  Aggregates mean and population variance across games.
ExperimentResult run_convergence_experiment(const ExperimentParams& params);

// Sub-seed for the i-th game of a master-seeded experiment.
uint64_t derive_seed(uint64_t master, uint64_t index);

}  // namespace randctl
