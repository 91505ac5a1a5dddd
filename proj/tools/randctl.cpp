#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "randctl/experiment.hpp"
#include "randctl/explicit_game.hpp"
#include "randctl/generator.hpp"
#include "randctl/io.hpp"
#include "randctl/qualitative.hpp"
#include "randctl/reductions.hpp"
#include "randctl/sgame_two.hpp"

namespace {

using namespace randctl;

std::string render(const Rational& value, int decimal_digits) {
  return decimal_digits > 0 ? decimal_string(value, decimal_digits) : format_rational(value);
}

Rational cli_rational(const std::string& text, const char* what) {
  auto value = parse_rational(text);
  if (!value) throw std::invalid_argument(std::string("malformed ") + what + " '" + text + "'");
  return *value;
}

uint64_t resolve_seed(bool given, uint64_t value) {
  if (given) return value;
  if (const char* env = std::getenv("RANDCTL_SEED")) {
    try {
      size_t used = 0;
      uint64_t parsed = std::stoull(env, &used);
      if (used == std::string(env).size()) return parsed;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("RANDCTL_SEED is not an unsigned integer");
  }
  return 0;
}

std::string join_names(const GameGraph& g, const std::vector<NodeId>& path) {
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out += ",";
    out += g.names[path[i]];
  }
  return out;
}

void print_qualitative(const ParsedGame& game) {
  SureWinResult sure = sure_win(game.graph, game.objective);
  QualitativeOneTwo one_two = qualitative_one_two(game.graph, game.objective);
  std::cout << "sure=" << (sure.sure ? "true" : "false")
            << " almost_sure(one/two)=" << (one_two.almost_sure ? "true" : "false");
  if (std::holds_alternative<ReachObjective>(game.objective)) {
    bool rtg = almost_sure_rtg_reach(game.graph, std::get<ReachObjective>(game.objective));
    std::cout << " almost_sure(rtg,reach)=" << (rtg ? "true" : "false");
  }
  std::cout << "\n";
  if (!sure.sure && sure.witness) {
    std::cout << "bad_lasso stem=" << join_names(game.graph, sure.witness->stem)
              << " cycle=" << join_names(game.graph, sure.witness->cycle) << "\n";
  }
}

void emit(const std::string& content, const std::string& output) {
  if (output.empty())
    std::cout << content;
  else
    write_text_file(output, content);
}

ObjectiveKind parse_kind(const std::string& name) {
  if (name == "reachability") return ObjectiveKind::Reachability;
  if (name == "parity") return ObjectiveKind::Parity;
  return ObjectiveKind::Energy;
}

const char* kind_name(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Reachability: return "reachability";
    case ObjectiveKind::Parity: return "parity";
    default: return "energy";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and approximate solvers for two-player games with randomised control"};
  app.require_subcommand(1);

  std::string file, output, variant, format = "game", from, transform, objective = "all";
  std::string epsilon = "1/20", delta = "1/20", threshold, toss = "1/2", out_dir;
  uint64_t seed = 0, trace_stride = 0, samples = 20'000, stride = 100, game_count = 10;
  unsigned workers = 0;
  int decimal_digits = 0;
  bool exact = false, estimate = false, full = false;
  GeneratorParams gen;

  auto* validate_cmd = app.add_subcommand("validate", "check a game, reliability, or qbf file");
  validate_cmd->add_option("file", file)->required();
  validate_cmd->add_option("--format", format)
      ->check(CLI::IsMember({"game", "reliability", "qbf"}));

  auto* solve_cmd = app.add_subcommand("solve", "compute the value of a game file");
  solve_cmd->add_option("file", file)->required();
  solve_cmd->add_option("--variant", variant)
      ->required()
      ->check(CLI::IsMember({"rtg-qualitative", "toss-as-you-go", "toss-at-start"}));
  solve_cmd->add_flag("--exact", exact, "exact value (default)");
  solve_cmd->add_flag("--estimate", estimate, "Monte-Carlo estimate (toss-at-start only)");
  solve_cmd->add_option("--epsilon", epsilon, "additive error (estimate)");
  solve_cmd->add_option("--delta", delta, "failure probability (estimate)");
  solve_cmd->add_option("--threshold", threshold, "also decide value >= threshold");
  auto* solve_seed = solve_cmd->add_option("--seed", seed, "sampling seed");
  solve_cmd->add_option("--workers", workers, "worker threads (0 = hardware)");
  solve_cmd->add_option("--trace-stride", trace_stride, "print running estimates every N samples");
  solve_cmd->add_option("--decimal", decimal_digits, "print decimals with this many digits");

  auto* qual_cmd = app.add_subcommand("qualitative", "sure / almost-sure winning analysis");
  qual_cmd->add_option("file", file)->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "build games from qbf/reliability, transform objectives");
  reduce_cmd->add_option("file", file)->required();
  reduce_cmd->add_option("--from", from)->check(CLI::IsMember({"qbf", "reliability"}));
  reduce_cmd->add_option("--transform", transform)
      ->check(CLI::IsMember({"parity", "energy-one", "energy-two"}));
  reduce_cmd->add_option("-o,--output", output, "write here instead of stdout");

  auto* gen_cmd = app.add_subcommand("generate", "emit a seeded random game");
  gen_cmd->add_option("--nodes", gen.nodes);
  gen_cmd->add_option("--max-outdegree", gen.max_outdegree);
  gen_cmd->add_option("--objective", objective)
      ->check(CLI::IsMember({"reachability", "parity", "energy"}));
  gen_cmd->add_option("--priority-bound", gen.priority_bound);
  gen_cmd->add_option("--weight-bound", gen.weight_bound);
  gen_cmd->add_option("--credit", gen.credit);
  gen_cmd->add_option("--toss", toss, "default toss probability");
  auto* gen_seed = gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("-o,--output", output);

  auto* exp_cmd = app.add_subcommand("experiment", "convergence experiment with CSV output");
  exp_cmd->add_option("--games", game_count);
  exp_cmd->add_option("--nodes", gen.nodes);
  exp_cmd->add_option("--max-outdegree", gen.max_outdegree);
  exp_cmd->add_option("--objective", objective)
      ->check(CLI::IsMember({"reachability", "parity", "energy", "all"}));
  exp_cmd->add_option("--samples", samples);
  exp_cmd->add_option("--stride", stride);
  exp_cmd->add_option("--epsilon", epsilon, "Hoeffding reference epsilon");
  exp_cmd->add_option("--delta", delta, "Hoeffding reference delta");
  auto* exp_seed = exp_cmd->add_option("--seed", seed);
  exp_cmd->add_option("--workers", workers);
  exp_cmd->add_option("--out-dir", out_dir)->required();
  exp_cmd->add_flag("--full", full, "paper-scale profile: 20 nodes, outdegree 20, 100000 samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(validate_cmd)) {
      std::string text = read_text_file(file);
      if (format == "game") {
        ParsedGame game = parse_game(text);
        std::cout << "valid: " << game.name << " (" << game.graph.node_count() << " nodes, "
                  << relevant_nodes(game.graph).size() << " relevant)\n";
      } else if (format == "reliability") {
        ParsedReliability rel = parse_reliability(text);
        size_t edges = 0;
        for (const auto& list : rel.instance.graph.succ) edges += list.size();
        std::cout << "valid: " << rel.name << " (" << rel.instance.graph.node_count()
                  << " nodes, " << edges << " edges)\n";
      } else {
        Pcnf f = parse_qbf(text);
        std::cout << "valid: " << f.pairs << " quantifier pairs, " << f.clauses.size()
                  << " clauses\n";
      }
      return 0;
    }

    if (app.got_subcommand(solve_cmd)) {
      if (exact && estimate) {
        std::cerr << "error: pick one of --exact / --estimate\n";
        return 2;
      }
      if (estimate && variant != "toss-at-start") {
        std::cerr << "error: --estimate applies to --variant toss-at-start\n";
        return 2;
      }
      ParsedGame game = parse_game(read_text_file(file));
      if (variant == "rtg-qualitative") {
        print_qualitative(game);
        return 0;
      }
      Rational value;
      if (estimate) {
        EstimateReport report = estimate_value_two(
            game.graph, game.toss, game.objective, cli_rational(epsilon, "epsilon"),
            cli_rational(delta, "delta"), resolve_seed(solve_seed->count() > 0, seed), trace_stride,
            TwoOptions{workers, 24});
        for (const auto& [at, running] : report.trace)
          if (trace_stride) std::cout << "trace " << at << " " << render(running, decimal_digits) << "\n";
        std::cout << "estimate=" << render(report.estimate, decimal_digits)
                  << " samples=" << report.samples << " epsilon=" << format_rational(report.epsilon)
                  << " delta=" << format_rational(report.delta) << " seed=" << report.seed << "\n";
        value = report.estimate;
      } else if (variant == "toss-as-you-go") {
        value = value_one(game.graph, game.toss, game.objective);
        std::cout << render(value, decimal_digits) << "\n";
      } else {
        value = exact_value_two(game.graph, game.toss, game.objective, TwoOptions{workers, 24});
        std::cout << render(value, decimal_digits) << "\n";
      }
      if (!threshold.empty()) {
        Rational p = cli_rational(threshold, "threshold");
        if (p < 0 || p > 1) throw std::invalid_argument("threshold outside [0,1]");
        std::cout << ">= " << format_rational(p) << ": " << (value >= p ? "true" : "false")
                  << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(qual_cmd)) {
      print_qualitative(parse_game(read_text_file(file)));
      return 0;
    }

    if (app.got_subcommand(reduce_cmd)) {
      if (from.empty() && transform.empty()) {
        std::cerr << "error: reduce needs --from and/or --transform\n";
        return 2;
      }
      ParsedGame game;
      std::string header;
      if (from == "qbf") {
        QbfGame qbf = qbf_to_game(parse_qbf(read_text_file(file)));
        header = "# theta=" + format_rational(qbf.theta) + "\n";
        game.name = "qbf-game";
        game.graph = std::move(qbf.graph);
        game.toss = std::move(qbf.toss);
        game.objective = std::move(qbf.objective);
      } else if (from == "reliability") {
        ParsedReliability rel = parse_reliability(read_text_file(file));
        ReliabilityGame built = reliability_to_game(rel.instance);
        game.name = rel.name + "-game";
        game.graph = std::move(built.graph);
        game.toss = std::move(built.toss);
        game.objective = std::move(built.objective);
      } else {
        game = parse_game(read_text_file(file));
      }
      if (!transform.empty()) {
        const auto* reach = std::get_if<ReachObjective>(&game.objective);
        if (!reach) throw std::invalid_argument("objective transforms start from reachability");
        if (transform == "parity")
          game.objective = reach_to_parity(game.graph, *reach);
        else
          game.objective = reach_to_energy(game.graph, *reach,
                                           transform == "energy-one"
                                               ? CreditContext::TossAsYouGo
                                               : CreditContext::TossAtStart);
      }
      emit(header + serialize_game(game), output);
      return 0;
    }

    if (app.got_subcommand(gen_cmd)) {
      gen.kind = parse_kind(objective == "all" ? "reachability" : objective);
      gen.toss = cli_rational(toss, "toss");
      gen.seed = resolve_seed(gen_seed->count() > 0, seed);
      emit(serialize_game(generate_random_game(gen)), output);
      return 0;
    }

    if (app.got_subcommand(exp_cmd)) {
      if (full) {
        gen.nodes = 20;
        gen.max_outdegree = 20;
        samples = 100'000;
      }
      uint64_t master = resolve_seed(exp_seed->count() > 0, seed);
      std::filesystem::create_directories(out_dir);
      std::vector<ObjectiveKind> kinds;
      if (objective == "all")
        kinds = {ObjectiveKind::Reachability, ObjectiveKind::Parity, ObjectiveKind::Energy};
      else
        kinds = {parse_kind(objective)};
      for (size_t k = 0; k < kinds.size(); ++k) {
        ExperimentParams params;
        params.epsilon = cli_rational(epsilon, "epsilon");
        params.delta = cli_rational(delta, "delta");
        params.total_samples = samples;
        params.stride = stride;
        params.workers = workers;
        params.seed = derive_seed(master, 100 + k);
        GeneratorParams game_params = gen;
        game_params.kind = kinds[k];
        for (uint64_t i = 0; i < game_count; ++i) {
          game_params.seed = derive_seed(derive_seed(master, k), i);
          params.games.push_back(generate_random_game(game_params));
        }
        ExperimentResult result = run_convergence_experiment(params);
        std::string prefix = out_dir + "/" + kind_name(kinds[k]);
        for (size_t i = 0; i < result.per_game_csv.size(); ++i)
          write_text_file(prefix + "-game" + std::to_string(i) + ".csv", result.per_game_csv[i]);
        write_text_file(prefix + "-aggregate.csv", result.aggregate_csv);
        std::cout << kind_name(kinds[k]) << ": games=" << game_count << " samples=" << samples
                  << " seed=" << master
                  << " final_mean_error=" << decimal_string(result.mean_error.back(), 6) << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
