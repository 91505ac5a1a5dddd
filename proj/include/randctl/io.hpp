#pragma once

#include <stdexcept>
#include <string>

#include "randctl/game.hpp"
#include "randctl/reductions.hpp"

namespace randctl {

struct ParseError : std::runtime_error {
  int line;  // 1-based; 0 when the error is not tied to a line

  ParseError(int line_number, const std::string& message)
      : std::runtime_error(line_number > 0
                               ? "line " + std::to_string(line_number) + ": " + message
                               : message),
        line(line_number) {}
};

// Line-oriented game file ('#' starts a comment):
//   game <name>
//   node <id> [toss=<num>/<den>] [priority=<int>] [weight=<int>]
//   init <node>
//   objective reachability target=<node>[,<node>...]
//   objective parity
//   objective energy credit=<int>
//   edge <u> <v>
// Nodes must be declared before they are referenced, so the canonical order
// is: game, nodes, init, objective, edges.  Toss defaults to 1/2.  All
// numbers are integers or exact fractions.
struct ParsedGame {
  std::string name = "game";
  GameGraph graph;
  TossFunction toss;
  Objective objective;
};

ParsedGame parse_game(const std::string& text);
std::string serialize_game(const ParsedGame& game);

// Reliability instances reuse the node/edge directives (dead ends allowed,
// no per-node attributes) plus:
//   terminal <s> <t>
//   edgeprob <num>/<den>
struct ParsedReliability {
  std::string name = "reliability";
  ReliabilityInstance instance;
};

ParsedReliability parse_reliability(const std::string& text);

// Minimal dialect of the standard QBF text exchange format: optional
// 'p cnf <vars> <clauses>' header, then single-variable quantifier blocks
// 'a <var> 0' / 'e <var> 0' alternating from 'a', with variables numbered
// 1..2n in prefix order, then one clause of signed variables per line,
// 0-terminated.  'c' lines are comments.
Pcnf parse_qbf(const std::string& text);

// File helpers shared by the CLI and tests.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace randctl
