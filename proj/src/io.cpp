#include "randctl/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace randctl {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

std::string strip_comment(const std::string& line) {
  size_t hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

long long parse_int(const std::string& token, int line) {
  try {
    size_t used = 0;
    long long value = std::stoll(token, &used);
    if (used != token.size()) throw std::invalid_argument("");
    return value;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + token + "'");
  }
}

Rational parse_fraction(const std::string& token, int line) {
  auto value = parse_rational(token);
  if (!value) throw ParseError(line, "malformed number '" + token + "'");
  return *value;
}

NodeId lookup(const GameGraph& g, const std::string& name, int line) {
  if (auto id = g.find(name)) return *id;
  throw ParseError(line, "unknown node '" + name + "'");
}

void check_node_name(const std::string& name, int line) {
  if (name.find('=') != std::string::npos || name.find(',') != std::string::npos)
    throw ParseError(line, "node name '" + name + "' contains a reserved character");
}

// splits "key=value", returns false for plain tokens
bool split_attr(const std::string& token, std::string& key, std::string& value) {
  size_t eq = token.find('=');
  if (eq == std::string::npos) return false;
  key = token.substr(0, eq);
  value = token.substr(eq + 1);
  return true;
}

}  // namespace

ParsedGame parse_game(const std::string& text) {
  ParsedGame out;
  GameGraph& g = out.graph;
  std::vector<int> priority;
  std::vector<long long> weight;
  bool saw_objective = false, saw_init = false;
  std::string obj_kind;
  std::vector<NodeId> targets;
  long long credit = 0;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto tokens = tokenize(strip_comment(raw));
    if (tokens.empty()) continue;
    const std::string& directive = tokens[0];

    if (directive == "game") {
      if (tokens.size() != 2) throw ParseError(line, "usage: game <name>");
      out.name = tokens[1];
    } else if (directive == "node") {
      if (tokens.size() < 2) throw ParseError(line, "usage: node <id> [key=value ...]");
      check_node_name(tokens[1], line);
      if (g.find(tokens[1])) throw ParseError(line, "duplicate node '" + tokens[1] + "'");
      g.add_node(tokens[1]);
      out.toss.prob.push_back(make_rational(1, 2));
      priority.push_back(-1);
      weight.push_back(kMissingWeight);
      for (size_t i = 2; i < tokens.size(); ++i) {
        std::string key, value;
        if (!split_attr(tokens[i], key, value))
          throw ParseError(line, "expected key=value, got '" + tokens[i] + "'");
        if (key == "toss")
          out.toss.prob.back() = parse_fraction(value, line);
        else if (key == "priority")
          priority.back() = static_cast<int>(parse_int(value, line));
        else if (key == "weight")
          weight.back() = parse_int(value, line);
        else
          throw ParseError(line, "unknown node attribute '" + key + "'");
      }
    } else if (directive == "init") {
      if (tokens.size() != 2) throw ParseError(line, "usage: init <node>");
      g.init = lookup(g, tokens[1], line);
      saw_init = true;
    } else if (directive == "objective") {
      if (saw_objective) throw ParseError(line, "multiple objective lines");
      saw_objective = true;
      if (tokens.size() < 2) throw ParseError(line, "missing objective kind");
      obj_kind = tokens[1];
      if (obj_kind == "reachability") {
        std::string key, value;
        if (tokens.size() != 3 || !split_attr(tokens[2], key, value) || key != "target")
          throw ParseError(line, "usage: objective reachability target=<node>[,<node>...]");
        std::istringstream list(value);
        std::string name;
        while (std::getline(list, name, ','))
          targets.push_back(lookup(g, name, line));
        if (targets.empty()) throw ParseError(line, "empty target list");
      } else if (obj_kind == "parity") {
        if (tokens.size() != 2) throw ParseError(line, "usage: objective parity");
      } else if (obj_kind == "energy") {
        std::string key, value;
        if (tokens.size() != 3 || !split_attr(tokens[2], key, value) || key != "credit")
          throw ParseError(line, "usage: objective energy credit=<int>");
        credit = parse_int(value, line);
      } else {
        throw ParseError(line, "unknown objective '" + obj_kind + "'");
      }
    } else if (directive == "edge") {
      if (tokens.size() != 3) throw ParseError(line, "usage: edge <from> <to>");
      NodeId from = lookup(g, tokens[1], line);
      NodeId to = lookup(g, tokens[2], line);
      auto& list = g.succ[from];
      if (std::find(list.begin(), list.end(), to) != list.end())
        throw ParseError(line, "duplicate edge");
      g.add_edge(from, to);
    } else if (directive == "terminal" || directive == "edgeprob") {
      throw ParseError(line, "'" + directive + "' belongs to reliability files");
    } else {
      throw ParseError(line, "unknown directive '" + directive + "'");
    }
  }

  if (g.node_count() == 0) throw ParseError(0, "no nodes declared");
  if (!saw_init) throw ParseError(0, "missing init line");
  if (!saw_objective) throw ParseError(0, "missing objective line");

  if (obj_kind == "reachability") {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    out.objective = ReachObjective{targets};
  } else if (obj_kind == "parity") {
    out.objective = ParityObjective{priority};
  } else {
    out.objective = EnergyObjective{weight, credit};
  }

  if (auto err = validate(g, out.objective))
    throw ParseError(0, err->node == kNoNode ? err->message
                                             : err->message + " (node " + g.names[err->node] + ")");
  if (auto err = validate_toss(g, out.toss))
    throw ParseError(0, err->node == kNoNode ? err->message
                                             : err->message + " (node " + g.names[err->node] + ")");
  return out;
}

std::string serialize_game(const ParsedGame& game) {
  const GameGraph& g = game.graph;
  const Rational half = make_rational(1, 2);
  std::ostringstream out;
  out << "game " << game.name << "\n";
  const auto* parity = std::get_if<ParityObjective>(&game.objective);
  const auto* energy = std::get_if<EnergyObjective>(&game.objective);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "node " << g.names[v];
    if (game.toss.prob[v] != half) out << " toss=" << format_rational(game.toss.prob[v]);
    if (parity && parity->priority[v] >= 0) out << " priority=" << parity->priority[v];
    if (energy && energy->weight[v] != kMissingWeight) out << " weight=" << energy->weight[v];
    out << "\n";
  }
  out << "init " << g.names[g.init] << "\n";
  if (const auto* reach = std::get_if<ReachObjective>(&game.objective)) {
    out << "objective reachability target=";
    for (size_t i = 0; i < reach->targets.size(); ++i)
      out << (i ? "," : "") << g.names[reach->targets[i]];
    out << "\n";
  } else if (parity) {
    out << "objective parity\n";
  } else {
    out << "objective energy credit=" << energy->credit << "\n";
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (NodeId u : g.succ[v]) out << "edge " << g.names[v] << " " << g.names[u] << "\n";
  return out.str();
}

ParsedReliability parse_reliability(const std::string& text) {
  ParsedReliability out;
  GameGraph& g = out.instance.graph;
  bool saw_terminal = false, saw_prob = false;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto tokens = tokenize(strip_comment(raw));
    if (tokens.empty()) continue;
    const std::string& directive = tokens[0];

    if (directive == "game") {
      if (tokens.size() != 2) throw ParseError(line, "usage: game <name>");
      out.name = tokens[1];
    } else if (directive == "node") {
      if (tokens.size() != 2)
        throw ParseError(line, "reliability nodes take no attributes");
      check_node_name(tokens[1], line);
      if (g.find(tokens[1])) throw ParseError(line, "duplicate node '" + tokens[1] + "'");
      g.add_node(tokens[1]);
    } else if (directive == "edge") {
      if (tokens.size() != 3) throw ParseError(line, "usage: edge <from> <to>");
      NodeId from = lookup(g, tokens[1], line);
      NodeId to = lookup(g, tokens[2], line);
      auto& list = g.succ[from];
      if (std::find(list.begin(), list.end(), to) != list.end())
        throw ParseError(line, "duplicate edge");
      g.add_edge(from, to);
    } else if (directive == "terminal") {
      if (tokens.size() != 3) throw ParseError(line, "usage: terminal <s> <t>");
      out.instance.s = lookup(g, tokens[1], line);
      out.instance.t = lookup(g, tokens[2], line);
      saw_terminal = true;
    } else if (directive == "edgeprob") {
      if (tokens.size() != 2) throw ParseError(line, "usage: edgeprob <num>/<den>");
      out.instance.p = parse_fraction(tokens[1], line);
      saw_prob = true;
    } else if (directive == "init" || directive == "objective") {
      throw ParseError(line, "'" + directive + "' belongs to game files");
    } else {
      throw ParseError(line, "unknown directive '" + directive + "'");
    }
  }

  if (!saw_terminal) throw ParseError(0, "missing terminal line");
  if (!saw_prob) throw ParseError(0, "missing edgeprob line");
  if (auto err = validate_reliability(out.instance))
    throw ParseError(0, err->node == kNoNode ? err->message
                                             : err->message + " (node " + g.names[err->node] + ")");
  return out;
}

Pcnf parse_qbf(const std::string& text) {
  Pcnf out;
  long long declared_vars = -1, declared_clauses = -1;
  bool in_clauses = false;
  int next_var = 1;  // next expected prefix variable

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto tokens = tokenize(raw);
    if (tokens.empty() || tokens[0] == "c") continue;

    if (tokens[0] == "p") {
      if (tokens.size() != 4 || tokens[1] != "cnf")
        throw ParseError(line, "usage: p cnf <vars> <clauses>");
      declared_vars = parse_int(tokens[2], line);
      declared_clauses = parse_int(tokens[3], line);
    } else if (tokens[0] == "a" || tokens[0] == "e") {
      if (in_clauses) throw ParseError(line, "quantifier block after clauses");
      if (tokens.size() != 3 || tokens[2] != "0")
        throw ParseError(line, "single-variable quantifier blocks required");
      bool universal = tokens[0] == "a";
      bool odd = next_var % 2 == 1;
      if (universal != odd)
        throw ParseError(line, "prefix must alternate starting universally");
      if (parse_int(tokens[1], line) != next_var)
        throw ParseError(line, "prefix variables must be numbered 1,2,... in order");
      ++next_var;
    } else {
      in_clauses = true;
      if (next_var % 2 == 0) throw ParseError(line, "prefix ends mid-pair");
      std::vector<int> clause;
      bool terminated = false;
      for (const std::string& token : tokens) {
        long long lit = parse_int(token, line);
        if (lit == 0) {
          terminated = true;
          break;
        }
        clause.push_back(static_cast<int>(lit));
      }
      if (!terminated) throw ParseError(line, "clause not 0-terminated");
      out.clauses.push_back(std::move(clause));
    }
  }

  out.pairs = (next_var - 1) / 2;
  if (declared_vars >= 0 && declared_vars != 2 * out.pairs)
    throw ParseError(0, "header variable count disagrees with the prefix");
  if (declared_clauses >= 0 && declared_clauses != static_cast<long long>(out.clauses.size()))
    throw ParseError(0, "header clause count disagrees with the clause list");
  if (auto err = validate_pcnf(out)) throw ParseError(0, err->message);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out.flush()) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace randctl
