#pragma once

// mucalc command line: check, game, trace, diff, gen.
//
// Exit codes: 0 success / property true at every queried state,
// 1 property false or check failed, 2 usage or input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mucalc/mucalc.hpp"

namespace mucalc::cli {

namespace detail {

struct UsageError : Error {
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Query {
  std::string model_file;
  std::string formula_text;
  std::string formula_file;
  std::string gamma;
  std::string state;
  std::string format = "text";

  KripkeModel model() const { return load_model(read_file(model_file)); }

  Formula formula() const {
    if (formula_text.empty() == formula_file.empty())
      throw UsageError("exactly one of --formula and --formula-file is required");
    return parse_formula(formula_text.empty() ? read_file(formula_file) : formula_text);
  }

  Ordinal bound() const {
    if (gamma.empty()) throw UsageError("--gamma is required");
    Ordinal g = parse_ordinal(gamma);
    if (g.is_zero()) throw UsageError("--gamma must be at least 1");
    return g;
  }

  // Finite bound for the game engine.
  Ordinal game_bound() const {
    Ordinal g = bound();
    if (!g.is_finite()) throw UsageError("game semantics needs a finite --gamma, got " + g.to_string());
    return g;
  }

  StateIndex start(const KripkeModel& m) const { return state.empty() ? 0 : m.index_of(state); }
};

inline void add_query_options(CLI::App& cmd, Query& q, bool with_format) {
  cmd.add_option("--model", q.model_file, "Model document (JSON)")->required();
  auto* f = cmd.add_option("--formula", q.formula_text, "Formula text");
  auto* ff = cmd.add_option("--formula-file", q.formula_file, "File holding the formula");
  f->excludes(ff);
  ff->excludes(f);
  cmd.add_option("--gamma", q.gamma, "Clock bound (ordinal below w^w, e.g. 3, w, w^2+1)");
  cmd.add_option("--state", q.state, "State to query");
  if (with_format) cmd.add_option("--format", q.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

inline ChoiceSource make_source(const std::vector<std::string>& spec, const Strategy& strategy, std::istream& in,
                                std::ostream& prompt) {
  if (spec.empty() || spec[0] == "strategy") {
    if (spec.size() > 1) throw UsageError("'strategy' takes no argument");
    return strategy_source(strategy);
  }
  if (spec[0] == "stdin") {
    if (spec.size() > 1) throw UsageError("'stdin' takes no argument");
    return stream_source(in, &prompt);
  }
  if (spec[0] == "script") {
    if (spec.size() != 2) throw UsageError("'script' needs a file argument");
    std::istringstream text(read_file(spec[1]));
    std::vector<std::string> tokens;
    for (std::string t; text >> t;) tokens.push_back(t);
    return script_source(std::move(tokens));
  }
  throw UsageError("choice source must be strategy, stdin or script FILE");
}

inline InstanceParams load_params(const std::string& file) {
  InstanceParams p;
  if (!file.empty()) {
    try {
      p = nlohmann::json::parse(read_file(file)).get<InstanceParams>();
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("bad parameter file: ") + e.what());
    }
  }
  p.validate();
  return p;
}

}  // namespace detail

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                    std::istream& in = std::cin) {
  using detail::Query;
  using detail::UsageError;

  CLI::App app{"Model checking for the modal mu-calculus with bounded game semantics", "mucalc"};
  app.require_subcommand(1);

  Query check_q;
  std::string semantics;
  auto* check = app.add_subcommand("check", "Evaluate a sentence on a model");
  detail::add_query_options(*check, check_q, true);
  check->add_option("--semantics", semantics, "gts, comp or standard")
      ->required()
      ->check(CLI::IsMember({"gts", "comp", "standard"}));

  Query game_q;
  std::string dot_file;
  std::size_t max_nodes = 1000;
  auto* game = app.add_subcommand("game", "Solve the evaluation game and export its game tree");
  detail::add_query_options(*game, game_q, false);
  game->add_option("--emit-dot", dot_file, "DOT output file")->required();
  game->add_option("--max-nodes", max_nodes, "Expansion cap for the exported tree");

  Query trace_q;
  std::vector<std::string> eloise_src, abelard_src;
  auto* trace = app.add_subcommand("trace", "Replay one play of the evaluation game");
  detail::add_query_options(*trace, trace_q, false);
  trace->add_option("--eloise", eloise_src, "strategy | stdin | script FILE")->expected(1, 2);
  trace->add_option("--abelard", abelard_src, "strategy | stdin | script FILE")->expected(1, 2);

  std::uint64_t diff_seed = 0;
  std::size_t diff_instances = 0;
  std::string diff_params;
  std::size_t jobs = 1;
  std::string diff_format = "text";
  auto* diff = app.add_subcommand("diff", "Differential test of the semantics on random instances");
  diff->add_option("--seed", diff_seed, "Corpus seed")->required();
  diff->add_option("--instances", diff_instances, "Number of instances")->required();
  diff->add_option("--params", diff_params, "Instance parameter file (JSON)");
  diff->add_option("--jobs", jobs, "Worker threads");
  diff->add_option("--format", diff_format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string gen_kind;
  std::uint64_t gen_seed = 0;
  std::string gen_params;
  auto* gen = app.add_subcommand("gen", "Generate a random model or sentence");
  gen->add_option("kind", gen_kind, "model or formula")->required()->check(CLI::IsMember({"model", "formula"}));
  gen->add_option("--seed", gen_seed, "Seed")->required();
  gen->add_option("--params", gen_params, "Instance parameter file (JSON)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (check->parsed()) {
      const KripkeModel m = check_q.model();
      const Formula f = check_q.formula();
      if (!is_sentence(f)) throw UsageError("formula must be a sentence");
      StateSet truth(m.size());
      std::string gamma_text;
      if (semantics == "standard") {
        if (!check_q.gamma.empty()) err << "warning: --gamma is ignored by the standard semantics\n";
        truth = eval_standard(m, f);
      } else if (semantics == "comp") {
        const Ordinal g = check_q.bound();
        gamma_text = g.to_string();
        truth = eval_bounded(m, f, g);
      } else {
        const Ordinal g = check_q.game_bound();
        gamma_text = g.to_string();
        truth = gts_truth_set(m, f, g);
      }
      std::vector<StateIndex> queried;
      if (check_q.state.empty())
        for (StateIndex w = 0; w < m.size(); ++w) queried.push_back(w);
      else
        queried.push_back(m.index_of(check_q.state));
      bool all = true;
      for (StateIndex w : queried) all = all && truth.contains(w);

      if (check_q.format == "json") {
        nlohmann::json j;
        j["semantics"] = semantics;
        j["formula"] = to_string(f);
        j["gamma"] = gamma_text.empty() ? nlohmann::json(nullptr) : nlohmann::json(gamma_text);
        j["results"] = nlohmann::json::object();
        for (StateIndex w : queried) j["results"][m.state_name(w)] = truth.contains(w);
        j["all_true"] = all;
        out << j.dump(2) << "\n";
      } else if (!check_q.state.empty()) {
        out << (all ? "true" : "false") << "\n";
      } else {
        for (StateIndex w : queried) out << m.state_name(w) << ": " << (truth.contains(w) ? "true" : "false") << "\n";
      }
      return all ? 0 : 1;
    }

    if (game->parsed()) {
      const KripkeModel m = game_q.model();
      const GameSpec spec(m, game_q.formula(), game_q.game_bound(), game_q.start(m));
      const SolveResult r = solve(spec);
      std::ofstream dot(dot_file);
      if (!dot) throw UsageError("cannot write '" + dot_file + "'");
      dot << export_game_tree(spec, max_nodes);
      out << "winner: " << to_string(r.winner) << "\n"
          << "positions explored: " << r.stats.positions_explored << "\n"
          << "max play length: " << r.stats.max_play_length << "\n";
      return r.winner == Player::eloise ? 0 : 1;
    }

    if (trace->parsed()) {
      const KripkeModel m = trace_q.model();
      const GameSpec spec(m, trace_q.formula(), trace_q.game_bound(), trace_q.start(m));
      const SolveResult r = solve(spec);
      const ChoiceSource eloise = detail::make_source(eloise_src, r.eloise, in, err);
      const ChoiceSource abelard = detail::make_source(abelard_src, r.abelard, in, err);
      const Transcript t = play(spec, eloise, abelard);
      for (std::size_t i = 0; i < t.rounds.size(); ++i) {
        const auto& round = t.rounds[i];
        out << i << ". " << describe(spec, round.position);
        if (round.chooser)
          out << "  " << to_string(*round.chooser) << ": " << describe(spec, *round.choice);
        out << "\n";
      }
      out << "winner: " << to_string(t.winner) << "\n"
          << "length: " << t.length() << "\n";
      return t.winner == Player::eloise ? 0 : 1;
    }

    if (diff->parsed()) {
      InstanceParams p = detail::load_params(diff_params);
      const CorpusSummary s = run_corpus(diff_seed, diff_instances, p, jobs);
      if (diff_format == "json")
        out << to_json(s).dump(2) << "\n";
      else
        out << s.passed << "/" << s.instances << " pass\n";
      for (const auto& fail : s.failures) err << "counterexample: " << fail.dump() << "\n";
      return s.passed == s.instances ? 0 : 1;
    }

    if (gen->parsed()) {
      const InstanceParams p = detail::load_params(gen_params);
      if (gen_kind == "model")
        out << save_model(random_model(gen_seed, p.max_states, p.edge_density, proposition_names(p.prop_count)));
      else
        out << to_string(random_sentence(gen_seed, p)) << "\n";
      return 0;
    }
  } catch (const IllegalChoice& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace mucalc::cli
