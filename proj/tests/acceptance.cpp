// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>

#include "fixtures.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "mucalc/mucalc.hpp"

using namespace mucalc;

namespace {

constexpr std::uint64_t kCorpusSeed = 20240601;
constexpr std::size_t kCorpusSize = 500;

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

// Runs a criterion body; an escaping exception fails it.
void criterion(int n, const std::string& what, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(n, ok, what, detail);
  } catch (const std::exception& e) {
    report(n, false, what, std::string("exception: ") + e.what());
  }
}

std::string ratio(std::size_t a, std::size_t b) { return std::to_string(a) + "/" + std::to_string(b); }

InstanceParams corpus_params() {
  InstanceParams p;
  p.max_states = 4;
  p.max_depth = 3;
  p.max_fixpoints = 2;
  p.gamma_min = 1;
  p.gamma_max = 5;
  p.naive_budget = 100000;
  return p;
}

}  // namespace

int main() {
  const InstanceParams params = corpus_params();
  const std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());

  const auto t0 = std::chrono::steady_clock::now();
  const CorpusSummary corpus = run_corpus(kCorpusSeed, kCorpusSize, params, jobs);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  criterion(1, "game and bounded compositional semantics agree on random instances", [&] {
    const bool ok = corpus.instances >= 500 && corpus.differential_passed == corpus.instances && seconds <= 300.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, ", %.1fs", seconds);
    return std::pair{ok, ratio(corpus.differential_passed, corpus.instances) + " pass" + buf};
  });

  criterion(2, "bound |W|+1 recovers the standard semantics", [&] {
    return std::pair{corpus.recovery_passed == corpus.instances, ratio(corpus.recovery_passed, corpus.instances)};
  });

  criterion(3, "golden truth sets match the brute-force oracle", [&] {
    std::size_t checked = 0, good = 0;
    auto expect = [&](const KripkeModel& m, const std::string& text, std::optional<std::uint64_t> gamma,
                      const oracle::Names& want) {
      const Formula f = parse_formula(text);
      const std::optional<Ordinal> bound = gamma ? std::optional<Ordinal>(Ordinal(*gamma)) : std::nullopt;
      ++checked;
      bool ok = oracle::truth_set(m, f, gamma) == want;
      if (bound) {
        ok = ok && oracle::names_of(m, eval_bounded(m, f, *bound)) == want;
        ok = ok && oracle::names_of(m, gts_truth_set(m, f, *bound)) == want;
      } else {
        ok = ok && oracle::names_of(m, eval_standard(m, f)) == want;
      }
      good += ok;
      if (!ok) std::printf("  golden mismatch: %s\n", text.c_str());
    };
    const auto m3 = fixtures::chain();
    const auto m3p = fixtures::chain_all_p();
    expect(m3, "mu X.(p|<>X)", 2, {"w1", "w2"});
    expect(m3, "mu X.(p|<>X)", 3, {"w0", "w1", "w2"});
    expect(m3p, "nu X.(p & <>X)", 2, {"w0"});
    expect(m3p, "nu X.(p & <>X)", std::nullopt, {});
    for (const auto& m : {m3, m3p, fixtures::two_cycle(), fixtures::single(true)}) {
      oracle::Names all;
      for (const auto& s : m.state_names()) all.insert(s);
      for (std::uint64_t g = 1; g <= 5; ++g) {
        expect(m, "mu X. X", g, {});
        expect(m, "nu X. X", g, all);
      }
      expect(m, "mu X. X", std::nullopt, {});
      expect(m, "nu X. X", std::nullopt, all);
    }
    return std::pair{good == checked, ratio(good, checked) + " goldens"};
  });

  criterion(4, "progress measure decreases on every move and every play terminates", [&] {
    std::size_t plays = 0, finished = 0, moves = 0, violations = 0;
    for (std::size_t i = 0; i < kCorpusSize; ++i) {
      const Instance inst = make_instance(kCorpusSeed, i, params);
      const GameSpec base(inst.model, inst.formula, Ordinal(inst.gamma), 0);
      for (StateIndex w = 0; w < inst.model.size(); ++w) {
        const GameSpec g = base.with_initial_state(w);
        ++plays;
        try {
          const SolveResult r = solve(g);
          const Transcript t = play(g, strategy_source(r.eloise), strategy_source(r.abelard));
          moves += t.length();
          finished += t.winner == r.winner && t.length() <= r.stats.max_play_length;
        } catch (const ProgressViolation& e) {
          ++violations;
          std::printf("  %s\n", e.what());
        }
      }
    }
    const bool ok = corpus.progress_failures == 0 && violations == 0 && finished == plays;
    return std::pair{ok, std::to_string(corpus.moves_checked) + " solver moves checked, " + ratio(finished, plays) +
                             " plays terminated with the solved winner (" + std::to_string(moves) + " moves)"};
  });

  criterion(5, "one winner per reachable key, winner strategies verified", [&] {
    return std::pair{corpus.determinacy_passed == corpus.instances,
                     ratio(corpus.determinacy_passed, corpus.instances) + " instances"};
  });

  criterion(6, "memoized solver agrees with unmemoized search within 10^5 nodes", [&] {
    const bool ok = corpus.naive_compared > 0 && corpus.naive_agreed == corpus.naive_compared;
    return std::pair{ok, ratio(corpus.naive_agreed, corpus.naive_compared) + " games agree, " +
                             std::to_string(corpus.naive_skipped) + " over budget"};
  });

  criterion(7, "approximant ladders monotone, stable within |W| steps; operator monotone", [&] {
    const std::size_t triples = 120, pairs_per = 2;
    std::size_t good = 0;
    InstanceParams inner = params;
    inner.max_depth = 2;
    for (std::size_t i = 0; i < triples; ++i) {
      const std::uint64_t s = detail::mix_seed(777, i);
      detail::Rng rng(s);
      const KripkeModel m = random_model(detail::mix_seed(s, 1), rng.between(1, 5), 0.4, {"p", "q"});
      const Formula part = random_sentence(detail::mix_seed(s, 2), inner);
      const Formula v = Formula::label("V");
      Formula body = part;
      switch (rng.below(4)) {
        case 0: body = Formula::disj(part, Formula::diamond(v)); break;
        case 1: body = Formula::conj(part, Formula::box(v)); break;
        case 2: body = Formula::disj(Formula::conj(part, v), Formula::box(Formula::diamond(v))); break;
        default: body = Formula::conj(Formula::disj(part, Formula::diamond(v)), Formula::disj(v, part)); break;
      }
      const FixpointKind kind = rng.bernoulli(0.5) ? FixpointKind::mu : FixpointKind::nu;
      const Ordinal bound = rng.bernoulli(0.5) ? Ordinal::omega() : Ordinal(rng.between(1, 5));
      const LadderCheck c = check_ladder(m, body, "V", kind, bound, s, pairs_per);
      good += c.monotone && c.stabilized_within_bound && c.operator_monotone;
    }
    return std::pair{good == triples, ratio(good, triples) + " triples, " + std::to_string(triples * pairs_per) +
                                          " A subset A' pairs"};
  });

  criterion(8, "normalization preserves truth sets of colliding sentences", [&] {
    const std::size_t count = 150;
    std::size_t good = 0, colliding = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t s = detail::mix_seed(888, i);
      const Formula f = random_colliding_sentence(s, params);
      colliding += !is_normal_form(f);
      const Formula n = to_normal_form(f);
      const KripkeModel m = random_model(detail::mix_seed(s, 1), 1 + i % 4, 0.4, {"p", "q"});
      bool ok = eval_standard(m, f) == eval_standard(m, n) && oracle::truth_set(m, f, std::nullopt) ==
                                                                      oracle::names_of(m, eval_standard(m, n));
      for (std::uint64_t g = 1; g <= 5 && ok; ++g) {
        const Ordinal bound(g);
        const StateSet before = eval_bounded(m, f, bound);
        ok = before == eval_bounded(m, n, bound) && before == gts_truth_set(m, n, bound) &&
             oracle::truth_set(m, f, g) == oracle::names_of(m, before);
      }
      good += ok;
    }
    return std::pair{good == count && colliding == count,
                     ratio(good, count) + " sentences at bounds 1..5 and unbounded, " + ratio(colliding, count) +
                         " needed renaming"};
  });

  criterion(9, "formula print/parse and model save/load round trips", [&] {
    std::size_t formulas = 0, formulas_ok = 0;
    InstanceParams deep = params;
    deep.max_depth = 6;
    deep.max_fixpoints = 4;
    for (std::uint64_t i = 0; i < 600; ++i) {
      const Formula f = i % 2 ? random_sentence(i, deep) : random_colliding_sentence(i, params);
      ++formulas;
      formulas_ok += parse_formula(to_string(f)) == f;
    }
    std::mt19937_64 rng(99);
    for (int i = 0; i < 600; ++i) {
      const Formula f = gen::random_ast(rng, static_cast<int>(rng() % 7));
      ++formulas;
      formulas_ok += parse_formula(to_string(f)) == f;
    }
    std::size_t models = 0, models_ok = 0;
    for (std::uint64_t i = 0; i < 150; ++i) {
      const KripkeModel m = random_model(i, 1 + i % 10, (i % 11) / 10.0, proposition_names(1 + i % 4));
      ++models;
      const std::string text = save_model(m);
      const KripkeModel back = load_model(text);
      models_ok += back == m && save_model(back) == text;
    }
    return std::pair{formulas_ok == formulas && models_ok == models && formulas >= 1000 && models >= 100,
                     ratio(formulas_ok, formulas) + " formulas, " + ratio(models_ok, models) + " models"};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
