#include <bit>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "regretlab/experiments.hpp"
#include "regretlab/learners.hpp"
#include "regretlab/sequences.hpp"

using namespace regretlab;

namespace {

HypothesisClass threshold5() { return make_threshold_class(5, make_domain(8)); }

HypothesisClass four_hypothesis_class() {
  return HypothesisClass({1, 2, 3}, {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 0, 1}});
}

Sequence realizable8() { return label_sequence({CaseKind::kRealizable, 8, 4}, make_domain(8)); }
Sequence unrealizable8() { return label_sequence({CaseKind::kUnrealizable, 8, 4}, make_domain(8)); }

constexpr LearnerKind kAllKinds[] = {LearnerKind::kConsistent,   LearnerKind::kHalving,   LearnerKind::kSoa,
                                     LearnerKind::kWm,           LearnerKind::kWmConsistent, LearnerKind::kWmHalving,
                                     LearnerKind::kWmSoa};

struct RandomCase {
  HypothesisClass cls;
  Sequence seq;
};

// Random class plus a sequence over its domain (with repeats). Realizable
// sequences are labeled by a random member.
RandomCase random_case(std::mt19937_64& rng, bool realizable, std::size_t max_d, std::size_t max_n,
                       std::size_t max_t) {
  const std::size_t d = 1 + rng() % max_d;
  const std::size_t n = 1 + rng() % max_n;
  auto cls = oracle::random_class(rng, d, n);
  const std::size_t len = rng() % (max_t + 1);
  const std::size_t target = rng() % d;
  Sequence seq;
  for (std::size_t t = 0; t < len; ++t) {
    const std::size_t j = rng() % n;
    const Label y = realizable ? cls.label(target, j) : static_cast<Label>(rng() & 1U);
    seq.push_back({cls.domain()[j], y});
  }
  return {std::move(cls), std::move(seq)};
}

}  // namespace

TEST_CASE("prediction basics") {
  const auto p = Prediction::randomized(0.25);
  CHECK_FALSE(p.is_deterministic());
  CHECK(p.mistake_probability(1) == doctest::Approx(0.75));
  CHECK(Prediction::randomized(1.5).p_one() == 1.0);
  CHECK(Prediction::randomized(-0.5).p_one() == 0.0);
  CHECK(Prediction::deterministic(1).mistake_probability(0) == 1.0);
}

TEST_CASE("names round trip") {
  for (auto kind : kAllKinds) CHECK(parse_learner_kind(to_string(kind)) == kind);
  CHECK(parse_eta_variant("sqrt2") == EtaVariant::kSqrt2);
  CHECK(parse_tie_policy("coin") == TiePolicy::kFairCoin);
  CHECK_THROWS_AS(parse_learner_kind("perceptron"), ConfigError);
  CHECK(is_baseline(LearnerKind::kSoa));
  CHECK(is_hybrid(LearnerKind::kWmSoa));
  CHECK_FALSE(realizable_engine(LearnerKind::kWm).has_value());
}

TEST_CASE("learning rate variants") {
  CHECK(learning_rate(EtaVariant::kSqrt8, 4, 8) == doctest::Approx(std::sqrt(8 * std::log(4.0) / 8)));
  CHECK(learning_rate(EtaVariant::kSqrt2, 4, 8) == doctest::Approx(std::sqrt(2 * std::log(4.0) / 8)));
  CHECK(learning_rate(EtaVariant::kSqrt8, 1, 8) == 0.0);
  CHECK(learning_rate(EtaVariant::kSqrt8, 4, 0) == 0.0);
}

TEST_CASE("consistent_step uses the lowest-index member") {
  const auto cls = threshold5();
  const auto full = VersionSpace::full(5);
  CHECK(consistent_step(full, cls, -3) == Prediction::deterministic(0));
  CHECK(consistent_step(full, cls, 1) == Prediction::deterministic(1));
  CHECK(consistent_step(VersionSpace::of(5, {3}), cls, 4) == Prediction::deterministic(1));
  CHECK_THROWS_AS(consistent_step(VersionSpace(5), cls, 1), WrongPhase);
}

TEST_CASE("halving_step majority and ties") {
  const auto cls = threshold5();
  const auto full = VersionSpace::full(5);
  CHECK(halving_step(full, cls, 1) == Prediction::deterministic(0));
  // {h_0, h_1} splits 1 / 0 at x = 1 and agrees at x = 2.
  const auto split = VersionSpace::of(5, {0, 1});
  CHECK(halving_step(split, cls, 1) == Prediction::deterministic(1));
  CHECK(halving_step(split, cls, 1, TiePolicy::kFairCoin) == Prediction::randomized(0.5));
  CHECK(halving_step(split, cls, 2, TiePolicy::kFairCoin) == Prediction::deterministic(1));
  CHECK(halving_step(VersionSpace::of(5, {4}), cls, 4) == Prediction::deterministic(0));
  CHECK_THROWS_AS(halving_step(VersionSpace(5), cls, 1), WrongPhase);
}

TEST_CASE("soa_step") {
  const auto four = four_hypothesis_class();
  LdimSolver solver_i(four);
  CHECK(soa_step(VersionSpace::full(4), four, 1, solver_i) == Prediction::deterministic(1));
  CHECK(soa_step(VersionSpace::full(4), four, 1, solver_i, TiePolicy::kFairCoin) == Prediction::randomized(0.5));
  CHECK(soa_step(VersionSpace::of(4, {1}), four, 2, solver_i) == Prediction::deterministic(1));

  const auto cls = threshold5();
  LdimSolver solver(cls);
  CHECK(ldim(cls, VersionSpace::of(5, {1, 2, 3, 4})).value == 2);
  CHECK(ldim(cls, VersionSpace::of(5, {0})).value == 0);
  CHECK(soa_step(VersionSpace::full(5), cls, 1, solver) == Prediction::deterministic(0));
  CHECK_THROWS_AS(soa_step(VersionSpace(5), cls, 1, solver), WrongPhase);
}

TEST_CASE("wm_step and wm_update") {
  const std::vector<Label> ones{1, 1, 1};
  CHECK(wm_step(WmState(0.5, 3), ones).p_one() == doctest::Approx(1.0));
  const std::vector<Label> split{1, 0};
  CHECK(wm_step(WmState(0.5, 2), split).p_one() == doctest::Approx(0.5));

  WmState state(std::log(2.0), 2);
  state.mistakes = {1, 0};
  CHECK(wm_step(state, split).p_one() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(wm_mistake_probability(state, split, 1) == doctest::Approx(2.0 / 3.0));

  WmState fresh(0.3, 5);
  const auto cls = threshold5();
  const auto advice = cls.advice(1);
  wm_update(fresh, advice, 1);
  CHECK(fresh.mistakes == MistakeVector{0, 1, 1, 1, 1});
  wm_update(fresh, advice, 1);
  CHECK(fresh.mistakes == MistakeVector{0, 2, 2, 2, 2});

  WmState all(0.3, 3);
  wm_update(all, ones, 1);
  CHECK(all.mistakes == MistakeVector{0, 0, 0});
  wm_update(all, ones, 0);
  CHECK(all.mistakes == MistakeVector{1, 1, 1});

  CHECK_THROWS_AS(wm_step(WmState(0.3, 3), split), DimensionMismatch);
  CHECK_THROWS_AS(wm_update(all, split, 0), DimensionMismatch);
  CHECK(WmState(0.0, 1).weights() == std::vector<double>{1.0});
}

TEST_CASE("hybrid phases") {
  const auto d4 = make_threshold_class(4, make_domain(8));

  SUBCASE("WM_Halving on the realizable order never switches") {
    const auto trace = run({LearnerKind::kWmHalving}, d4, realizable8());
    CHECK_FALSE(trace.switch_event.has_value());
    CHECK(trace.deterministic_mistakes <= 2);
  }
  SUBCASE("WM_Consistent on a min-index realizable sequence makes no mistakes") {
    const auto trace = run({LearnerKind::kWmConsistent}, d4, realizable8());
    CHECK(trace.deterministic_mistakes == 0);
    CHECK(trace.expected_mistakes == 0.0);
    CHECK_FALSE(trace.switch_event.has_value());
  }
  SUBCASE("WM_Halving on all ones switches with every count at least 1") {
    const auto trace = run({LearnerKind::kWmHalving}, d4, unrealizable8());
    REQUIRE(trace.switch_event.has_value());
    CHECK(trace.switch_event->round <= 8);
    CHECK(trace.switch_event->min_mistakes >= 1);
  }
  SUBCASE("stepwise state") {
    LearnerState state(d4, {LearnerKind::kWmSoa}, 8);
    CHECK(state.phase() == LearnerState::Phase::kRealizable);
    CHECK(state.solver() != nullptr);
    for (const auto& ex : unrealizable8()) {
      learner_step(state, d4, ex.x);
      learner_feedback(state, d4, ex.x, ex.y);
    }
    CHECK(state.phase() == LearnerState::Phase::kAgnostic);
    CHECK(state.mistakes() == mistake_profile(d4, unrealizable8()));
    CHECK(state.rounds() == 8);

    LearnerState wm(d4, {LearnerKind::kWm}, 8);
    CHECK(wm.phase() == LearnerState::Phase::kAgnostic);
  }
  SUBCASE("baselines refuse to continue on an empty version space") {
    CHECK_THROWS_AS(run({LearnerKind::kHalving}, d4, unrealizable8()), WrongPhase);
  }
  SUBCASE("unknown instance") {
    CHECK_THROWS_AS(run({LearnerKind::kWmHalving}, d4, Sequence{{42, 1}}), UnknownInstance);
  }
}

TEST_CASE("run examples") {
  const auto cls = threshold5();
  const auto realizable = label_sequence({CaseKind::kRealizable, 8, 5}, make_domain(8));
  const auto halving = run({LearnerKind::kHalving}, cls, realizable);
  CHECK(halving.deterministic_mistakes <= 2);
  CHECK(halving.rounds.size() == 8);

  HypothesisClass single({0, 1}, {{0, 1}});
  CHECK(run({LearnerKind::kConsistent}, single, Sequence{{0, 0}, {1, 1}}).deterministic_mistakes == 0);

  HypothesisClass two({0}, {{1}, {0}});
  const auto wm = run({LearnerKind::kWm}, two, Sequence{{0, 1}});
  CHECK(wm.expected_mistakes == doctest::Approx(0.5));

  const auto empty = run({LearnerKind::kWmSoa}, cls, Sequence{});
  CHECK(empty.rounds.empty());
  CHECK(empty.expected_mistakes == 0.0);

  // Deterministic learners produce the same trace in both modes.
  RunOptions sampled{RunMode::sampled(11, 50)};
  const auto halving_sampled = run({LearnerKind::kHalving}, cls, realizable, sampled);
  CHECK(halving_sampled.expected_mistakes == halving.expected_mistakes);
  REQUIRE(halving_sampled.sampled.has_value());
  for (auto m : halving_sampled.sampled->trial_mistakes) CHECK(m == halving.deterministic_mistakes);
}

TEST_CASE("trace JSON lines") {
  const auto cls = make_threshold_class(4, make_domain(8));
  const auto trace = run({LearnerKind::kWmHalving}, cls, unrealizable8());
  const auto text = trace_to_jsonl(trace);
  CHECK(std::count(text.begin(), text.end(), '\n') == 8);
  CHECK(text.find("\"mistake_prob\"") != std::string::npos);
  CHECK(trace_to_jsonl(trace) == text);
}

TEST_CASE("analytic WM matches the closed form") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_case(rng, false, 20, 8, 30);
    const double eta = learning_rate(EtaVariant::kSqrt8, c.cls.size(), c.seq.size());
    const auto trace = run({LearnerKind::kWm}, c.cls, c.seq);
    CHECK(trace.expected_mistakes == doctest::Approx(oracle::wm_expected_mistakes(c.cls, c.seq, eta)).epsilon(1e-12));
  }
}

TEST_CASE("weights stay normalized") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_case(rng, false, 32, 8, 64);
    WmState state(learning_rate(EtaVariant::kSqrt8, c.cls.size(), c.seq.size()), c.cls.size());
    for (const auto& ex : c.seq) {
      wm_update(state, c.cls.advice(ex.x), ex.y);
      double sum = 0.0;
      for (double w : state.weights()) {
        CHECK(w >= 0.0);
        sum += w;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("version space shrinks on mistakes") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    auto c = random_case(rng, true, 16, 6, 20);
    VersionSpace halving_space = VersionSpace::full(c.cls.size());
    VersionSpace soa_space = halving_space;
    LdimSolver solver(c.cls);
    for (const auto& ex : c.seq) {
      const auto h = halving_step(halving_space, c.cls, ex.x);
      const auto next_h = restrict(halving_space, c.cls, ex.x, ex.y);
      if (h.label() != ex.y) CHECK(2 * next_h.count() <= halving_space.count());
      halving_space = next_h;

      const auto s = soa_step(soa_space, c.cls, ex.x, solver);
      const auto next_s = restrict(soa_space, c.cls, ex.x, ex.y);
      if (s.label() != ex.y) CHECK(solver.value(next_s) <= solver.value(soa_space) - 1);
      soa_space = next_s;
    }
  }
}

TEST_CASE("realizable mistake bounds on random cases") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = random_case(rng, true, 32, 10, 64);
    for (auto kind : kAllKinds) {
      for (auto ties : {TiePolicy::kPredictOne, TiePolicy::kFairCoin}) {
        const auto trace = run({kind, EtaVariant::kSqrt8, ties}, c.cls, c.seq);
        CHECK_FALSE(trace.switch_event.has_value());
        const auto bound = realizable_mistake_bound(kind, c.cls, c.seq.size());
        if (!bound) {
          CHECK(trace.expected_mistakes <= std::sqrt(0.5 * std::log(double(c.cls.size())) * c.seq.size()) + 1e-9);
          continue;
        }
        CHECK(trace.expected_mistakes <= *bound + 1e-9);
        if (ties == TiePolicy::kPredictOne) CHECK(double(trace.deterministic_mistakes) <= *bound + 1e-9);
      }
    }
  }
}

TEST_CASE("agnostic regret bounds and switch property on random cases") {
  std::mt19937_64 rng(4048);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = random_case(rng, false, 32, 10, 64);
    const auto best = best_mistakes(mistake_profile(c.cls, c.seq)).count;
    for (auto kind : {LearnerKind::kWm, LearnerKind::kWmConsistent, LearnerKind::kWmHalving, LearnerKind::kWmSoa}) {
      for (auto eta : {EtaVariant::kSqrt8, EtaVariant::kSqrt2}) {
        const auto trace = run({kind, eta}, c.cls, c.seq);
        if (trace.switch_event) CHECK(trace.switch_event->min_mistakes >= 1);
        if (eta != EtaVariant::kSqrt8) continue;
        const auto bound = agnostic_regret_bound(kind, c.cls, c.seq.size());
        REQUIRE(bound.has_value());
        CHECK(trace.expected_mistakes - double(best) <= *bound + 1e-9);
      }
    }
  }
}

TEST_CASE("sampled mean agrees with the analytic value") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 5; ++trial) {
    auto c = random_case(rng, false, 16, 8, 40);
    const auto trace = run({LearnerKind::kWm}, c.cls, c.seq, {RunMode::sampled(trial, 4000), false});
    REQUIRE(trace.sampled.has_value());
    CHECK(trace.sampled->trial_mistakes.size() == 4000);
    const double se = trace.sampled->standard_error();
    CHECK(std::abs(trace.sampled->mean() - trace.expected_mistakes) <= 3 * se + 1e-12);
  }
}
