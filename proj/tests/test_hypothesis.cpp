#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "regretlab/hypothesis.hpp"
#include "regretlab/sequences.hpp"

using namespace regretlab;

namespace {

// The d = 5 threshold class over the T = 8 domain: the prediction columns of
// the worked realizable example.
HypothesisClass threshold5_class() { return make_threshold_class(5, make_domain(8)); }

Sequence realizable8_sequence() {
  return {{-3, 0}, {-2, 0}, {-1, 0}, {0, 0}, {1, 1}, {2, 1}, {3, 1}, {4, 1}};
}

}  // namespace

TEST_CASE("evaluate reads the table") {
  const auto cls = threshold5_class();
  CHECK(evaluate(cls, 0, 1) == 1);
  CHECK(evaluate(cls, 4, 4) == 0);
  CHECK(evaluate(cls, 2, 3) == evaluate(cls, 2, 3));
  CHECK_THROWS_AS(evaluate(cls, 0, 99), UnknownInstance);
  CHECK_THROWS_AS(evaluate(cls, 5, 1), IndexOutOfRange);
}

TEST_CASE("restrict keeps the consistent members") {
  const auto cls = threshold5_class();
  const auto full = VersionSpace::full(5);
  CHECK(restrict(full, cls, 1, 1) == VersionSpace::of(5, {0}));
  CHECK(restrict(full, cls, 4, 1) == VersionSpace::of(5, {0, 1, 2, 3}));
  CHECK(restrict(full, cls, -3, 0) == full);
  CHECK_THROWS_AS(restrict(full, cls, 100, 0), UnknownInstance);
}

TEST_CASE("mistake_profile and best_mistakes") {
  const auto cls = threshold5_class();
  CHECK(mistake_profile(cls, realizable8_sequence()) == MistakeVector{0, 1, 2, 3, 4});
  CHECK(mistake_profile(cls, {}) == MistakeVector(5, 0));

  const auto best = best_mistakes(MistakeVector{0, 1, 2, 3, 4});
  CHECK(best.count == 0);
  CHECK(best.argmin == std::vector<std::size_t>{0});

  const auto tie = best_mistakes(MistakeVector{3, 3, 3});
  CHECK(tie.count == 3);
  CHECK(tie.argmin.size() == 3);

  const auto d4 = make_threshold_class(4, make_domain(8));
  Sequence ones;
  for (Instance x : make_domain(8)) ones.push_back({x, 1});
  CHECK(best_mistakes(mistake_profile(d4, ones)).count == 4);

  const auto domain = make_domain(1000);
  const auto big = make_threshold_class(500, domain);
  Sequence all_ones;
  for (Instance x : domain) all_ones.push_back({x, 1});
  CHECK(best_mistakes(mistake_profile(big, all_ones)).count == 500);
}

TEST_CASE("class construction rejects malformed tables") {
  CHECK_THROWS_AS(HypothesisClass({0, 0}, {{0, 1}}), InvalidClass);
  CHECK_THROWS_AS(HypothesisClass({0, 1}, {{0, 2}}), InvalidClass);
  CHECK_THROWS_AS(HypothesisClass({0, 1}, {{0}}), InvalidClass);
  CHECK_THROWS_AS(HypothesisClass({0, 1}, {}), InvalidClass);
  CHECK_THROWS_AS(HypothesisClass({}, {{}}), InvalidClass);
  // Duplicate rows are separate experts.
  HypothesisClass dup({0, 1}, {{0, 1}, {0, 1}});
  CHECK(dup.size() == 2);
}

TEST_CASE("class JSON round trip") {
  const auto cls = threshold5_class();
  const auto text = class_to_json(cls);
  CHECK(text.find("\"domain\"") != std::string::npos);
  const auto back = class_from_json(text);
  CHECK(back.domain() == cls.domain());
  CHECK(back.rows() == cls.rows());
  CHECK_THROWS_AS(class_from_json("{\"domain\": [1]}"), InvalidClass);
}

TEST_CASE("version space properties on random classes") {
  std::mt19937_64 rng(0x5eed);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + rng() % 70;
    const std::size_t n = 1 + rng() % 10;
    const auto cls = oracle::random_class(rng, d, n);

    Sequence seq;
    const std::size_t len = rng() % 12;
    for (std::size_t t = 0; t < len; ++t) {
      seq.push_back({static_cast<Instance>(rng() % n), static_cast<Label>(rng() & 1U)});
    }

    // Idempotent.
    const auto full = VersionSpace::full(d);
    if (!seq.empty()) {
      const auto once = restrict(full, cls, seq[0].x, seq[0].y);
      CHECK(restrict(once, cls, seq[0].x, seq[0].y) == once);
      CHECK(once.is_subset_of(full));
    }

    // Order of the examples does not change the final version space or profile.
    auto shuffled = seq;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    VersionSpace a = full, b = full;
    for (const auto& ex : seq) a = restrict(a, cls, ex.x, ex.y);
    for (const auto& ex : shuffled) b = restrict(b, cls, ex.x, ex.y);
    CHECK(a == b);
    CHECK(mistake_profile(cls, seq) == mistake_profile(cls, shuffled));

    // A sequence labeled by hypothesis i costs i nothing.
    const std::size_t target = rng() % d;
    Sequence labeled;
    for (const auto& ex : seq) labeled.push_back({ex.x, evaluate(cls, target, ex.x)});
    CHECK(mistake_profile(cls, labeled)[target] == 0);

    // Per round, the wrong experts are the d minus the agreeing votes.
    for (const auto& ex : seq) {
      std::size_t wrong = 0, agree = 0;
      for (std::size_t i = 0; i < d; ++i) {
        wrong += evaluate(cls, i, ex.x) != ex.y;
        agree += evaluate(cls, i, ex.x) == ex.y;
      }
      CHECK(wrong == d - agree);
      CHECK(restrict(full, cls, ex.x, ex.y).count() == agree);
    }
  }
}
