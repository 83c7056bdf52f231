#include <doctest.h>

#include "dubalign/error.hpp"
#include "dubalign/segmenter.hpp"
#include "support.hpp"

using namespace dubalign;

TEST_CASE("forced segmentations") {
  const ScoringModels models;
  const auto one = support::sentence({{"a", 0, 300}, {"b", 350, 700}}, "x y, z w");
  CHECK(segment(one, {}, models).breakpoints == std::vector<std::size_t>{4});

  const auto three = support::sentence({{"aa", 0, 300}, {"bb", 700, 1000}, {"cc", 1400, 1700}},
                                        "x y z");
  CHECK(segment(three, {}, models).breakpoints == std::vector<std::size_t>{1, 2, 3});

  const auto short_target =
      support::sentence({{"aa", 0, 300}, {"bb", 700, 1000}, {"cc", 1400, 1700}}, "x y");
  try {
    segment(short_target, {}, models);
    FAIL("expected an infeasible segmentation");
  } catch (const InfeasibleSegmentation& e) {
    CHECK(e.words() == 2);
    CHECK(e.segments() == 3);
  }
  CHECK_THROWS_AS(brute_force_segment(short_target, {}, models), InfeasibleSegmentation);
}

TEST_CASE("punctuation attracts the break when only s1 counts") {
  const auto pair = support::sentence({{"hello", 0, 400}, {"world", 900, 1300}},
                                       "un deux, trois quatre");
  CHECK(segment(pair, {1, 0, 0, 0, 0}, ScoringModels{}).breakpoints ==
        std::vector<std::size_t>{2, 4});
}

TEST_CASE("dynamic program matches exhaustive search") {
  Rng rng(2024);
  const ScoringModels models;
  for (int rep = 0; rep < 120; ++rep) {
    const auto k = static_cast<std::size_t>(rng.integer(1, 4));
    const auto m = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(k), 12));
    const auto pair = support::random_sentence(rng, m, k);
    const auto w = support::random_simplex(rng);
    const auto dp = segment_with_chart(pair, w, models);
    const auto bf = brute_force_segment(pair, w, models);
    CAPTURE(rep);
    CHECK(dp.segmentation == bf.segmentation);
    CHECK(dp.score == bf.score);
    CHECK(bf.enumerated == binomial(m - 1, k - 1));
    CHECK(dp.score == segmentation_score(pair, w, models, dp.segmentation));
    CHECK(is_valid_segmentation(dp.segmentation.breakpoints, m));
    CHECK(dp.chart.segment_evaluations <= k * m * m);
    CHECK(dp.chart.transition_evaluations <= k * m * m * m);
  }
}

TEST_CASE("ties go to the lexicographically smallest breakpoints") {
  // Identical words and zero weights make every segmentation score 0.
  const auto pair = support::sentence({{"aa", 0, 300}, {"bb", 700, 1000}, {"cc", 1400, 1700}},
                                       "x x x x x x");
  const FeatureWeights zero{0, 0, 0, 0, 0};
  const auto dp = segment(pair, zero, ScoringModels{});
  CHECK(dp.breakpoints == std::vector<std::size_t>{1, 2, 6});
  CHECK(brute_force_segment(pair, zero, ScoringModels{}).segmentation == dp);
}

TEST_CASE("chart marks infeasible states and keeps optimal prefixes") {
  Rng rng(77);
  const ScoringModels models;
  for (int rep = 0; rep < 30; ++rep) {
    const auto k = static_cast<std::size_t>(rng.integer(2, 4));
    const auto m = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(k), 9));
    const auto pair = support::random_sentence(rng, m, k);
    const auto w = support::random_simplex(rng);
    const auto out = segment_with_chart(pair, w, models);
    for (std::size_t t = 1; t <= k; ++t) {
      for (std::size_t j = 0; j <= m; ++j) {
        const bool feasible = j >= t && m - j >= k - t;
        if (!feasible) CHECK(out.chart.best(t, j) == kNegInf);
        if (feasible) CHECK(out.chart.best(t, j) > kNegInf);
      }
    }
    // Each prefix of the optimum scores what the chart recorded for it.
    const auto& j = out.segmentation.breakpoints;
    for (std::size_t t = 1; t <= k; ++t) {
      const Segmentation prefix{std::vector<std::size_t>(j.begin(), j.begin() + t)};
      auto sub = pair;
      // Score the prefix through the same transitions as the full path.
      const SentenceContext ctx(sub, models);
      long double acc = 0.0L;
      for (std::size_t u = 1; u <= t; ++u) {
        const std::size_t jp = u == 1 ? 0 : j[u - 2];
        std::optional<std::size_t> jb;
        if (u >= 2) jb = u == 2 ? 0 : j[u - 3];
        acc += transition_score_step1(ctx, w, u, jb, jp, j[u - 1]);
      }
      CHECK(out.chart.state(t, t == 1 ? 0 : j[t - 2], j[t - 1]) == acc);
    }
    CHECK(out.chart.state(k, j[k - 2], m) == out.score);
  }
}

TEST_CASE("scaling the weights leaves the argmax unchanged") {
  Rng rng(31);
  const ScoringModels models;
  for (int rep = 0; rep < 40; ++rep) {
    const auto k = static_cast<std::size_t>(rng.integer(1, 3));
    const auto m = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(k), 10));
    const auto pair = support::random_sentence(rng, m, k);
    const auto w = support::random_simplex(rng);
    CHECK(segment(pair, w, models) == segment(pair, w.scaled(2.0), models));
    CHECK(segment(pair, w, models) == segment(pair, w.scaled(0.5), models));
  }
}

TEST_CASE("exhaustive search refuses oversized spaces") {
  Rng rng(1);
  const auto pair = support::random_sentence(rng, 12, 4);
  CHECK_THROWS_AS(brute_force_segment(pair, {}, ScoringModels{}, 10), OracleTooLarge);
  CHECK(binomial(11, 3) == 165);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(200, 100) == std::numeric_limits<std::size_t>::max());
}
