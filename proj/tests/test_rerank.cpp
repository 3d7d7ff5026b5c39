// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <set>

#include <doctest.h>

#include "longtail/errors.hpp"
#include "longtail/rerank.hpp"
#include "longtail/rng.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace longtail;

namespace {

RankedList make_list(const std::vector<std::pair<ItemIndex, double>>& entries) {
  RankedList list;
  list.user = 0;
  for (const auto& [item, score] : entries)
    list.entries.push_back(ScoredItem{item, score});
  return list;
}

}  // namespace

TEST_CASE("category priors follow the smoothing formula") {
  // Items 0..2 head, 3..5 tail.
  const PopularityPartition partition =
      testutil::make_partition({1, 1, 1, 0, 0, 0});

  const CategoryPrior plain = category_prior({0, 1, 2, 3}, partition, 0.0);
  CHECK(plain.head == doctest::Approx(0.75));
  CHECK(plain.tail == doctest::Approx(0.25));

  const CategoryPrior uniform = category_prior({}, partition, 1.0);
  CHECK(uniform.head == doctest::Approx(0.5));
  CHECK(uniform.tail == doctest::Approx(0.5));

  const CategoryPrior all_tail = category_prior({3, 4, 5}, partition, 0.0);
  CHECK(all_tail.head == doctest::Approx(0.0));
  CHECK(all_tail.tail == doctest::Approx(1.0));

  CHECK_THROWS_AS(category_prior({}, partition, 0.0), DataError);
  CHECK_THROWS_AS(category_prior({0}, partition, -1.0), DataError);
}

TEST_CASE("batch priors default empty profiles to uniform") {
  const InteractionDataset data = dataset_from_triples(
      {{"u1", "a", 5.0}, {"u1", "b", 4.0}, {"u2", "a", 3.0}});
  const PopularityPartition partition = build_popularity_partition(data, 0.6);
  const auto priors = category_priors(data, partition);
  CHECK(priors.size() == 2);
  CHECK(priors[0].head + priors[0].tail == doctest::Approx(1.0));
}

TEST_CASE("normalize_scores maps to the unit interval") {
  RankedList list = make_list({{0, 10.0}, {1, 5.0}, {2, 0.0}});
  normalize_scores(&list);
  CHECK(list.entries[0].score == doctest::Approx(1.0));
  CHECK(list.entries[1].score == doctest::Approx(0.5));
  CHECK(list.entries[2].score == doctest::Approx(0.0));

  RankedList constant = make_list({{0, 4.0}, {1, 4.0}});
  normalize_scores(&constant);
  CHECK(constant.entries[0].score == doctest::Approx(0.5));
  CHECK(constant.entries[1].score == doctest::Approx(0.5));

  RankedList empty;
  normalize_scores(&empty);  // no-op
  CHECK(empty.entries.empty());
}

TEST_CASE("lambda zero reproduces the base head of the list") {
  const PopularityPartition partition =
      testutil::make_partition({1, 1, 0, 0, 1, 0});
  const RankedList candidates = make_list(
      {{0, 1.0}, {4, 0.8}, {2, 0.6}, {1, 0.4}, {5, 0.2}, {3, 0.0}});
  const CategoryPrior prior{0.5, 0.5};

  for (const XquadVariant variant : {XquadVariant::binary, XquadVariant::smooth}) {
    const RankedList out =
        xquad_rerank(candidates, partition, prior, 0.0, variant, 4);
    REQUIRE(out.entries.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(out.entries[i].item == candidates.entries[i].item);
  }
}

TEST_CASE("the worked three-candidate example selects A then C") {
  // A and B in the head, C in the tail.
  const PopularityPartition partition = testutil::make_partition({1, 1, 0});
  const RankedList candidates = make_list({{0, 0.9}, {1, 0.85}, {2, 0.5}});
  const CategoryPrior prior{0.5, 0.5};

  const RankedList binary =
      xquad_rerank(candidates, partition, prior, 1.0, XquadVariant::binary, 2);
  REQUIRE(binary.entries.size() == 2);
  CHECK(binary.entries[0].item == 0);
  CHECK(binary.entries[1].item == 2);
  CHECK(binary.entries[0].score == doctest::Approx(1.4));
  CHECK(binary.entries[1].score == doctest::Approx(1.0));

  const RankedList smooth =
      xquad_rerank(candidates, partition, prior, 1.0, XquadVariant::smooth, 2);
  CHECK(smooth.entries[0].item == 0);
  CHECK(smooth.entries[1].item == 2);
}

TEST_CASE("rerank validates its inputs") {
  const PopularityPartition partition = testutil::make_partition({1, 0});
  const CategoryPrior prior{0.5, 0.5};
  const RankedList short_list = make_list({{0, 0.9}, {1, 0.5}});
  CHECK_THROWS_AS(
      xquad_rerank(short_list, partition, prior, 0.5, XquadVariant::binary, 3),
      DataError);
  const RankedList unnormalized = make_list({{0, 5.0}, {1, 0.5}});
  CHECK_THROWS_AS(
      xquad_rerank(unnormalized, partition, prior, 0.5, XquadVariant::binary, 2),
      DataError);
  CHECK_THROWS_AS(
      xquad_rerank(short_list, partition, prior, -0.1, XquadVariant::binary, 2),
      DataError);
}

TEST_CASE("output is a subset of candidates without duplicates") {
  std::mt19937_64 gen(mix_seed(41, 0));
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 6 + static_cast<int>(uniform_below(gen, 6));
    std::vector<char> is_head;
    for (int i = 0; i < m; ++i)
      is_head.push_back(uniform_unit(gen) < 0.5 ? 1 : 0);
    const PopularityPartition partition = testutil::make_partition(is_head);
    RankedList candidates;
    candidates.user = 0;
    for (int i = 0; i < m; ++i)
      candidates.entries.push_back(
          ScoredItem{static_cast<ItemIndex>(i), uniform_unit(gen)});
    const CategoryPrior prior{0.3, 0.7};
    const int n = 1 + static_cast<int>(uniform_below(gen, static_cast<std::size_t>(m)));
    const RankedList out = xquad_rerank(candidates, partition, prior,
                                        uniform_unit(gen), XquadVariant::smooth, n);
    CHECK(out.entries.size() == static_cast<std::size_t>(n));
    std::set<ItemIndex> unique;
    for (const ScoredItem& e : out.entries) {
      CHECK(candidates.contains(e.item));
      CHECK(unique.insert(e.item).second);
    }
  }
}

TEST_CASE("tail exposure grows with lambda on popularity-biased scores") {
  // Head items outscore every tail item, as a popularity-biased base ranker
  // produces. Under that regime the binary variant admits its tail item
  // earlier as lambda grows, so the per-list count is monotone; the smooth
  // variant is checked on the total across instances.
  std::mt19937_64 gen(mix_seed(43, 0));
  const std::vector<double> grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<int> smooth_total(grid.size(), 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 12;
    std::vector<char> is_head;
    for (int i = 0; i < m; ++i)
      is_head.push_back(uniform_unit(gen) < 0.6 ? 1 : 0);
    const PopularityPartition partition = testutil::make_partition(is_head);
    RankedList candidates;
    candidates.user = 0;
    for (int i = 0; i < m; ++i) {
      const double score = is_head[static_cast<std::size_t>(i)]
                               ? 0.6 + 0.4 * uniform_unit(gen)
                               : 0.4 * uniform_unit(gen);
      candidates.entries.push_back(ScoredItem{static_cast<ItemIndex>(i), score});
    }
    const auto tail_count = [&](const RankedList& list) {
      int count = 0;
      for (const ScoredItem& e : list.entries)
        if (partition.in_long_tail(e.item)) ++count;
      return count;
    };
    int previous = -1;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const RankedList binary = xquad_rerank(candidates, partition,
                                             CategoryPrior{0.5, 0.5}, grid[g],
                                             XquadVariant::binary, 6);
      const int tail = tail_count(binary);
      CHECK(tail >= previous);
      previous = tail;
      const RankedList smooth = xquad_rerank(candidates, partition,
                                             CategoryPrior{0.5, 0.5}, grid[g],
                                             XquadVariant::smooth, 6);
      smooth_total[g] += tail_count(smooth);
    }
  }
  for (std::size_t g = 1; g < grid.size(); ++g)
    CHECK(smooth_total[g] >= smooth_total[g - 1]);
  CHECK(smooth_total.back() > smooth_total.front());
}

TEST_CASE("greedy output matches the brute-force oracle") {
  std::mt19937_64 gen(mix_seed(47, 0));
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(uniform_below(gen, 7));
    std::vector<char> is_head;
    for (int i = 0; i < m; ++i)
      is_head.push_back(uniform_unit(gen) < 0.5 ? 1 : 0);
    const PopularityPartition partition = testutil::make_partition(is_head);

    std::vector<std::pair<ItemIndex, double>> pool;
    RankedList candidates;
    candidates.user = 0;
    for (int i = 0; i < m; ++i) {
      // Quantized scores provoke ties so the tie-break rules are exercised.
      const double score =
          static_cast<double>(uniform_below(gen, 5)) / 4.0;
      pool.emplace_back(static_cast<ItemIndex>(i), score);
      candidates.entries.push_back(ScoredItem{static_cast<ItemIndex>(i), score});
    }
    const double p_tail = uniform_unit(gen);
    const CategoryPrior prior{1.0 - p_tail, p_tail};
    const int n = 1 + static_cast<int>(uniform_below(gen, static_cast<std::size_t>(m)));

    for (const double lambda : {0.0, 0.3, 1.0}) {
      for (const bool smooth : {false, true}) {
        const RankedList mine = xquad_rerank(
            candidates, partition, prior, lambda,
            smooth ? XquadVariant::smooth : XquadVariant::binary, n);
        const std::vector<ItemIndex> expected = oracle::xquad_greedy(
            pool, partition, prior.head, prior.tail, lambda, smooth, n);
        REQUIRE(mine.entries.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
          CHECK(mine.entries[i].item == expected[i]);
      }
    }
  }
}

TEST_CASE("smooth admits at least as many tail items as saturated binary") {
  // With head items outscoring every tail item, binary coverage saturates
  // after one tail pick and falls back to pure relevance, so its tail count
  // stays at most 1; smooth keeps a positive tail bonus beyond that point.
  std::mt19937_64 gen(mix_seed(53, 0));
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 4 + static_cast<int>(uniform_below(gen, 5));
    std::vector<char> is_head;
    int heads = 0;
    for (int i = 0; i < m; ++i) {
      is_head.push_back(uniform_unit(gen) < 0.5 ? 1 : 0);
      heads += is_head.back();
    }
    if (heads < 2 || heads == m) continue;
    const PopularityPartition partition = testutil::make_partition(is_head);
    RankedList candidates;
    candidates.user = 0;
    for (int i = 0; i < m; ++i) {
      const double score = is_head[static_cast<std::size_t>(i)]
                               ? 0.6 + 0.4 * uniform_unit(gen)
                               : 0.4 * uniform_unit(gen);
      candidates.entries.push_back(ScoredItem{static_cast<ItemIndex>(i), score});
    }
    // Keep n within the head count so binary is never forced into extra
    // tail picks once its coverage bonus is spent.
    const int n =
        2 + static_cast<int>(uniform_below(gen, static_cast<std::size_t>(heads - 1)));

    const auto tail_count = [&](const RankedList& list) {
      int count = 0;
      for (const ScoredItem& e : list.entries)
        if (partition.in_long_tail(e.item)) ++count;
      return count;
    };
    const RankedList binary = xquad_rerank(candidates, partition,
                                           CategoryPrior{0.5, 0.5}, 1.0,
                                           XquadVariant::binary, n);
    const RankedList smooth = xquad_rerank(candidates, partition,
                                           CategoryPrior{0.5, 0.5}, 1.0,
                                           XquadVariant::smooth, n);
    CHECK(tail_count(binary) <= 1);
    CHECK(tail_count(smooth) >= tail_count(binary));
  }
}

TEST_CASE("convex combination honors the endpoints") {
  const PopularityPartition partition = testutil::make_partition({1, 1, 0});
  const RankedList candidates = make_list({{0, 1.0}, {1, 0.6}, {2, 0.1}});
  XquadConfig cfg;
  cfg.combination = ScoreCombination::convex;
  cfg.variant = XquadVariant::binary;
  cfg.n = 2;

  cfg.lambda = 0.0;
  const RankedList relevance_only =
      xquad_rerank(candidates, partition, CategoryPrior{0.5, 0.5}, cfg);
  CHECK(relevance_only.entries[0].item == 0);
  CHECK(relevance_only.entries[1].item == 1);

  // Pure diversity: the first pick covers the head, so the second comes from
  // the tail regardless of its low base score.
  cfg.lambda = 1.0;
  const RankedList diversity_only =
      xquad_rerank(candidates, partition, CategoryPrior{0.5, 0.5}, cfg);
  CHECK(diversity_only.entries[1].item == 2);
}

TEST_CASE("rerank_all requires a prior for every user") {
  const PopularityPartition partition = testutil::make_partition({1, 0});
  RankedList list = make_list({{0, 1.0}, {1, 0.0}});
  list.user = 3;
  XquadConfig cfg;
  cfg.n = 1;
  CHECK_THROWS_AS(
      xquad_rerank_all({list}, partition, {CategoryPrior{0.5, 0.5}}, cfg),
      DataError);
}
