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

#pragma once

#include <map>
#include <set>
#include <vector>

#include "longtail/interactions.hpp"
#include "longtail/partition.hpp"
#include "longtail/ranked_list.hpp"

namespace longtail {

/// Recommendation lists keyed by user index; map keeps user iteration
/// deterministic. All lists share a common length.
struct RecommendationBatch {
  std::map<UserIndex, std::vector<ItemIndex>> lists;
  std::set<UserIndex> test_users;  // superset of the list keys

  /// Throws DataError when lists disagree on length or repeat a user.
  static RecommendationBatch from_lists(const std::vector<RankedList>& lists);
  std::size_t num_users() const { return lists.size(); }
  std::size_t common_length() const;
};

/// Per-user relevant item sets, from held-out ratings >= threshold.
struct RelevanceJudgments {
  std::map<UserIndex, std::set<ItemIndex>> relevant;
};

RelevanceJudgments judgments_from_test(const InteractionDataset& test,
                                       double min_rating);

/// Intra-list binary unfairness of one list: fraction of ordered pairs
/// sharing a segment, (h(h-1) + t(t-1)) / (N(N-1)). Requires N >= 2.
double ilbu(const std::vector<ItemIndex>& list,
            const PopularityPartition& partition);

/// Mean ilbu over a batch; requires a non-empty batch of lists with N >= 2.
double mean_ilbu(const RecommendationBatch& batch,
                 const PopularityPartition& partition);

/// Average recommendation popularity: mean over users of the list mean of
/// phi. Empty lists are skipped.
double arp(const RecommendationBatch& batch,
           const PopularityPartition& partition);

/// Average percentage of long tail items, Eq. form mean |L n Gamma| / |L|.
double aplt(const RecommendationBatch& batch,
            const PopularityPartition& partition);

/// Average count of long tail items per list.
double aclt(const RecommendationBatch& batch,
            const PopularityPartition& partition);

struct CoverageResult {
  std::int64_t distinct_count = 0;
  double fraction = 0.0;  // over |Gamma|; 0 when the tail is empty
};

CoverageResult distinct_long_tail_coverage(const RecommendationBatch& batch,
                                           const PopularityPartition& partition);

/// Mean NDCG at cutoff n with binary gains and log2(rank + 1) discounts,
/// rank 1-based. Requires n <= every list length. Users with no relevant
/// items are excluded from the mean; returns 0 when none remain.
double ndcg(const RecommendationBatch& batch,
            const RelevanceJudgments& judgments, int n);

}  // namespace longtail
