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

#include "longtail/metrics.hpp"

#include <cmath>

#include "longtail/errors.hpp"

namespace longtail {

RecommendationBatch RecommendationBatch::from_lists(
    const std::vector<RankedList>& lists) {
  RecommendationBatch batch;
  std::size_t length = 0;
  for (const RankedList& list : lists) {
    if (batch.lists.count(list.user))
      throw DataError("duplicate list for user index " +
                      std::to_string(list.user));
    if (batch.lists.empty())
      length = list.entries.size();
    else if (list.entries.size() != length)
      throw DataError("lists disagree on length");
    std::vector<ItemIndex> items;
    items.reserve(list.entries.size());
    for (const ScoredItem& e : list.entries) items.push_back(e.item);
    batch.lists.emplace(list.user, std::move(items));
    batch.test_users.insert(list.user);
  }
  return batch;
}

std::size_t RecommendationBatch::common_length() const {
  return lists.empty() ? 0 : lists.begin()->second.size();
}

RelevanceJudgments judgments_from_test(const InteractionDataset& test,
                                       double min_rating) {
  RelevanceJudgments judgments;
  for (const Interaction& x : test.interactions())
    if (x.rating >= min_rating) judgments.relevant[x.user].insert(x.item);
  return judgments;
}

double ilbu(const std::vector<ItemIndex>& list,
            const PopularityPartition& partition) {
  const std::size_t n = list.size();
  if (n < 2) throw DataError("ilbu needs a list of at least 2 items");
  std::size_t head = 0;
  for (ItemIndex i : list)
    if (partition.in_short_head(i)) ++head;
  const std::size_t tail = n - head;
  // Ordered co-member pairs: h(h-1) within the head plus t(t-1) within the
  // tail, over n(n-1) ordered pairs in total.
  const double same = static_cast<double>(head) * (head - 1.0) +
                      static_cast<double>(tail) * (tail - 1.0);
  return same / (static_cast<double>(n) * (n - 1.0));
}

namespace {

void require_nonempty(const RecommendationBatch& batch) {
  if (batch.lists.empty()) throw DataError("empty recommendation batch");
}

}  // namespace

double mean_ilbu(const RecommendationBatch& batch,
                 const PopularityPartition& partition) {
  require_nonempty(batch);
  double sum = 0.0;
  for (const auto& [user, list] : batch.lists) sum += ilbu(list, partition);
  return sum / static_cast<double>(batch.lists.size());
}

double arp(const RecommendationBatch& batch,
           const PopularityPartition& partition) {
  require_nonempty(batch);
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& [user, list] : batch.lists) {
    if (list.empty()) continue;
    double list_sum = 0.0;
    for (ItemIndex i : list) list_sum += partition.phi(i);
    sum += list_sum / static_cast<double>(list.size());
    ++counted;
  }
  return counted ? sum / static_cast<double>(counted) : 0.0;
}

double aplt(const RecommendationBatch& batch,
            const PopularityPartition& partition) {
  require_nonempty(batch);
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& [user, list] : batch.lists) {
    if (list.empty()) continue;
    std::size_t tail = 0;
    for (ItemIndex i : list)
      if (partition.in_long_tail(i)) ++tail;
    sum += static_cast<double>(tail) / static_cast<double>(list.size());
    ++counted;
  }
  return counted ? sum / static_cast<double>(counted) : 0.0;
}

double aclt(const RecommendationBatch& batch,
            const PopularityPartition& partition) {
  require_nonempty(batch);
  bool equal_length = true;
  const std::size_t n0 = batch.lists.begin()->second.size();
  for (const auto& [user, list] : batch.lists)
    if (list.size() != n0) {
      equal_length = false;
      break;
    }
  // Eq. 5/6 identity: with a common list length the mean count is the mean
  // fraction times N. Deriving it from aplt keeps the identity exact in
  // floating point, not just algebraically.
  if (equal_length && n0 > 0)
    return aplt(batch, partition) * static_cast<double>(n0);
  double sum = 0.0;
  for (const auto& [user, list] : batch.lists) {
    std::size_t tail = 0;
    for (ItemIndex i : list)
      if (partition.in_long_tail(i)) ++tail;
    sum += static_cast<double>(tail);
  }
  return sum / static_cast<double>(batch.lists.size());
}

CoverageResult distinct_long_tail_coverage(const RecommendationBatch& batch,
                                           const PopularityPartition& partition) {
  require_nonempty(batch);
  std::set<ItemIndex> covered;
  for (const auto& [user, list] : batch.lists)
    for (ItemIndex i : list)
      if (partition.in_long_tail(i)) covered.insert(i);
  CoverageResult result;
  result.distinct_count = static_cast<std::int64_t>(covered.size());
  const std::int64_t tail_size = partition.long_tail_size();
  result.fraction = tail_size > 0 ? static_cast<double>(result.distinct_count) /
                                        static_cast<double>(tail_size)
                                  : 0.0;
  return result;
}

double ndcg(const RecommendationBatch& batch,
            const RelevanceJudgments& judgments, int n) {
  require_nonempty(batch);
  if (n <= 0) throw DataError("ndcg cutoff must be positive");
  for (const auto& [user, list] : batch.lists)
    if (static_cast<std::size_t>(n) > list.size())
      throw DataError("ndcg cutoff exceeds the list length");

  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& [user, list] : batch.lists) {
    const auto it = judgments.relevant.find(user);
    if (it == judgments.relevant.end() || it->second.empty()) continue;
    const std::set<ItemIndex>& relevant = it->second;
    double dcg = 0.0;
    for (int pos = 0; pos < n; ++pos)
      if (relevant.count(list[static_cast<std::size_t>(pos)]))
        dcg += 1.0 / std::log2(static_cast<double>(pos) + 2.0);
    const int ideal_hits = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(n), relevant.size()));
    double idcg = 0.0;
    for (int pos = 0; pos < ideal_hits; ++pos)
      idcg += 1.0 / std::log2(static_cast<double>(pos) + 2.0);
    sum += dcg / idcg;
    ++counted;
  }
  return counted ? sum / static_cast<double>(counted) : 0.0;
}

}  // namespace longtail
