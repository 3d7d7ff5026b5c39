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

// Brute-force reimplementations of every metric and of the greedy re-ranker,
// written against the formulas directly and kept structurally independent of
// the library code they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "longtail/metrics.hpp"
#include "longtail/partition.hpp"
#include "longtail/ranked_list.hpp"
#include "longtail/rerank.hpp"

namespace oracle {

using longtail::ItemIndex;
using longtail::PopularityPartition;
using longtail::RecommendationBatch;
using longtail::RelevanceJudgments;
using longtail::UserIndex;

inline double ilbu(const std::vector<ItemIndex>& list,
                   const PopularityPartition& partition) {
  const std::size_t n = list.size();
  double same = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const bool ha = partition.in_short_head(list[a]);
      const bool hb = partition.in_short_head(list[b]);
      if (ha == hb) same += 1.0;
    }
  return same / (static_cast<double>(n) * static_cast<double>(n - 1));
}

inline double arp(const RecommendationBatch& batch,
                  const PopularityPartition& partition) {
  double total = 0.0;
  double users = 0.0;
  for (const auto& [user, list] : batch.lists) {
    if (list.empty()) continue;
    double s = 0.0;
    for (ItemIndex i : list) s += partition.phi(i);
    total += s / static_cast<double>(list.size());
    users += 1.0;
  }
  return users > 0.0 ? total / users : 0.0;
}

inline double aplt(const RecommendationBatch& batch,
                   const PopularityPartition& partition) {
  double total = 0.0;
  double users = 0.0;
  for (const auto& [user, list] : batch.lists) {
    if (list.empty()) continue;
    double tail = 0.0;
    for (ItemIndex i : list)
      if (!partition.in_short_head(i)) tail += 1.0;
    total += tail / static_cast<double>(list.size());
    users += 1.0;
  }
  return users > 0.0 ? total / users : 0.0;
}

inline double aclt(const RecommendationBatch& batch,
                   const PopularityPartition& partition) {
  double total = 0.0;
  for (const auto& [user, list] : batch.lists)
    for (ItemIndex i : list)
      if (!partition.in_short_head(i)) total += 1.0;
  return total / static_cast<double>(batch.lists.size());
}

inline std::int64_t coverage_count(const RecommendationBatch& batch,
                                   const PopularityPartition& partition) {
  std::set<ItemIndex> seen;
  for (const auto& [user, list] : batch.lists)
    for (ItemIndex i : list)
      if (!partition.in_short_head(i)) seen.insert(i);
  return static_cast<std::int64_t>(seen.size());
}

inline double ndcg(const RecommendationBatch& batch,
                   const RelevanceJudgments& judgments, int n) {
  double total = 0.0;
  double users = 0.0;
  for (const auto& [user, list] : batch.lists) {
    const auto it = judgments.relevant.find(user);
    if (it == judgments.relevant.end() || it->second.empty()) continue;
    double dcg = 0.0;
    for (int pos = 1; pos <= n; ++pos) {
      const ItemIndex item = list[static_cast<std::size_t>(pos - 1)];
      if (it->second.count(item))
        dcg += 1.0 / (std::log(pos + 1.0) / std::log(2.0));
    }
    double idcg = 0.0;
    const int hits = std::min<int>(n, static_cast<int>(it->second.size()));
    for (int pos = 1; pos <= hits; ++pos)
      idcg += 1.0 / (std::log(pos + 1.0) / std::log(2.0));
    total += dcg / idcg;
    users += 1.0;
  }
  return users > 0.0 ? total / users : 0.0;
}

// Greedy xQuAD computed from first principles: at every round re-derive the
// coverage of each category by scanning the partial list.
inline std::vector<ItemIndex> xquad_greedy(
    const std::vector<std::pair<ItemIndex, double>>& candidates,
    const PopularityPartition& partition, double p_head, double p_tail,
    double lambda, bool smooth, int n) {
  std::vector<ItemIndex> s;
  std::vector<char> used(candidates.size(), 0);
  while (static_cast<int>(s.size()) < n) {
    int best = -1;
    double best_total = 0.0, best_rel = 0.0;
    ItemIndex best_item = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      const auto& [item, rel] = candidates[c];
      const bool head = partition.in_short_head(item);
      double cov;
      if (smooth) {
        double members = 0.0;
        for (ItemIndex chosen : s)
          if (partition.in_short_head(chosen) == head) members += 1.0;
        cov = s.empty() ? 0.0 : members / static_cast<double>(s.size());
      } else {
        cov = 0.0;
        for (ItemIndex chosen : s)
          if (partition.in_short_head(chosen) == head) cov = 1.0;
      }
      const double total = rel + lambda * (head ? p_head : p_tail) * (1.0 - cov);
      if (best < 0 || total > best_total ||
          (total == best_total &&
           (rel > best_rel || (rel == best_rel && item < best_item)))) {
        best = static_cast<int>(c);
        best_total = total;
        best_rel = rel;
        best_item = item;
      }
    }
    used[static_cast<std::size_t>(best)] = 1;
    s.push_back(candidates[static_cast<std::size_t>(best)].first);
  }
  return s;
}

// Spearman rank correlation with average ranks for ties. NaN when either
// input is constant.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(const std::vector<double>& x,
                       const std::vector<double>& y) {
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
