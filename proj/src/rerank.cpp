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

#include "longtail/rerank.hpp"

#include <algorithm>
#include <cmath>

#include "longtail/errors.hpp"

namespace longtail {

CategoryPrior category_prior(const std::vector<ItemIndex>& profile_items,
                             const PopularityPartition& partition,
                             double smoothing) {
  if (smoothing < 0.0) throw DataError("smoothing must be non-negative");
  if (profile_items.empty() && smoothing == 0.0)
    throw DataError("empty profile needs positive smoothing");
  double tail_count = 0.0;
  for (ItemIndex i : profile_items)
    if (partition.in_long_tail(i)) tail_count += 1.0;
  const double denom = static_cast<double>(profile_items.size()) + 2.0 * smoothing;
  CategoryPrior prior;
  prior.tail = (tail_count + smoothing) / denom;
  prior.head = 1.0 - prior.tail;
  return prior;
}

std::vector<CategoryPrior> category_priors(const InteractionDataset& train,
                                           const PopularityPartition& partition,
                                           double smoothing) {
  std::vector<std::vector<ItemIndex>> profiles(
      static_cast<std::size_t>(train.num_users()));
  for (const Interaction& x : train.interactions())
    profiles[static_cast<std::size_t>(x.user)].push_back(x.item);
  std::vector<CategoryPrior> priors(profiles.size());
  for (std::size_t u = 0; u < profiles.size(); ++u) {
    if (profiles[u].empty())
      priors[u] = CategoryPrior{0.5, 0.5};
    else
      priors[u] = category_prior(profiles[u], partition, smoothing);
  }
  return priors;
}

void normalize_scores(RankedList* list) {
  if (list->entries.empty()) return;
  double lo = list->entries.front().score;
  double hi = lo;
  for (const ScoredItem& e : list->entries) {
    lo = std::min(lo, e.score);
    hi = std::max(hi, e.score);
  }
  if (hi > lo) {
    const double span = hi - lo;
    for (ScoredItem& e : list->entries) e.score = (e.score - lo) / span;
  } else {
    for (ScoredItem& e : list->entries) e.score = 0.5;
  }
}

RankedList xquad_rerank(const RankedList& candidates,
                        const PopularityPartition& partition,
                        const CategoryPrior& prior, const XquadConfig& cfg) {
  if (cfg.n <= 0) throw DataError("output length must be positive");
  if (static_cast<std::size_t>(cfg.n) > candidates.entries.size())
    throw DataError("output length exceeds the candidate list");
  if (cfg.lambda < 0.0) throw DataError("lambda must be non-negative");
  for (const ScoredItem& e : candidates.entries)
    if (e.score < -1e-9 || e.score > 1.0 + 1e-9)
      throw DataError("candidate scores must be normalized to [0, 1]");

  RankedList out;
  out.user = candidates.user;
  out.origin = cfg.variant == XquadVariant::binary ? ListOrigin::binary_xquad
                                                   : ListOrigin::smooth_xquad;
  out.entries.reserve(static_cast<std::size_t>(cfg.n));

  std::vector<char> taken(candidates.entries.size(), 0);
  int head_in_s = 0;
  int tail_in_s = 0;

  for (int round = 0; round < cfg.n; ++round) {
    const int s_size = head_in_s + tail_in_s;
    double cov_head, cov_tail;
    if (cfg.variant == XquadVariant::binary) {
      cov_head = head_in_s > 0 ? 1.0 : 0.0;
      cov_tail = tail_in_s > 0 ? 1.0 : 0.0;
    } else {
      cov_head = s_size > 0 ? static_cast<double>(head_in_s) / s_size : 0.0;
      cov_tail = s_size > 0 ? static_cast<double>(tail_in_s) / s_size : 0.0;
    }

    int best = -1;
    double best_score = 0.0;
    double best_rel = 0.0;
    ItemIndex best_item = 0;
    for (std::size_t c = 0; c < candidates.entries.size(); ++c) {
      if (taken[c]) continue;
      const ScoredItem& e = candidates.entries[c];
      const bool head = partition.in_short_head(e.item);
      const double diversity =
          prior.of(head) * (1.0 - (head ? cov_head : cov_tail));
      const double rel = e.score;
      const double score = cfg.combination == ScoreCombination::additive
                               ? rel + cfg.lambda * diversity
                               : (1.0 - cfg.lambda) * rel + cfg.lambda * diversity;
      const bool better =
          best < 0 || score > best_score ||
          (score == best_score &&
           (rel > best_rel || (rel == best_rel && e.item < best_item)));
      if (better) {
        best = static_cast<int>(c);
        best_score = score;
        best_rel = rel;
        best_item = e.item;
      }
    }
    taken[static_cast<std::size_t>(best)] = 1;
    const ItemIndex picked = candidates.entries[static_cast<std::size_t>(best)].item;
    if (partition.in_short_head(picked))
      ++head_in_s;
    else
      ++tail_in_s;
    out.entries.push_back(ScoredItem{picked, best_score});
  }
  return out;
}

RankedList xquad_rerank(const RankedList& candidates,
                        const PopularityPartition& partition,
                        const CategoryPrior& prior, double lambda,
                        XquadVariant variant, int n) {
  XquadConfig cfg;
  cfg.lambda = lambda;
  cfg.variant = variant;
  cfg.combination = ScoreCombination::additive;
  cfg.n = n;
  return xquad_rerank(candidates, partition, prior, cfg);
}

std::vector<RankedList> xquad_rerank_all(const std::vector<RankedList>& candidates,
                                         const PopularityPartition& partition,
                                         const std::vector<CategoryPrior>& priors,
                                         const XquadConfig& cfg) {
  std::vector<RankedList> out;
  out.reserve(candidates.size());
  for (const RankedList& list : candidates) {
    if (list.user < 0 || static_cast<std::size_t>(list.user) >= priors.size())
      throw DataError("no prior for user index " + std::to_string(list.user));
    out.push_back(xquad_rerank(list, partition,
                               priors[static_cast<std::size_t>(list.user)], cfg));
  }
  return out;
}

}  // namespace longtail
