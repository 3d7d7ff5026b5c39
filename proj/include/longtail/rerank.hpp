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

#include <vector>

#include "longtail/interactions.hpp"
#include "longtail/partition.hpp"
#include "longtail/ranked_list.hpp"

namespace longtail {

enum class XquadVariant { binary, smooth };

/// How the relevance and diversity terms combine in the greedy objective.
/// additive keeps the plain P(v|u) + lambda * diversity form; convex uses
/// (1 - lambda) * P(v|u) + lambda * diversity.
enum class ScoreCombination { additive, convex };

/// Per-user prior over the two popularity segments, P(head|u) and P(tail|u).
struct CategoryPrior {
  double head = 0.5;
  double tail = 0.5;

  double of(bool is_head) const { return is_head ? head : tail; }
};

/// Prior from one user's training profile with additive smoothing:
/// p_tail = (|profile in tail| + smoothing) / (|profile| + 2 smoothing).
/// Empty profile with smoothing 0 is an error; with smoothing > 0 it gives
/// the uniform prior.
CategoryPrior category_prior(const std::vector<ItemIndex>& profile_items,
                             const PopularityPartition& partition,
                             double smoothing);

/// Priors for every user in the vocabulary. Users without training
/// interactions get the uniform prior regardless of smoothing.
std::vector<CategoryPrior> category_priors(const InteractionDataset& train,
                                           const PopularityPartition& partition,
                                           double smoothing = 0.0);

/// Min-max normalizes candidate scores into [0, 1] in place. A constant list
/// maps to 0.5 everywhere.
void normalize_scores(RankedList* list);

struct XquadConfig {
  double lambda = 0.0;
  XquadVariant variant = XquadVariant::binary;
  ScoreCombination combination = ScoreCombination::additive;
  int n = 10;
};

/// Greedy xQuAD re-ranking of one candidate list. Requires n <= candidates
/// and scores already min-max normalized into [0, 1]; ties break on higher
/// base score, then smaller item index. Entry scores in the result are the
/// greedy objective values at selection time.
RankedList xquad_rerank(const RankedList& candidates,
                        const PopularityPartition& partition,
                        const CategoryPrior& prior, const XquadConfig& cfg);

/// Convenience overload with loose parameters for the additive form.
RankedList xquad_rerank(const RankedList& candidates,
                        const PopularityPartition& partition,
                        const CategoryPrior& prior, double lambda,
                        XquadVariant variant, int n);

/// Re-ranks every list with per-user priors aligned by user index.
std::vector<RankedList> xquad_rerank_all(const std::vector<RankedList>& candidates,
                                         const PopularityPartition& partition,
                                         const std::vector<CategoryPrior>& priors,
                                         const XquadConfig& cfg);

}  // namespace longtail
