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

#include <memory>
#include <string>
#include <vector>

#include "longtail/interactions.hpp"
#include "longtail/vocab.hpp"

namespace longtail {

/// Split of the item catalog into a short head (the minimal set of most-rated
/// items carrying at least head_ratio of all training ratings) and the long
/// tail (everything else, including items never rated in training).
///
/// phi(i) is the item's training rating count. It is stored as a double so
/// synthetic fixtures can carry fractional popularity values; partitions built
/// from data always hold integers.
class PopularityPartition {
 public:
  PopularityPartition() = default;

  /// Direct construction for fixtures and CSV import. `phi` and `is_head`
  /// must both cover the item vocabulary.
  PopularityPartition(std::vector<double> phi, std::vector<char> is_head,
                      double head_ratio, std::shared_ptr<const Vocab> items);

  double phi(ItemIndex item) const { return phi_[check(item)]; }
  bool in_short_head(ItemIndex item) const { return is_head_[check(item)] != 0; }
  bool in_long_tail(ItemIndex item) const { return !in_short_head(item); }

  /// Co-membership d(i, j): 1 when both items fall in the same segment.
  bool co_member(ItemIndex i, ItemIndex j) const {
    return in_short_head(i) == in_short_head(j);
  }

  std::vector<ItemIndex> short_head() const;  // ascending item index
  std::vector<ItemIndex> long_tail() const;
  std::int64_t short_head_size() const { return head_count_; }
  std::int64_t long_tail_size() const {
    return static_cast<std::int64_t>(phi_.size()) - head_count_;
  }

  double total_ratings() const { return total_; }
  double head_ratio() const { return head_ratio_; }
  std::int32_t num_items() const { return static_cast<std::int32_t>(phi_.size()); }
  std::shared_ptr<const Vocab> item_vocab() const { return items_; }

 private:
  std::size_t check(ItemIndex item) const;

  std::vector<double> phi_;
  std::vector<char> is_head_;
  double head_ratio_ = 0.8;
  double total_ = 0.0;
  std::int64_t head_count_ = 0;
  std::shared_ptr<const Vocab> items_;
};

/// Builds the partition from training data: items sorted by descending count
/// (ties by ascending external id) enter the head until the cumulative count
/// reaches head_ratio of the total; all remaining items, including zero-count
/// ones, form the tail. Requires 0 < head_ratio < 1 and a non-empty corpus.
PopularityPartition build_popularity_partition(const InteractionDataset& train,
                                               double head_ratio);

/// Two-column CSV `item_id,segment` with segment in {head, tail}.
void write_partition_csv(const PopularityPartition& partition,
                         const std::string& path);

/// Reads the two-column CSV back. phi is zero for every item (the export does
/// not carry counts); use with_training_counts to restore them.
PopularityPartition read_partition_csv(const std::string& path);

/// Same segments with phi recounted from `train`, matching items by external
/// id. Train items absent from the partition's vocabulary are ignored.
PopularityPartition with_training_counts(const PopularityPartition& partition,
                                         const InteractionDataset& train);

/// Re-indexes the partition onto `items`: segments carry over by external id
/// and ids unknown to the partition become tail items with phi 0.
PopularityPartition align_partition(const PopularityPartition& partition,
                                    std::shared_ptr<const Vocab> items);

}  // namespace longtail
