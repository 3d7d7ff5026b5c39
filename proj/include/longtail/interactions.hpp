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

#include <cstdint>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "longtail/vocab.hpp"

namespace longtail {

struct Interaction {
  UserIndex user;
  ItemIndex item;
  double rating;
};

struct RatingScale {
  double min = 1.0;
  double max = 5.0;
};

enum class DatasetFormat { tsv_triples, csv_triples, movielens100k };

const char* to_string(DatasetFormat format);
DatasetFormat dataset_format_from_string(const std::string& token);

/// Side information from a load: how many duplicate (user, item) rows were
/// replaced by a later occurrence, and whether a header line was skipped.
struct LoadReport {
  std::size_t duplicates_replaced = 0;
  bool header_skipped = false;
};

/// A rating corpus with dense user/item indices. Immutable after
/// construction; vocabularies are shared so fold subsets keep the parent's
/// index space.
class InteractionDataset {
 public:
  InteractionDataset() = default;

  /// Validates: no duplicate (user, item) pair, every index inside its
  /// vocabulary, every rating inside `scale`.
  InteractionDataset(std::vector<Interaction> interactions,
                     std::shared_ptr<const Vocab> users,
                     std::shared_ptr<const Vocab> items, RatingScale scale);

  const std::vector<Interaction>& interactions() const { return interactions_; }
  std::size_t size() const { return interactions_.size(); }
  bool empty() const { return interactions_.empty(); }

  const Vocab& users() const { return *users_; }
  const Vocab& items() const { return *items_; }
  std::shared_ptr<const Vocab> user_vocab() const { return users_; }
  std::shared_ptr<const Vocab> item_vocab() const { return items_; }
  std::int32_t num_users() const { return users_ ? users_->size() : 0; }
  std::int32_t num_items() const { return items_ ? items_->size() : 0; }
  RatingScale rating_scale() const { return scale_; }

 private:
  std::vector<Interaction> interactions_;
  std::shared_ptr<const Vocab> users_;
  std::shared_ptr<const Vocab> items_;
  RatingScale scale_;
};

/// Loads delimiter-separated `user<sep>item<sep>rating[<sep>ignored...]`
/// triples. A header line is detected (third field not numeric) and skipped.
/// Duplicate (user, item) rows keep the last occurrence; a warning is printed
/// to stderr and counted in `report`. Throws ParseError with the line number
/// on malformed rows, DataError when no interactions remain.
InteractionDataset load_interactions(const std::string& path,
                                     DatasetFormat format,
                                     LoadReport* report = nullptr);

/// Builds a dataset from in-memory (user id, item id, rating) rows with the
/// same last-wins duplicate rule as the file loader.
InteractionDataset dataset_from_triples(
    const std::vector<std::tuple<std::string, std::string, double>>& rows);

/// Writes `user<sep>item<sep>rating` rows in the given format (no header).
void write_interactions(const InteractionDataset& data, const std::string& path,
                        DatasetFormat format);

/// Interactions grouped by user index; entry u lists user u's (item, rating)
/// pairs in dataset order. Size equals the user vocabulary, including users
/// with no interactions in this subset.
std::vector<std::vector<Interaction>> group_by_user(
    const InteractionDataset& data);

struct FoldPair {
  InteractionDataset train;
  InteractionDataset test;
  int fold_id = 0;
};

enum class FoldStrategy {
  interaction_shuffle,  // uniform shuffle of interactions, equal-size tests
  user_stratified       // each user's interactions dealt across folds
};

/// Splits into k disjoint test folds whose union is the dataset exactly once;
/// each train part is the complement. With interaction_shuffle every test fold
/// has floor(n/k) or ceil(n/k) interactions; user_stratified balances per
/// user instead and only approximates equal sizes. Deterministic given seed.
std::vector<FoldPair> cross_validation_folds(
    const InteractionDataset& data, int k, std::uint64_t seed,
    FoldStrategy strategy = FoldStrategy::interaction_shuffle);

}  // namespace longtail
