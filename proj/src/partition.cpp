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

#include "longtail/partition.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "longtail/errors.hpp"

namespace longtail {

PopularityPartition::PopularityPartition(std::vector<double> phi,
                                         std::vector<char> is_head,
                                         double head_ratio,
                                         std::shared_ptr<const Vocab> items)
    : phi_(std::move(phi)),
      is_head_(std::move(is_head)),
      head_ratio_(head_ratio),
      items_(std::move(items)) {
  if (!items_) throw DataError("partition requires an item vocabulary");
  if (phi_.size() != static_cast<std::size_t>(items_->size()) ||
      is_head_.size() != phi_.size())
    throw DataError("partition arrays must cover the item vocabulary");
  for (double value : phi_)
    if (value < 0.0) throw DataError("negative popularity count");
  total_ = std::accumulate(phi_.begin(), phi_.end(), 0.0);
  head_count_ = std::count_if(is_head_.begin(), is_head_.end(),
                              [](char h) { return h != 0; });
}

std::size_t PopularityPartition::check(ItemIndex item) const {
  if (item < 0 || static_cast<std::size_t>(item) >= phi_.size())
    throw DataError("item index outside partition: " + std::to_string(item));
  return static_cast<std::size_t>(item);
}

std::vector<ItemIndex> PopularityPartition::short_head() const {
  std::vector<ItemIndex> out;
  for (std::size_t i = 0; i < is_head_.size(); ++i)
    if (is_head_[i]) out.push_back(static_cast<ItemIndex>(i));
  return out;
}

std::vector<ItemIndex> PopularityPartition::long_tail() const {
  std::vector<ItemIndex> out;
  for (std::size_t i = 0; i < is_head_.size(); ++i)
    if (!is_head_[i]) out.push_back(static_cast<ItemIndex>(i));
  return out;
}

PopularityPartition build_popularity_partition(const InteractionDataset& train,
                                               double head_ratio) {
  if (!(head_ratio > 0.0 && head_ratio < 1.0))
    throw DataError("head_ratio must lie strictly between 0 and 1");
  if (train.empty()) throw DataError("cannot partition an empty corpus");

  const std::size_t num_items = static_cast<std::size_t>(train.num_items());
  std::vector<double> phi(num_items, 0.0);
  for (const Interaction& x : train.interactions())
    phi[static_cast<std::size_t>(x.item)] += 1.0;
  const double total = std::accumulate(phi.begin(), phi.end(), 0.0);

  std::vector<ItemIndex> order(num_items);
  std::iota(order.begin(), order.end(), ItemIndex{0});
  std::sort(order.begin(), order.end(), [&](ItemIndex a, ItemIndex b) {
    const double pa = phi[static_cast<std::size_t>(a)];
    const double pb = phi[static_cast<std::size_t>(b)];
    if (pa != pb) return pa > pb;
    return train.items().id(a) < train.items().id(b);
  });

  // Comparing cumulative/total (not cumulative vs ratio*total) keeps exact
  // boundaries like 80/100 >= 0.8 true in floating point.
  std::vector<char> is_head(num_items, 0);
  double cumulative = 0.0;
  for (ItemIndex item : order) {
    if (cumulative / total >= head_ratio) break;
    cumulative += phi[static_cast<std::size_t>(item)];
    is_head[static_cast<std::size_t>(item)] = 1;
  }
  return PopularityPartition(std::move(phi), std::move(is_head), head_ratio,
                             train.item_vocab());
}

void write_partition_csv(const PopularityPartition& partition,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write partition file: " + path);
  out << "item_id,segment\n";
  const Vocab& items = *partition.item_vocab();
  for (ItemIndex i = 0; i < partition.num_items(); ++i)
    out << items.id(i) << ','
        << (partition.in_short_head(i) ? "head" : "tail") << '\n';
  if (!out) throw DataError("failed writing partition file: " + path);
}

PopularityPartition read_partition_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open partition file: " + path);
  auto items = std::make_shared<Vocab>();
  std::vector<char> is_head;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "item_id,segment") continue;
    const std::size_t comma = line.rfind(',');
    if (comma == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected item_id,segment");
    const std::string id = line.substr(0, comma);
    const std::string segment = line.substr(comma + 1);
    if (segment != "head" && segment != "tail")
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": unknown segment: " + segment);
    const ItemIndex index = items->intern(id);
    if (static_cast<std::size_t>(index) != is_head.size())
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": duplicate item id: " + id);
    is_head.push_back(segment == "head" ? 1 : 0);
  }
  if (is_head.empty()) throw DataError("no items in partition file: " + path);
  std::vector<double> phi(is_head.size(), 0.0);
  return PopularityPartition(std::move(phi), std::move(is_head), 0.8,
                             std::move(items));
}

PopularityPartition with_training_counts(const PopularityPartition& partition,
                                         const InteractionDataset& train) {
  std::vector<double> phi(static_cast<std::size_t>(partition.num_items()), 0.0);
  const Vocab& part_items = *partition.item_vocab();
  for (const Interaction& x : train.interactions()) {
    const auto index = part_items.find(train.items().id(x.item));
    if (index) phi[static_cast<std::size_t>(*index)] += 1.0;
  }
  std::vector<char> is_head(static_cast<std::size_t>(partition.num_items()));
  for (ItemIndex i = 0; i < partition.num_items(); ++i)
    is_head[static_cast<std::size_t>(i)] = partition.in_short_head(i) ? 1 : 0;
  return PopularityPartition(std::move(phi), std::move(is_head),
                             partition.head_ratio(), partition.item_vocab());
}

PopularityPartition align_partition(const PopularityPartition& partition,
                                    std::shared_ptr<const Vocab> items) {
  if (!items) throw DataError("align_partition requires an item vocabulary");
  const std::size_t n = static_cast<std::size_t>(items->size());
  std::vector<double> phi(n, 0.0);
  std::vector<char> is_head(n, 0);
  const Vocab& part_items = *partition.item_vocab();
  for (ItemIndex i = 0; i < items->size(); ++i) {
    const auto old_index = part_items.find(items->id(i));
    if (!old_index) continue;
    phi[static_cast<std::size_t>(i)] = partition.phi(*old_index);
    is_head[static_cast<std::size_t>(i)] =
        partition.in_short_head(*old_index) ? 1 : 0;
  }
  return PopularityPartition(std::move(phi), std::move(is_head),
                             partition.head_ratio(), std::move(items));
}

}  // namespace longtail
