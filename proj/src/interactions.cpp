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

#include "longtail/interactions.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "longtail/errors.hpp"
#include "longtail/rng.hpp"

namespace longtail {
namespace {

std::uint64_t pair_key(UserIndex u, ItemIndex i) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(i);
}

bool parse_double(const std::string& field, double* out) {
  if (field.empty()) return false;
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size()) return false;
  *out = value;
  return true;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

// csv splits on commas; the whitespace formats split on any blank run so tab
// and space separated files both load.
std::vector<std::string> split_fields(const std::string& line,
                                      DatasetFormat format) {
  std::vector<std::string> fields;
  if (format == DatasetFormat::csv_triples) {
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
  } else {
    std::istringstream in(line);
    std::string field;
    while (in >> field) fields.push_back(field);
  }
  return fields;
}

}  // namespace

const char* to_string(DatasetFormat format) {
  switch (format) {
    case DatasetFormat::tsv_triples: return "tsv";
    case DatasetFormat::csv_triples: return "csv";
    case DatasetFormat::movielens100k: return "movielens100k";
  }
  return "tsv";
}

DatasetFormat dataset_format_from_string(const std::string& token) {
  if (token == "tsv" || token == "tsv_triples") return DatasetFormat::tsv_triples;
  if (token == "csv" || token == "csv_triples") return DatasetFormat::csv_triples;
  if (token == "movielens100k" || token == "ml100k")
    return DatasetFormat::movielens100k;
  throw ParseError("unknown dataset format: " + token);
}

InteractionDataset::InteractionDataset(std::vector<Interaction> interactions,
                                       std::shared_ptr<const Vocab> users,
                                       std::shared_ptr<const Vocab> items,
                                       RatingScale scale)
    : interactions_(std::move(interactions)),
      users_(std::move(users)),
      items_(std::move(items)),
      scale_(scale) {
  if (!users_ || !items_) throw DataError("dataset requires vocabularies");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(interactions_.size() * 2);
  for (const Interaction& x : interactions_) {
    if (x.user < 0 || x.user >= users_->size())
      throw DataError("user index out of range: " + std::to_string(x.user));
    if (x.item < 0 || x.item >= items_->size())
      throw DataError("item index out of range: " + std::to_string(x.item));
    if (x.rating < scale_.min || x.rating > scale_.max)
      throw DataError("rating outside scale: " + std::to_string(x.rating));
    if (!seen.insert(pair_key(x.user, x.item)).second)
      throw DataError("duplicate interaction for user " + users_->id(x.user) +
                      ", item " + items_->id(x.item));
  }
}

InteractionDataset load_interactions(const std::string& path,
                                     DatasetFormat format, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);

  auto users = std::make_shared<Vocab>();
  auto items = std::make_shared<Vocab>();
  std::vector<Interaction> rows;
  std::unordered_map<std::uint64_t, std::size_t> position;
  LoadReport local;

  std::string line;
  std::size_t line_no = 0;
  bool saw_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> fields = split_fields(line, format);
    if (fields.empty()) continue;
    if (fields.size() < 3)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected user, item, rating");
    double rating = 0.0;
    if (!parse_double(fields[2], &rating)) {
      // A non-numeric third field on the first data-bearing line is a header.
      if (!saw_data) {
        local.header_skipped = true;
        continue;
      }
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": rating is not a number: " + fields[2]);
    }
    saw_data = true;
    const UserIndex u = users->intern(fields[0]);
    const ItemIndex i = items->intern(fields[1]);
    const std::uint64_t key = pair_key(u, i);
    auto it = position.find(key);
    if (it != position.end()) {
      std::fprintf(stderr,
                   "warning: %s:%zu: duplicate rating for (%s, %s), keeping "
                   "the later value\n",
                   path.c_str(), line_no, fields[0].c_str(), fields[1].c_str());
      rows[it->second].rating = rating;
      ++local.duplicates_replaced;
      continue;
    }
    position.emplace(key, rows.size());
    rows.push_back(Interaction{u, i, rating});
  }
  if (rows.empty()) throw DataError("no interactions in " + path);
  if (report) *report = local;
  return InteractionDataset(std::move(rows), std::move(users), std::move(items),
                            RatingScale{});
}

InteractionDataset dataset_from_triples(
    const std::vector<std::tuple<std::string, std::string, double>>& rows) {
  auto users = std::make_shared<Vocab>();
  auto items = std::make_shared<Vocab>();
  std::vector<Interaction> out;
  std::unordered_map<std::uint64_t, std::size_t> position;
  for (const auto& [user_id, item_id, rating] : rows) {
    const UserIndex u = users->intern(user_id);
    const ItemIndex i = items->intern(item_id);
    const std::uint64_t key = pair_key(u, i);
    auto it = position.find(key);
    if (it != position.end()) {
      out[it->second].rating = rating;
      continue;
    }
    position.emplace(key, out.size());
    out.push_back(Interaction{u, i, rating});
  }
  if (out.empty()) throw DataError("no interactions given");
  return InteractionDataset(std::move(out), std::move(users), std::move(items),
                            RatingScale{});
}

void write_interactions(const InteractionDataset& data, const std::string& path,
                        DatasetFormat format) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset file: " + path);
  const char sep = format == DatasetFormat::csv_triples ? ',' : '\t';
  char buffer[64];
  for (const Interaction& x : data.interactions()) {
    std::snprintf(buffer, sizeof(buffer), "%g", x.rating);
    out << data.users().id(x.user) << sep << data.items().id(x.item) << sep
        << buffer << '\n';
  }
  if (!out) throw DataError("failed writing dataset file: " + path);
}

std::vector<std::vector<Interaction>> group_by_user(
    const InteractionDataset& data) {
  std::vector<std::vector<Interaction>> groups(
      static_cast<std::size_t>(data.num_users()));
  for (const Interaction& x : data.interactions())
    groups[static_cast<std::size_t>(x.user)].push_back(x);
  return groups;
}

namespace {

void fisher_yates(std::vector<std::size_t>* order, std::mt19937_64& gen) {
  for (std::size_t i = order->size(); i > 1; --i) {
    const std::size_t j = uniform_below(gen, i);
    std::swap((*order)[i - 1], (*order)[j]);
  }
}

}  // namespace

std::vector<FoldPair> cross_validation_folds(const InteractionDataset& data,
                                             int k, std::uint64_t seed,
                                             FoldStrategy strategy) {
  if (k < 2) throw DataError("cross validation requires k >= 2");
  const std::size_t n = data.size();
  if (n == 0) throw DataError("cannot split an empty dataset");
  if (static_cast<std::size_t>(k) > n)
    throw DataError("k exceeds the number of interactions");

  // fold_of[p] is the test fold of interaction position p.
  std::vector<int> fold_of(n, 0);
  std::mt19937_64 gen(mix_seed(seed, 0));

  if (strategy == FoldStrategy::interaction_shuffle) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    fisher_yates(&order, gen);
    // First n % k folds take the ceil-sized chunks.
    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t cursor = 0;
    for (int f = 0; f < k; ++f) {
      const std::size_t take = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
      for (std::size_t t = 0; t < take; ++t) fold_of[order[cursor++]] = f;
    }
  } else {
    std::vector<std::vector<std::size_t>> per_user(
        static_cast<std::size_t>(data.num_users()));
    for (std::size_t p = 0; p < n; ++p)
      per_user[static_cast<std::size_t>(data.interactions()[p].user)].push_back(p);
    for (auto& positions : per_user) {
      if (positions.empty()) continue;
      fisher_yates(&positions, gen);
      const int start = static_cast<int>(uniform_below(gen, static_cast<std::size_t>(k)));
      for (std::size_t t = 0; t < positions.size(); ++t)
        fold_of[positions[t]] = (start + static_cast<int>(t)) % k;
    }
  }

  std::vector<FoldPair> folds(static_cast<std::size_t>(k));
  for (int f = 0; f < k; ++f) {
    std::vector<Interaction> train_rows;
    std::vector<Interaction> test_rows;
    for (std::size_t p = 0; p < n; ++p) {
      const Interaction& x = data.interactions()[p];
      if (fold_of[p] == f)
        test_rows.push_back(x);
      else
        train_rows.push_back(x);
    }
    folds[static_cast<std::size_t>(f)] =
        FoldPair{InteractionDataset(std::move(train_rows), data.user_vocab(),
                                    data.item_vocab(), data.rating_scale()),
                 InteractionDataset(std::move(test_rows), data.user_vocab(),
                                    data.item_vocab(), data.rating_scale()),
                 f};
  }
  return folds;
}

}  // namespace longtail
