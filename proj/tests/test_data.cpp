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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <doctest.h>

#include "longtail/errors.hpp"
#include "longtail/interactions.hpp"
#include "longtail/partition.hpp"
#include "testutil.hpp"

using namespace longtail;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("tsv triples load with vocabularies in first-seen order") {
  const std::string path =
      write_temp("lt_data_basic.tsv", "u1\ti1\t5\nu1\ti2\t3\nu2\ti1\t4\n");
  const InteractionDataset data =
      load_interactions(path, DatasetFormat::tsv_triples);
  CHECK(data.num_users() == 2);
  CHECK(data.num_items() == 2);
  CHECK(data.size() == 3);
  CHECK(data.users().id(0) == "u1");
  CHECK(data.items().id(1) == "i2");
  CHECK(data.interactions()[2].rating == 4.0);
}

TEST_CASE("duplicate rows keep the last occurrence and are counted") {
  const std::string path =
      write_temp("lt_data_dup.tsv", "u1\ti1\t5\nu1\ti1\t2\n");
  LoadReport report;
  const InteractionDataset data =
      load_interactions(path, DatasetFormat::tsv_triples, &report);
  CHECK(data.size() == 1);
  CHECK(data.interactions()[0].rating == 2.0);
  CHECK(report.duplicates_replaced == 1);
}

TEST_CASE("header lines are detected and skipped") {
  const std::string path =
      write_temp("lt_data_header.csv", "user,item,rating\nu1,i1,5\nu2,i1,3\n");
  LoadReport report;
  const InteractionDataset data =
      load_interactions(path, DatasetFormat::csv_triples, &report);
  CHECK(data.size() == 2);
  CHECK(report.header_skipped);
}

TEST_CASE("movielens format ignores the timestamp column") {
  const std::string path =
      write_temp("lt_data_ml.tsv", "1\t10\t4\t881250949\n1\t20\t3\t891717742\n");
  const InteractionDataset data =
      load_interactions(path, DatasetFormat::movielens100k);
  CHECK(data.size() == 2);
  CHECK(data.interactions()[0].rating == 4.0);
}

TEST_CASE("malformed rows raise ParseError with the line number") {
  const std::string path =
      write_temp("lt_data_bad.tsv", "u1\ti1\t5\nu2\ti2\tnotanumber\n");
  try {
    load_interactions(path, DatasetFormat::tsv_triples);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("empty files raise DataError") {
  const std::string path = write_temp("lt_data_empty.tsv", "");
  CHECK_THROWS_AS(load_interactions(path, DatasetFormat::tsv_triples), DataError);
  CHECK_THROWS_AS(load_interactions("/nonexistent/none.tsv",
                                    DatasetFormat::tsv_triples),
                  DataError);
}

TEST_CASE("ratings outside the scale are rejected") {
  CHECK_THROWS_AS(dataset_from_triples({{"u1", "i1", 9.0}}), DataError);
  CHECK_THROWS_AS(dataset_from_triples({{"u1", "i1", 0.0}}), DataError);
}

TEST_CASE("write_interactions round trips") {
  const InteractionDataset data = dataset_from_triples(
      {{"u1", "i1", 5.0}, {"u1", "i2", 3.5}, {"u2", "i1", 4.0}});
  const auto path =
      (std::filesystem::temp_directory_path() / "lt_data_rt.csv").string();
  write_interactions(data, path, DatasetFormat::csv_triples);
  const InteractionDataset back =
      load_interactions(path, DatasetFormat::csv_triples);
  REQUIRE(back.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back.users().id(back.interactions()[i].user) ==
          data.users().id(data.interactions()[i].user));
    CHECK(back.interactions()[i].rating == data.interactions()[i].rating);
  }
}

TEST_CASE("group_by_user lists each user's interactions in order") {
  const InteractionDataset data = dataset_from_triples(
      {{"u1", "i1", 5.0}, {"u2", "i1", 4.0}, {"u1", "i2", 3.0}});
  const auto groups = group_by_user(data);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].size() == 2);
  CHECK(groups[0][1].item == 1);
  CHECK(groups[1].size() == 1);
}

TEST_CASE("cross validation folds partition the data exactly") {
  std::vector<std::tuple<std::string, std::string, double>> rows;
  for (int i = 0; i < 10; ++i)
    rows.emplace_back("u" + std::to_string(i % 3), "i" + std::to_string(i), 3.0);
  const InteractionDataset data = dataset_from_triples(rows);

  const auto folds = cross_validation_folds(data, 5, 42);
  REQUIRE(folds.size() == 5);
  std::multiset<std::pair<int, int>> test_union;
  for (const auto& fold : folds) {
    CHECK(fold.test.size() == 2);
    CHECK(fold.train.size() == 8);
    for (const Interaction& x : fold.test.interactions())
      test_union.insert({x.user, x.item});
  }
  CHECK(test_union.size() == 10);
  std::multiset<std::pair<int, int>> all;
  for (const Interaction& x : data.interactions()) all.insert({x.user, x.item});
  CHECK(test_union == all);
}

TEST_CASE("folds are deterministic given the seed") {
  const InteractionDataset data =
      testutil::make_zipf_dataset(40, 30, 3, 6, 11);
  const auto a = cross_validation_folds(data, 4, 7);
  const auto b = cross_validation_folds(data, 4, 7);
  for (int f = 0; f < 4; ++f) {
    REQUIRE(a[f].test.size() == b[f].test.size());
    for (std::size_t i = 0; i < a[f].test.size(); ++i) {
      CHECK(a[f].test.interactions()[i].user == b[f].test.interactions()[i].user);
      CHECK(a[f].test.interactions()[i].item == b[f].test.interactions()[i].item);
    }
  }
  const auto c = cross_validation_folds(data, 4, 8);
  bool any_difference = false;
  for (int f = 0; f < 4 && !any_difference; ++f) {
    if (a[f].test.size() != c[f].test.size()) {
      any_difference = true;
      break;
    }
    for (std::size_t i = 0; i < a[f].test.size(); ++i)
      if (a[f].test.interactions()[i].item != c[f].test.interactions()[i].item) {
        any_difference = true;
        break;
      }
  }
  CHECK(any_difference);
}

TEST_CASE("fold arguments are validated") {
  const InteractionDataset data =
      dataset_from_triples({{"u1", "i1", 3.0}, {"u1", "i2", 4.0}});
  CHECK_THROWS_AS(cross_validation_folds(data, 1, 0), DataError);
  CHECK_THROWS_AS(cross_validation_folds(data, 3, 0), DataError);
}

TEST_CASE("user stratified folds spread each user's ratings") {
  std::vector<std::tuple<std::string, std::string, double>> rows;
  for (int u = 0; u < 6; ++u)
    for (int i = 0; i < 8; ++i)
      rows.emplace_back("u" + std::to_string(u), "i" + std::to_string(i),
                        1.0 + (u + i) % 5);
  const InteractionDataset data = dataset_from_triples(rows);
  const auto folds =
      cross_validation_folds(data, 4, 3, FoldStrategy::user_stratified);
  for (const auto& fold : folds) {
    std::vector<int> per_user(6, 0);
    for (const Interaction& x : fold.test.interactions()) ++per_user[x.user];
    for (int u = 0; u < 6; ++u) CHECK(per_user[u] == 2);  // 8 ratings / 4 folds
  }
}

TEST_CASE("popularity partition matches the hand prefix sum") {
  std::vector<std::tuple<std::string, std::string, double>> rows;
  const std::vector<std::pair<std::string, int>> counts = {
      {"a", 50}, {"b", 30}, {"c", 10}, {"d", 5}, {"e", 5}};
  int user = 0;
  for (const auto& [item, count] : counts)
    for (int r = 0; r < count; ++r)
      rows.emplace_back("u" + std::to_string(user++), item, 3.0);
  const InteractionDataset data = dataset_from_triples(rows);

  const PopularityPartition partition = build_popularity_partition(data, 0.8);
  CHECK(partition.in_short_head(*data.items().find("a")));
  CHECK(partition.in_short_head(*data.items().find("b")));
  CHECK(partition.in_long_tail(*data.items().find("c")));
  CHECK(partition.in_long_tail(*data.items().find("d")));
  CHECK(partition.in_long_tail(*data.items().find("e")));
  CHECK(partition.phi(*data.items().find("a")) == 50.0);
  CHECK(partition.total_ratings() == 100.0);
}

TEST_CASE("degenerate partitions") {
  const InteractionDataset single = dataset_from_triples(
      {{"u1", "only", 5.0}, {"u2", "only", 4.0}});
  const PopularityPartition p1 = build_popularity_partition(single, 0.8);
  CHECK(p1.short_head_size() == 1);
  CHECK(p1.long_tail_size() == 0);

  const InteractionDataset pair = dataset_from_triples(
      {{"u1", "a", 5.0}, {"u2", "b", 4.0}});
  const PopularityPartition p2 = build_popularity_partition(pair, 0.8);
  // 1 < 0.8 * 2, so both items are needed to reach the head ratio.
  CHECK(p2.short_head_size() == 2);
}

TEST_CASE("partition minimality holds on random data") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const InteractionDataset data =
        testutil::make_zipf_dataset(60, 40, 4, 9, seed);
    const PopularityPartition partition = build_popularity_partition(data, 0.8);
    double head_mass = 0.0;
    double least_head = 0.0;
    bool have_least = false;
    for (ItemIndex i : partition.short_head()) {
      head_mass += partition.phi(i);
      if (!have_least || partition.phi(i) < least_head) {
        least_head = partition.phi(i);
        have_least = true;
      }
    }
    const double total = partition.total_ratings();
    CHECK(head_mass / total >= 0.8);
    REQUIRE(have_least);
    CHECK((head_mass - least_head) / total < 0.8);
    for (ItemIndex i : partition.short_head())
      for (ItemIndex j : partition.long_tail())
        CHECK(partition.phi(i) >= partition.phi(j));
  }
}

TEST_CASE("items unseen in training belong to the long tail") {
  auto users = std::make_shared<Vocab>();
  auto items = std::make_shared<Vocab>();
  const UserIndex u = users->intern("u1");
  const ItemIndex a = items->intern("a");
  items->intern("ghost");
  const InteractionDataset data(
      {Interaction{u, a, 5.0}}, users, items, RatingScale{});
  const PopularityPartition partition = build_popularity_partition(data, 0.8);
  CHECK(partition.in_short_head(a));
  CHECK(partition.in_long_tail(*items->find("ghost")));
  CHECK(partition.phi(*items->find("ghost")) == 0.0);
}

TEST_CASE("head_ratio bounds are enforced") {
  const InteractionDataset data = dataset_from_triples({{"u", "i", 3.0}});
  CHECK_THROWS_AS(build_popularity_partition(data, 0.0), DataError);
  CHECK_THROWS_AS(build_popularity_partition(data, 1.0), DataError);
}

TEST_CASE("partition csv round trips segments") {
  const InteractionDataset data =
      testutil::make_zipf_dataset(30, 20, 3, 6, 21);
  const PopularityPartition partition = build_popularity_partition(data, 0.8);
  const auto path =
      (std::filesystem::temp_directory_path() / "lt_part_rt.csv").string();
  write_partition_csv(partition, path);
  const PopularityPartition back = read_partition_csv(path);
  REQUIRE(back.num_items() == partition.num_items());
  for (ItemIndex i = 0; i < partition.num_items(); ++i) {
    const auto j = back.item_vocab()->find(partition.item_vocab()->id(i));
    REQUIRE(j);
    CHECK(back.in_short_head(*j) == partition.in_short_head(i));
  }

  const PopularityPartition recounted = with_training_counts(back, data);
  for (ItemIndex i = 0; i < partition.num_items(); ++i) {
    const auto j = recounted.item_vocab()->find(partition.item_vocab()->id(i));
    CHECK(recounted.phi(*j) == partition.phi(i));
  }
}

TEST_CASE("bad partition csv rows are rejected") {
  const std::string path = write_temp("lt_part_bad.csv",
                                      "item_id,segment\na,head\nb,middle\n");
  CHECK_THROWS_AS(read_partition_csv(path), ParseError);
}

TEST_CASE("align_partition sends unknown items to the tail") {
  const InteractionDataset data = dataset_from_triples(
      {{"u1", "a", 5.0}, {"u2", "a", 4.0}, {"u3", "b", 3.0}});
  const PopularityPartition partition = build_popularity_partition(data, 0.6);

  auto wider = std::make_shared<Vocab>();
  wider->intern("b");
  wider->intern("new");
  wider->intern("a");
  const PopularityPartition aligned = align_partition(partition, wider);
  CHECK(aligned.in_short_head(*wider->find("a")));
  CHECK(aligned.in_long_tail(*wider->find("new")));
  CHECK(aligned.phi(*wider->find("new")) == 0.0);
  CHECK(aligned.phi(*wider->find("a")) == 2.0);
}
