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

#include "longtail/ranked_list.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "longtail/errors.hpp"

namespace longtail {

const char* to_string(ListOrigin origin) {
  switch (origin) {
    case ListOrigin::base: return "base";
    case ListOrigin::binary_xquad: return "binary_xquad";
    case ListOrigin::smooth_xquad: return "smooth_xquad";
    case ListOrigin::lt_reg_model: return "lt_reg";
  }
  return "base";
}

ListOrigin list_origin_from_string(const std::string& token) {
  if (token == "base") return ListOrigin::base;
  if (token == "binary_xquad") return ListOrigin::binary_xquad;
  if (token == "smooth_xquad") return ListOrigin::smooth_xquad;
  if (token == "lt_reg") return ListOrigin::lt_reg_model;
  throw ParseError("unknown list origin: " + token);
}

bool RankedList::contains(ItemIndex item) const {
  return std::any_of(entries.begin(), entries.end(),
                     [item](const ScoredItem& e) { return e.item == item; });
}

void write_lists_csv(const std::vector<RankedList>& lists, const Vocab& users,
                     const Vocab& items, const std::string& path,
                     bool include_origin) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write lists file: " + path);
  out << (include_origin ? "user,item,score,rank,origin\n"
                         : "user,item,score,rank\n");
  char buffer[64];
  for (const RankedList& list : lists) {
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
      const ScoredItem& e = list.entries[r];
      std::snprintf(buffer, sizeof(buffer), "%.9f", e.score);
      out << users.id(list.user) << ',' << items.id(e.item) << ',' << buffer
          << ',' << (r + 1);
      if (include_origin) out << ',' << to_string(list.origin);
      out << '\n';
    }
  }
  if (!out) throw DataError("failed writing lists file: " + path);
}

LoadedLists read_lists_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lists file: " + path);

  LoadedLists result;
  result.users = std::make_shared<Vocab>();
  result.items = std::make_shared<Vocab>();

  struct PendingList {
    std::map<long, ScoredItem> by_rank;
    ListOrigin origin = ListOrigin::base;
    bool origin_set = false;
  };
  std::vector<PendingList> pending;  // by user index

  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    {
      std::istringstream ls(line);
      std::string field;
      while (std::getline(ls, field, ',')) fields.push_back(field);
    }
    if (!saw_header) {
      saw_header = true;
      if (fields.size() >= 4 && fields[0] == "user" && fields[1] == "item" &&
          fields[2] == "score" && fields[3] == "rank")
        continue;
    }
    if (fields.size() != 4 && fields.size() != 5)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected user,item,score,rank[,origin]");

    char* end = nullptr;
    const double score = std::strtod(fields[2].c_str(), &end);
    if (fields[2].empty() || end != fields[2].c_str() + fields[2].size())
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": score is not a number: " + fields[2]);
    const long rank = std::strtol(fields[3].c_str(), &end, 10);
    if (fields[3].empty() || end != fields[3].c_str() + fields[3].size() ||
        rank < 1)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": rank must be a positive integer: " + fields[3]);

    const UserIndex u = result.users->intern(fields[0]);
    const ItemIndex i = result.items->intern(fields[1]);
    if (static_cast<std::size_t>(u) >= pending.size())
      pending.resize(static_cast<std::size_t>(u) + 1);
    PendingList& list = pending[static_cast<std::size_t>(u)];
    if (!list.by_rank.emplace(rank, ScoredItem{i, score}).second)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": duplicate rank " + fields[3] + " for user " +
                       fields[0]);
    if (fields.size() == 5) {
      const ListOrigin origin = list_origin_from_string(fields[4]);
      if (list.origin_set && origin != list.origin)
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": conflicting origins for user " + fields[0]);
      list.origin = origin;
      list.origin_set = true;
    }
  }
  if (pending.empty()) throw DataError("no list rows in " + path);

  for (std::size_t u = 0; u < pending.size(); ++u) {
    const PendingList& src = pending[u];
    RankedList list;
    list.user = static_cast<UserIndex>(u);
    list.origin = src.origin;
    long expected = 1;
    for (const auto& [rank, entry] : src.by_rank) {
      if (rank != expected)
        throw DataError(path + ": user " + result.users->id(list.user) +
                        " has a gap at rank " + std::to_string(expected));
      if (list.contains(entry.item))
        throw DataError(path + ": user " + result.users->id(list.user) +
                        " repeats item " + result.items->id(entry.item));
      list.entries.push_back(entry);
      ++expected;
    }
    result.lists.push_back(std::move(list));
  }
  return result;
}

}  // namespace longtail
