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

#include "longtail/vocab.hpp"

namespace longtail {

enum class ListOrigin { base, binary_xquad, smooth_xquad, lt_reg_model };

const char* to_string(ListOrigin origin);
ListOrigin list_origin_from_string(const std::string& token);

struct ScoredItem {
  ItemIndex item;
  double score;
};

/// One user's recommendation list, ordered as the producing algorithm emitted
/// it. Items are unique within a list.
struct RankedList {
  UserIndex user = -1;
  std::vector<ScoredItem> entries;
  ListOrigin origin = ListOrigin::base;

  std::size_t size() const { return entries.size(); }
  bool contains(ItemIndex item) const;
};

/// CSV schema `user,item,score,rank[,origin]` with 1-based per-user ranks.
void write_lists_csv(const std::vector<RankedList>& lists, const Vocab& users,
                     const Vocab& items, const std::string& path,
                     bool include_origin);

struct LoadedLists {
  std::vector<RankedList> lists;  // users in first-appearance order
  std::shared_ptr<Vocab> users;
  std::shared_ptr<Vocab> items;
};

/// Reads lists back, rebuilding each user's list in rank order. Rows for one
/// user need not be contiguous; duplicate ranks or items are errors.
LoadedLists read_lists_csv(const std::string& path);

}  // namespace longtail
