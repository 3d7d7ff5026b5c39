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
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "longtail/errors.hpp"

namespace longtail {

using UserIndex = std::int32_t;
using ItemIndex = std::int32_t;

/// Bijection between external string ids and dense indices. Indices are
/// assigned in first-seen order, so a vocabulary built from the same input is
/// always identical.
class Vocab {
 public:
  std::int32_t intern(const std::string& id) {
    auto it = index_.find(id);
    if (it != index_.end()) return it->second;
    const auto idx = static_cast<std::int32_t>(ids_.size());
    ids_.push_back(id);
    index_.emplace(id, idx);
    return idx;
  }

  std::optional<std::int32_t> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& id(std::int32_t index) const {
    if (index < 0 || index >= size())
      throw DataError("vocab index out of range: " + std::to_string(index));
    return ids_[static_cast<std::size_t>(index)];
  }

  std::int32_t size() const { return static_cast<std::int32_t>(ids_.size()); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::int32_t> index_;
};

}  // namespace longtail
