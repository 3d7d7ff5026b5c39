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
#include <vector>

#include "longtail/interactions.hpp"
#include "longtail/partition.hpp"
#include "longtail/ranked_list.hpp"
#include "longtail/vocab.hpp"

namespace longtail {

struct TrainConfig {
  int factors = 50;
  int epochs = 30;
  double learn_rate = 0.05;
  double l2_weight = 0.01;
  // Fairness trade-off weight; 0 disables the regularizer entirely and
  // reproduces the base ranker draw for draw.
  double lambda_reg = 0.0;
  // Accuracy pairs sampled per epoch; 0 means one per training interaction.
  std::int64_t pair_samples_per_epoch = 0;
  // Regularizer pairs are drawn from each user's current top scored pool.
  int reg_pool_size = 20;
  int reg_samples_per_step = 1;
  std::uint64_t seed = 1;
};

/// Which objective produced a model: the plain ranker or the regularized one
/// with its lambda.
struct TrainedWith {
  bool regularized = false;
  double lambda = 0.0;
};

/// Dense MF model: score(u, i) = dot(P[u], Q[i]).
class FactorModel {
 public:
  FactorModel(int num_users, int num_items, int factors);

  int num_users() const { return num_users_; }
  int num_items() const { return num_items_; }
  int factors() const { return factors_; }

  double* user_factors(UserIndex u) { return &p_[static_cast<std::size_t>(u) * factors_]; }
  const double* user_factors(UserIndex u) const {
    return &p_[static_cast<std::size_t>(u) * factors_];
  }
  double* item_factors(ItemIndex i) { return &q_[static_cast<std::size_t>(i) * factors_]; }
  const double* item_factors(ItemIndex i) const {
    return &q_[static_cast<std::size_t>(i) * factors_];
  }

  double score(UserIndex u, ItemIndex i) const;

  std::vector<double>& p() { return p_; }
  std::vector<double>& q() { return q_; }
  const std::vector<double>& p() const { return p_; }
  const std::vector<double>& q() const { return q_; }

  TrainedWith trained_with() const { return trained_with_; }
  void set_trained_with(TrainedWith t) { trained_with_ = t; }

 private:
  int num_users_;
  int num_items_;
  int factors_;
  std::vector<double> p_;  // num_users x factors, row major
  std::vector<double> q_;  // num_items x factors, row major
  TrainedWith trained_with_;
};

/// Squared hinge max(0, 1 - delta)^2 on the score difference of a preferred
/// over a less preferred item, plus its derivative in delta.
double pairwise_hinge_value(double delta);
double pairwise_hinge_gradient(double delta);

/// Regularizer contribution of one sampled item pair, Eq. form
/// d(i, j) * sigmoid(s_ui) * sigmoid(s_uj), and the derivatives in the two
/// scores. d(i, j) is 1 for co-members of the same popularity segment.
double lt_reg_value(double d, double s_ui, double s_uj);
void lt_reg_gradients(double d, double s_ui, double s_uj, double* g_ui,
                      double* g_uj);

/// Pairwise LTR training without the fairness term. Throws TrainingError when
/// any factor diverges past 1e6 in magnitude.
FactorModel train_base(const InteractionDataset& train, const TrainConfig& cfg);

/// Same sampling schedule as train_base plus the LT-Reg penalty on item pairs
/// drawn from the user's top scored pool. With cfg.lambda_reg == 0 the result
/// is bitwise identical to train_base under the same config.
FactorModel train_lt_reg(const InteractionDataset& train,
                         const PopularityPartition& partition,
                         const TrainConfig& cfg);

/// Top-n excluded-free items for a user by descending score; ties break on
/// smaller item index. `exclude` usually marks the training profile. Requires
/// n <= number of non-excluded items.
RankedList top_n_candidates(const FactorModel& model, UserIndex user,
                            const std::vector<char>& exclude, int n);

/// All users' candidate lists. exclude_by_user marks training profile items.
std::vector<RankedList> all_candidates(
    const FactorModel& model,
    const std::vector<std::vector<char>>& exclude_by_user, int n);

/// Flat binary round trip carrying factors plus both vocabularies; scores
/// reload bit-exact.
void save_model(const FactorModel& model, const Vocab& users,
                const Vocab& items, const std::string& path);

struct LoadedModel {
  FactorModel model;
  std::shared_ptr<Vocab> users;
  std::shared_ptr<Vocab> items;
};

LoadedModel load_model(const std::string& path);

}  // namespace longtail
