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

#include "longtail/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "longtail/errors.hpp"
#include "longtail/rng.hpp"

namespace longtail {
namespace {

constexpr double kDivergenceBound = 1e6;

double sigmoid(double x) {
  if (x >= 0.0) {
    const double z = std::exp(-x);
    return 1.0 / (1.0 + z);
  }
  const double z = std::exp(x);
  return z / (1.0 + z);
}

}  // namespace

FactorModel::FactorModel(int num_users, int num_items, int factors)
    : num_users_(num_users),
      num_items_(num_items),
      factors_(factors),
      p_(static_cast<std::size_t>(num_users) * static_cast<std::size_t>(factors),
         0.0),
      q_(static_cast<std::size_t>(num_items) * static_cast<std::size_t>(factors),
         0.0) {
  if (num_users <= 0 || num_items <= 0 || factors <= 0)
    throw DataError("model dimensions must be positive");
}

double FactorModel::score(UserIndex u, ItemIndex i) const {
  if (u < 0 || u >= num_users_)
    throw DataError("user index out of range: " + std::to_string(u));
  if (i < 0 || i >= num_items_)
    throw DataError("item index out of range: " + std::to_string(i));
  const double* pu = user_factors(u);
  const double* qi = item_factors(i);
  double s = 0.0;
  for (int k = 0; k < factors_; ++k) s += pu[k] * qi[k];
  return s;
}

double pairwise_hinge_value(double delta) {
  const double m = std::max(0.0, 1.0 - delta);
  return m * m;
}

double pairwise_hinge_gradient(double delta) {
  return -2.0 * std::max(0.0, 1.0 - delta);
}

double lt_reg_value(double d, double s_ui, double s_uj) {
  return d * sigmoid(s_ui) * sigmoid(s_uj);
}

void lt_reg_gradients(double d, double s_ui, double s_uj, double* g_ui,
                      double* g_uj) {
  const double a = sigmoid(s_ui);
  const double b = sigmoid(s_uj);
  *g_ui = d * a * (1.0 - a) * b;
  *g_uj = d * b * (1.0 - b) * a;
}

namespace {

struct SampledPair {
  ItemIndex preferred;
  ItemIndex other;
};

// Draws two profile entries with distinct ratings; after bounded rejection
// falls back to the user's extreme-rated items so the draw always succeeds
// for an eligible user.
SampledPair sample_rating_pair(const std::vector<Interaction>& profile,
                               std::mt19937_64& gen) {
  const std::size_t m = profile.size();
  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::size_t a = uniform_below(gen, m);
    std::size_t b = uniform_below(gen, m - 1);
    if (b >= a) ++b;
    const Interaction& x = profile[a];
    const Interaction& y = profile[b];
    if (x.rating == y.rating) continue;
    return x.rating > y.rating ? SampledPair{x.item, y.item}
                               : SampledPair{y.item, x.item};
  }
  std::size_t hi = 0, lo = 0;
  for (std::size_t t = 1; t < m; ++t) {
    if (profile[t].rating > profile[hi].rating) hi = t;
    if (profile[t].rating < profile[lo].rating) lo = t;
  }
  return SampledPair{profile[hi].item, profile[lo].item};
}

void check_config(const TrainConfig& cfg) {
  if (cfg.factors <= 0) throw DataError("factors must be positive");
  if (cfg.epochs < 0) throw DataError("epochs must be non-negative");
  if (cfg.learn_rate <= 0.0) throw DataError("learn_rate must be positive");
  if (cfg.l2_weight < 0.0) throw DataError("l2_weight must be non-negative");
  if (cfg.lambda_reg < 0.0) throw DataError("lambda_reg must be non-negative");
  if (cfg.pair_samples_per_epoch < 0)
    throw DataError("pair_samples_per_epoch must be non-negative");
  if (cfg.reg_pool_size < 2) throw DataError("reg_pool_size must be at least 2");
  if (cfg.reg_samples_per_step < 0)
    throw DataError("reg_samples_per_step must be non-negative");
}

void check_finite(const FactorModel& model, int epoch) {
  for (double v : model.p())
    if (!std::isfinite(v) || std::fabs(v) > kDivergenceBound)
      throw TrainingError("training diverged in user factors", epoch);
  for (double v : model.q())
    if (!std::isfinite(v) || std::fabs(v) > kDivergenceBound)
      throw TrainingError("training diverged in item factors", epoch);
}

// Rebuilds, for one user, the top-pool of highest scored unseen items that
// the regularizer samples pairs from.
void build_pool(const FactorModel& model, UserIndex u,
                const std::vector<char>& seen, int pool_size,
                std::vector<std::pair<double, ItemIndex>>* scratch,
                std::vector<ItemIndex>* pool) {
  scratch->clear();
  const int num_items = model.num_items();
  for (ItemIndex i = 0; i < num_items; ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    scratch->emplace_back(model.score(u, i), i);
  }
  const std::size_t keep =
      std::min<std::size_t>(static_cast<std::size_t>(pool_size), scratch->size());
  std::partial_sort(scratch->begin(), scratch->begin() + static_cast<long>(keep),
                    scratch->end(), [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  pool->clear();
  for (std::size_t t = 0; t < keep; ++t) pool->push_back((*scratch)[t].second);
}

FactorModel train_impl(const InteractionDataset& train,
                       const PopularityPartition* partition,
                       const TrainConfig& cfg) {
  check_config(cfg);
  if (train.empty()) throw DataError("cannot train on an empty dataset");
  const double lambda = partition ? cfg.lambda_reg : 0.0;

  FactorModel model(train.num_users(), train.num_items(), cfg.factors);

  // Distinct generator streams: initialization, accuracy pair sampling, and
  // regularizer sampling. Keeping the accuracy stream untouched by the
  // regularizer makes the lambda=0 trajectory identical to the base trainer
  // and isolates small-lambda effects from sampling noise.
  std::mt19937_64 rng_init(mix_seed(cfg.seed, 0));
  std::mt19937_64 rng_acc(mix_seed(cfg.seed, 1));
  std::mt19937_64 rng_reg(mix_seed(cfg.seed, 2));

  for (double& v : model.p()) v = uniform_range(rng_init, -0.01, 0.01);
  for (double& v : model.q()) v = uniform_range(rng_init, -0.01, 0.01);

  const auto profiles = group_by_user(train);

  // Users able to produce a preference pair: two interactions with
  // different ratings.
  std::vector<UserIndex> acc_users;
  for (std::size_t u = 0; u < profiles.size(); ++u) {
    const auto& profile = profiles[u];
    if (profile.size() < 2) continue;
    const auto [lo, hi] = std::minmax_element(
        profile.begin(), profile.end(),
        [](const Interaction& a, const Interaction& b) { return a.rating < b.rating; });
    if (lo->rating < hi->rating) acc_users.push_back(static_cast<UserIndex>(u));
  }
  if (acc_users.empty())
    throw DataError("no user has two interactions with distinct ratings");

  std::vector<std::vector<char>> seen;
  std::vector<UserIndex> reg_users;
  std::vector<std::vector<ItemIndex>> pools;
  if (lambda > 0.0) {
    seen.assign(profiles.size(),
                std::vector<char>(static_cast<std::size_t>(train.num_items()), 0));
    for (std::size_t u = 0; u < profiles.size(); ++u)
      for (const Interaction& x : profiles[u])
        seen[u][static_cast<std::size_t>(x.item)] = 1;
    for (std::size_t u = 0; u < profiles.size(); ++u) {
      const auto unseen = static_cast<std::size_t>(train.num_items()) -
                          profiles[u].size();
      if (!profiles[u].empty() && unseen >= 2)
        reg_users.push_back(static_cast<UserIndex>(u));
    }
    pools.resize(profiles.size());
  }

  const std::int64_t steps = cfg.pair_samples_per_epoch > 0
                                 ? cfg.pair_samples_per_epoch
                                 : static_cast<std::int64_t>(train.size());
  const int f = cfg.factors;
  std::vector<double> pu_old(static_cast<std::size_t>(f));
  std::vector<std::pair<double, ItemIndex>> scratch;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (lambda > 0.0 && !reg_users.empty()) {
      for (UserIndex u : reg_users)
        build_pool(model, u, seen[static_cast<std::size_t>(u)],
                   cfg.reg_pool_size, &scratch,
                   &pools[static_cast<std::size_t>(u)]);
    }

    for (std::int64_t step = 0; step < steps; ++step) {
      const UserIndex u = acc_users[uniform_below(rng_acc, acc_users.size())];
      const SampledPair pair =
          sample_rating_pair(profiles[static_cast<std::size_t>(u)], rng_acc);
      double* pu = model.user_factors(u);
      double* qi = model.item_factors(pair.preferred);
      double* qj = model.item_factors(pair.other);
      double s_ui = 0.0, s_uj = 0.0;
      for (int k = 0; k < f; ++k) {
        s_ui += pu[k] * qi[k];
        s_uj += pu[k] * qj[k];
      }
      const double g = pairwise_hinge_gradient(s_ui - s_uj);
      std::memcpy(pu_old.data(), pu, sizeof(double) * static_cast<std::size_t>(f));
      const double lr = cfg.learn_rate;
      const double l2 = cfg.l2_weight;
      for (int k = 0; k < f; ++k) {
        pu[k] -= lr * (g * (qi[k] - qj[k]) + l2 * pu[k]);
        qi[k] -= lr * (g * pu_old[k] + l2 * qi[k]);
        qj[k] -= lr * (-g * pu_old[k] + l2 * qj[k]);
      }

      if (lambda > 0.0 && !reg_users.empty()) {
        for (int r = 0; r < cfg.reg_samples_per_step; ++r) {
          const UserIndex ru = reg_users[uniform_below(rng_reg, reg_users.size())];
          const auto& pool = pools[static_cast<std::size_t>(ru)];
          const std::size_t a = uniform_below(rng_reg, pool.size());
          std::size_t b = uniform_below(rng_reg, pool.size() - 1);
          if (b >= a) ++b;
          const ItemIndex ri = pool[a];
          const ItemIndex rj = pool[b];
          if (!partition->co_member(ri, rj)) continue;
          double* rpu = model.user_factors(ru);
          double* rqi = model.item_factors(ri);
          double* rqj = model.item_factors(rj);
          double rs_ui = 0.0, rs_uj = 0.0;
          for (int k = 0; k < f; ++k) {
            rs_ui += rpu[k] * rqi[k];
            rs_uj += rpu[k] * rqj[k];
          }
          double g_ui = 0.0, g_uj = 0.0;
          lt_reg_gradients(1.0, rs_ui, rs_uj, &g_ui, &g_uj);
          const double scale = cfg.learn_rate * lambda;
          std::memcpy(pu_old.data(), rpu,
                      sizeof(double) * static_cast<std::size_t>(f));
          for (int k = 0; k < f; ++k) {
            rpu[k] -= scale * (g_ui * rqi[k] + g_uj * rqj[k]);
            rqi[k] -= scale * g_ui * pu_old[k];
            rqj[k] -= scale * g_uj * pu_old[k];
          }
        }
      }
    }
    check_finite(model, epoch);
  }

  model.set_trained_with(TrainedWith{partition != nullptr, lambda});
  return model;
}

}  // namespace

FactorModel train_base(const InteractionDataset& train, const TrainConfig& cfg) {
  return train_impl(train, nullptr, cfg);
}

FactorModel train_lt_reg(const InteractionDataset& train,
                         const PopularityPartition& partition,
                         const TrainConfig& cfg) {
  if (partition.num_items() != train.num_items())
    throw DataError("partition does not cover the training item vocabulary");
  FactorModel model = train_impl(train, &partition, cfg);
  model.set_trained_with(TrainedWith{true, cfg.lambda_reg});
  return model;
}

RankedList top_n_candidates(const FactorModel& model, UserIndex user,
                            const std::vector<char>& exclude, int n) {
  if (n <= 0) throw DataError("candidate length must be positive");
  if (exclude.size() != static_cast<std::size_t>(model.num_items()))
    throw DataError("exclusion mask does not cover the item vocabulary");
  std::vector<std::pair<double, ItemIndex>> scored;
  scored.reserve(static_cast<std::size_t>(model.num_items()));
  for (ItemIndex i = 0; i < model.num_items(); ++i) {
    if (exclude[static_cast<std::size_t>(i)]) continue;
    scored.emplace_back(model.score(user, i), i);
  }
  if (static_cast<std::size_t>(n) > scored.size())
    throw DataError("not enough unseen items for a length-" +
                    std::to_string(n) + " candidate list");
  std::partial_sort(scored.begin(), scored.begin() + n, scored.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  RankedList list;
  list.user = user;
  list.origin = ListOrigin::base;
  list.entries.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t)
    list.entries.push_back(ScoredItem{scored[static_cast<std::size_t>(t)].second,
                                      scored[static_cast<std::size_t>(t)].first});
  return list;
}

std::vector<RankedList> all_candidates(
    const FactorModel& model,
    const std::vector<std::vector<char>>& exclude_by_user, int n) {
  if (exclude_by_user.size() != static_cast<std::size_t>(model.num_users()))
    throw DataError("exclusion masks do not cover the user vocabulary");
  std::vector<RankedList> lists;
  lists.reserve(exclude_by_user.size());
  for (UserIndex u = 0; u < model.num_users(); ++u)
    lists.push_back(
        top_n_candidates(model, u, exclude_by_user[static_cast<std::size_t>(u)], n));
  return lists;
}

namespace {

constexpr char kModelMagic[8] = {'L', 'T', 'M', 'F', '0', '0', '0', '1'};

void write_vocab(std::ofstream& out, const Vocab& vocab) {
  const std::int32_t n = vocab.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  for (std::int32_t i = 0; i < n; ++i) {
    const std::string& id = vocab.id(i);
    const std::int32_t len = static_cast<std::int32_t>(id.size());
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(id.data(), len);
  }
}

std::shared_ptr<Vocab> read_vocab(std::ifstream& in, const std::string& path) {
  std::int32_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in || n < 0) throw ParseError("corrupt vocabulary in " + path);
  auto vocab = std::make_shared<Vocab>();
  std::string id;
  for (std::int32_t i = 0; i < n; ++i) {
    std::int32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    if (!in || len < 0) throw ParseError("corrupt vocabulary in " + path);
    id.resize(static_cast<std::size_t>(len));
    in.read(id.data(), len);
    if (!in) throw ParseError("corrupt vocabulary in " + path);
    vocab->intern(id);
  }
  if (vocab->size() != n) throw ParseError("duplicate ids in " + path);
  return vocab;
}

}  // namespace

void save_model(const FactorModel& model, const Vocab& users, const Vocab& items,
                const std::string& path) {
  if (users.size() != model.num_users() || items.size() != model.num_items())
    throw DataError("vocabulary sizes do not match the model");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out.write(kModelMagic, sizeof(kModelMagic));
  const std::int32_t dims[3] = {model.num_users(), model.num_items(),
                                model.factors()};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  const TrainedWith t = model.trained_with();
  const std::uint8_t regularized = t.regularized ? 1 : 0;
  out.write(reinterpret_cast<const char*>(&regularized), sizeof(regularized));
  out.write(reinterpret_cast<const char*>(&t.lambda), sizeof(t.lambda));
  write_vocab(out, users);
  write_vocab(out, items);
  out.write(reinterpret_cast<const char*>(model.p().data()),
            static_cast<std::streamsize>(model.p().size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(model.q().data()),
            static_cast<std::streamsize>(model.q().size() * sizeof(double)));
  if (!out) throw DataError("failed writing model file: " + path);
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  char magic[sizeof(kModelMagic)] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0)
    throw ParseError("not a model file: " + path);
  std::int32_t dims[3] = {};
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!in || dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
    throw ParseError("corrupt model header in " + path);
  std::uint8_t regularized = 0;
  double lambda = 0.0;
  in.read(reinterpret_cast<char*>(&regularized), sizeof(regularized));
  in.read(reinterpret_cast<char*>(&lambda), sizeof(lambda));

  LoadedModel result{FactorModel(dims[0], dims[1], dims[2]), nullptr, nullptr};
  result.users = read_vocab(in, path);
  result.items = read_vocab(in, path);
  if (result.users->size() != dims[0] || result.items->size() != dims[1])
    throw ParseError("vocabulary sizes disagree with header in " + path);
  in.read(reinterpret_cast<char*>(result.model.p().data()),
          static_cast<std::streamsize>(result.model.p().size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(result.model.q().data()),
          static_cast<std::streamsize>(result.model.q().size() * sizeof(double)));
  if (!in) throw ParseError("truncated model file: " + path);
  result.model.set_trained_with(TrainedWith{regularized != 0, lambda});
  return result;
}

}  // namespace longtail
