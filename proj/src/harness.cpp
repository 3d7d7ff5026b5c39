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

#include "longtail/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "longtail/errors.hpp"
#include "longtail/rng.hpp"

namespace longtail {

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::base: return "base";
    case Algorithm::binary_xquad: return "binary_xquad";
    case Algorithm::smooth_xquad: return "smooth_xquad";
    case Algorithm::lt_reg: return "lt_reg";
  }
  return "base";
}

Algorithm algorithm_from_string(const std::string& token) {
  if (token == "base") return Algorithm::base;
  if (token == "binary_xquad") return Algorithm::binary_xquad;
  if (token == "smooth_xquad") return Algorithm::smooth_xquad;
  if (token == "lt_reg") return Algorithm::lt_reg;
  throw ParseError("unknown algorithm: " + token);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::istringstream in(value);
  std::string token;
  while (std::getline(in, token, ',')) {
    token = trim(token);
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

double parse_real(const std::string& value, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    throw ParseError("config key " + key + ": not a number: " + value);
  return v;
}

std::int64_t parse_int(const std::string& value, const std::string& key) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size())
    throw ParseError("config key " + key + ": not an integer: " + value);
  return v;
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t space = line.find_first_of(" \t");
    if (space == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected `key value`");
    const std::string key = line.substr(0, space);
    const std::string value = trim(line.substr(space + 1));

    if (key == "dataset") {
      cfg.dataset_path = value;
    } else if (key == "format") {
      cfg.format = dataset_format_from_string(value);
    } else if (key == "folds") {
      cfg.folds = static_cast<int>(parse_int(value, key));
    } else if (key == "head_ratio") {
      cfg.head_ratio = parse_real(value, key);
    } else if (key == "candidate_pool") {
      cfg.candidate_pool = static_cast<int>(parse_int(value, key));
    } else if (key == "list_size") {
      cfg.list_size = static_cast<int>(parse_int(value, key));
    } else if (key == "relevance_threshold") {
      cfg.relevance_threshold = parse_real(value, key);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "fold_strategy") {
      if (value == "interaction_shuffle")
        cfg.fold_strategy = FoldStrategy::interaction_shuffle;
      else if (value == "user_stratified")
        cfg.fold_strategy = FoldStrategy::user_stratified;
      else
        throw ParseError("unknown fold_strategy: " + value);
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (const std::string& token : split_list(value))
        cfg.algorithms.push_back(algorithm_from_string(token));
    } else if (key == "lambda_grid") {
      cfg.lambda_grid.clear();
      for (const std::string& token : split_list(value))
        cfg.lambda_grid.push_back(parse_real(token, key));
    } else if (key == "lt_reg_lambda_grid") {
      cfg.lt_reg_lambda_grid.clear();
      for (const std::string& token : split_list(value))
        cfg.lt_reg_lambda_grid.push_back(parse_real(token, key));
    } else if (key == "combination") {
      if (value == "additive")
        cfg.combination = ScoreCombination::additive;
      else if (value == "convex")
        cfg.combination = ScoreCombination::convex;
      else
        throw ParseError("unknown combination: " + value);
    } else if (key == "prior_smoothing") {
      cfg.prior_smoothing = parse_real(value, key);
    } else if (key == "output") {
      cfg.output_path = value;
    } else if (key == "sample_users") {
      cfg.sample_users = static_cast<int>(parse_int(value, key));
    } else if (key == "factors") {
      cfg.trainer.factors = static_cast<int>(parse_int(value, key));
    } else if (key == "epochs") {
      cfg.trainer.epochs = static_cast<int>(parse_int(value, key));
    } else if (key == "learn_rate") {
      cfg.trainer.learn_rate = parse_real(value, key);
    } else if (key == "l2_weight") {
      cfg.trainer.l2_weight = parse_real(value, key);
    } else if (key == "pair_samples_per_epoch") {
      cfg.trainer.pair_samples_per_epoch = parse_int(value, key);
    } else if (key == "reg_pool_size") {
      cfg.trainer.reg_pool_size = static_cast<int>(parse_int(value, key));
    } else if (key == "reg_samples_per_step") {
      cfg.trainer.reg_samples_per_step = static_cast<int>(parse_int(value, key));
    } else {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": unknown config key: " + key);
    }
  }
  return cfg;
}

namespace {

// Canonical ordering for report rows. Execution is fold-major; presentation
// sorts by algorithm, then lambda, then fold with the aggregate rows last.
int algorithm_rank(Algorithm a) { return static_cast<int>(a); }

int fold_rank(const std::string& fold) {
  if (fold == "mean") return 1 << 20;
  if (fold == "std") return (1 << 20) + 1;
  return static_cast<int>(std::strtol(fold.c_str(), nullptr, 10));
}

void sort_rows(std::vector<EvalRow>* rows) {
  std::stable_sort(rows->begin(), rows->end(),
                   [](const EvalRow& a, const EvalRow& b) {
                     if (a.algorithm != b.algorithm)
                       return algorithm_rank(a.algorithm) < algorithm_rank(b.algorithm);
                     if (a.lambda != b.lambda) return a.lambda < b.lambda;
                     return fold_rank(a.fold) < fold_rank(b.fold);
                   });
}

EvalRow metrics_row(Algorithm algorithm, double lambda, int fold,
                    const RecommendationBatch& batch,
                    const PopularityPartition& partition,
                    const RelevanceJudgments& judgments, int n) {
  EvalRow row;
  row.algorithm = algorithm;
  row.lambda = lambda;
  row.fold = std::to_string(fold);
  row.arp = arp(batch, partition);
  row.aplt = aplt(batch, partition);
  row.aclt = aclt(batch, partition);
  const CoverageResult coverage = distinct_long_tail_coverage(batch, partition);
  row.coverage_count = static_cast<double>(coverage.distinct_count);
  row.coverage_fraction = coverage.fraction;
  row.ndcg = ndcg(batch, judgments, n);
  return row;
}

void append_aggregates(std::vector<EvalRow>* rows) {
  std::map<std::pair<int, double>, std::vector<const EvalRow*>> cells;
  for (const EvalRow& row : *rows)
    cells[{algorithm_rank(row.algorithm), row.lambda}].push_back(&row);

  std::vector<EvalRow> aggregates;
  for (const auto& [key, cell] : cells) {
    const double k = static_cast<double>(cell.size());
    EvalRow mean;
    mean.algorithm = cell.front()->algorithm;
    mean.lambda = cell.front()->lambda;
    mean.fold = "mean";
    for (const EvalRow* row : cell) {
      mean.arp += row->arp;
      mean.aplt += row->aplt;
      mean.aclt += row->aclt;
      mean.coverage_count += row->coverage_count;
      mean.coverage_fraction += row->coverage_fraction;
      mean.ndcg += row->ndcg;
    }
    mean.arp /= k;
    mean.aplt /= k;
    mean.aclt /= k;
    mean.coverage_count /= k;
    mean.coverage_fraction /= k;
    mean.ndcg /= k;

    EvalRow sd;
    sd.algorithm = mean.algorithm;
    sd.lambda = mean.lambda;
    sd.fold = "std";
    if (cell.size() > 1) {
      for (const EvalRow* row : cell) {
        sd.arp += (row->arp - mean.arp) * (row->arp - mean.arp);
        sd.aplt += (row->aplt - mean.aplt) * (row->aplt - mean.aplt);
        sd.aclt += (row->aclt - mean.aclt) * (row->aclt - mean.aclt);
        sd.coverage_count += (row->coverage_count - mean.coverage_count) *
                             (row->coverage_count - mean.coverage_count);
        sd.coverage_fraction +=
            (row->coverage_fraction - mean.coverage_fraction) *
            (row->coverage_fraction - mean.coverage_fraction);
        sd.ndcg += (row->ndcg - mean.ndcg) * (row->ndcg - mean.ndcg);
      }
      const double denom = k - 1.0;
      sd.arp = std::sqrt(sd.arp / denom);
      sd.aplt = std::sqrt(sd.aplt / denom);
      sd.aclt = std::sqrt(sd.aclt / denom);
      sd.coverage_count = std::sqrt(sd.coverage_count / denom);
      sd.coverage_fraction = std::sqrt(sd.coverage_fraction / denom);
      sd.ndcg = std::sqrt(sd.ndcg / denom);
    }
    aggregates.push_back(mean);
    aggregates.push_back(sd);
  }
  rows->insert(rows->end(), aggregates.begin(), aggregates.end());
}

std::vector<double> grid_for(const ExperimentConfig& cfg, Algorithm algorithm) {
  if (algorithm == Algorithm::base) return {0.0};
  if (algorithm == Algorithm::lt_reg && !cfg.lt_reg_lambda_grid.empty())
    return cfg.lt_reg_lambda_grid;
  return cfg.lambda_grid;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.folds < 2) throw DataError("folds must be at least 2");
  if (cfg.candidate_pool <= 0 || cfg.list_size <= 0)
    throw DataError("candidate_pool and list_size must be positive");
  if (cfg.list_size >= cfg.candidate_pool)
    throw DataError("list_size must be smaller than candidate_pool");
  if (cfg.lambda_grid.empty()) throw DataError("lambda_grid must be non-empty");
  if (cfg.algorithms.empty()) throw DataError("algorithms must be non-empty");
  if (cfg.sample_users < 0) throw DataError("sample_users must be non-negative");
}

}  // namespace

EvalReport run_experiment_on(const InteractionDataset& data,
                             const ExperimentConfig& cfg) {
  validate(cfg);
  const auto folds =
      cross_validation_folds(data, cfg.folds, cfg.seed, cfg.fold_strategy);

  std::vector<EvalRow> rows;
  for (const FoldPair& fold : folds) {
    try {
      const PopularityPartition partition =
          build_popularity_partition(fold.train, cfg.head_ratio);

      TrainConfig tcfg = cfg.trainer;
      tcfg.seed = mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(fold.fold_id));
      tcfg.lambda_reg = 0.0;
      const FactorModel base_model = train_base(fold.train, tcfg);

      // Warm users: appear in this fold's training part (so the model knows
      // them) and in its test part (so there is ground truth).
      std::vector<char> in_train(static_cast<std::size_t>(data.num_users()), 0);
      for (const Interaction& x : fold.train.interactions())
        in_train[static_cast<std::size_t>(x.user)] = 1;
      std::vector<char> in_test(static_cast<std::size_t>(data.num_users()), 0);
      for (const Interaction& x : fold.test.interactions())
        in_test[static_cast<std::size_t>(x.user)] = 1;
      std::vector<UserIndex> eval_users;
      for (UserIndex u = 0; u < data.num_users(); ++u) {
        if (!in_train[static_cast<std::size_t>(u)] ||
            !in_test[static_cast<std::size_t>(u)])
          continue;
        if (cfg.sample_users > 0 && u >= cfg.sample_users) continue;
        eval_users.push_back(u);
      }
      if (eval_users.empty())
        throw DataError("no user appears in both train and test");

      std::vector<std::vector<char>> seen(
          static_cast<std::size_t>(data.num_users()));
      for (UserIndex u : eval_users)
        seen[static_cast<std::size_t>(u)].assign(
            static_cast<std::size_t>(data.num_items()), 0);
      for (const Interaction& x : fold.train.interactions())
        if (!seen[static_cast<std::size_t>(x.user)].empty())
          seen[static_cast<std::size_t>(x.user)][static_cast<std::size_t>(x.item)] = 1;

      // Length-m candidates from the base model, computed once per fold and
      // shared by every re-ranker cell.
      std::vector<RankedList> candidates;
      candidates.reserve(eval_users.size());
      for (UserIndex u : eval_users) {
        RankedList list = top_n_candidates(
            base_model, u, seen[static_cast<std::size_t>(u)], cfg.candidate_pool);
        normalize_scores(&list);
        candidates.push_back(std::move(list));
      }

      const std::vector<CategoryPrior> priors =
          category_priors(fold.train, partition, cfg.prior_smoothing);
      const RelevanceJudgments judgments =
          judgments_from_test(fold.test, cfg.relevance_threshold);

      std::vector<RankedList> base_lists;
      base_lists.reserve(candidates.size());
      for (const RankedList& list : candidates) {
        RankedList head = list;
        head.entries.resize(static_cast<std::size_t>(cfg.list_size));
        base_lists.push_back(std::move(head));
      }
      const RecommendationBatch base_batch =
          RecommendationBatch::from_lists(base_lists);

      for (Algorithm algorithm : cfg.algorithms) {
        for (double lambda : grid_for(cfg, algorithm)) {
          RecommendationBatch batch;
          switch (algorithm) {
            case Algorithm::base:
              batch = base_batch;
              break;
            case Algorithm::binary_xquad:
            case Algorithm::smooth_xquad: {
              XquadConfig xcfg;
              xcfg.lambda = lambda;
              xcfg.variant = algorithm == Algorithm::binary_xquad
                                 ? XquadVariant::binary
                                 : XquadVariant::smooth;
              xcfg.combination = cfg.combination;
              xcfg.n = cfg.list_size;
              batch = RecommendationBatch::from_lists(
                  xquad_rerank_all(candidates, partition, priors, xcfg));
              break;
            }
            case Algorithm::lt_reg: {
              if (lambda == 0.0) {
                batch = base_batch;
                break;
              }
              TrainConfig rcfg = tcfg;
              rcfg.lambda_reg = lambda;
              const FactorModel model = train_lt_reg(fold.train, partition, rcfg);
              std::vector<RankedList> lists;
              lists.reserve(eval_users.size());
              for (UserIndex u : eval_users) {
                RankedList list = top_n_candidates(
                    model, u, seen[static_cast<std::size_t>(u)], cfg.list_size);
                list.origin = ListOrigin::lt_reg_model;
                lists.push_back(std::move(list));
              }
              batch = RecommendationBatch::from_lists(lists);
              break;
            }
          }
          rows.push_back(metrics_row(algorithm, lambda, fold.fold_id, batch,
                                     partition, judgments, cfg.list_size));
        }
      }
    } catch (const TrainingError& e) {
      throw TrainingError("fold " + std::to_string(fold.fold_id) + ": " +
                              e.what(),
                          e.epoch());
    } catch (const DataError& e) {
      throw DataError("fold " + std::to_string(fold.fold_id) + ": " + e.what());
    }
  }

  append_aggregates(&rows);
  sort_rows(&rows);
  return EvalReport{std::move(rows)};
}

EvalReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.dataset_path.empty()) throw DataError("config is missing `dataset`");
  const InteractionDataset data = load_interactions(cfg.dataset_path, cfg.format);
  return run_experiment_on(data, cfg);
}

namespace {

std::string fixed6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

}  // namespace

void emit_report(const EvalReport& report, std::ostream& out,
                 ReportFormat format) {
  if (report.rows.empty()) throw DataError("refusing to emit an empty report");
  if (format == ReportFormat::csv) {
    out << "algorithm,lambda,fold,ARP,APLT,ACLT,coverage_count,"
           "coverage_fraction,NDCG\n";
    for (const EvalRow& row : report.rows) {
      out << to_string(row.algorithm) << ',' << fixed6(row.lambda) << ','
          << row.fold << ',' << fixed6(row.arp) << ',' << fixed6(row.aplt)
          << ',' << fixed6(row.aclt) << ',' << fixed6(row.coverage_count)
          << ',' << fixed6(row.coverage_fraction) << ',' << fixed6(row.ndcg)
          << '\n';
    }
    return;
  }
  // Hand-rolled JSON keeps the 6-decimal number formatting byte-stable.
  out << "[\n";
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const EvalRow& row = report.rows[r];
    out << "  {\"algorithm\": \"" << to_string(row.algorithm)
        << "\", \"lambda\": " << fixed6(row.lambda) << ", \"fold\": \""
        << row.fold << "\", \"ARP\": " << fixed6(row.arp)
        << ", \"APLT\": " << fixed6(row.aplt)
        << ", \"ACLT\": " << fixed6(row.aclt)
        << ", \"coverage_count\": " << fixed6(row.coverage_count)
        << ", \"coverage_fraction\": " << fixed6(row.coverage_fraction)
        << ", \"NDCG\": " << fixed6(row.ndcg) << '}'
        << (r + 1 < report.rows.size() ? ",\n" : "\n");
  }
  out << "]\n";
}

void write_report(const EvalReport& report, const std::string& path,
                  ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report file: " + path);
  emit_report(report, out, format);
  if (!out) throw DataError("failed writing report file: " + path);
}

EvalReport parse_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open report file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  EvalReport report;
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw DataError("empty report file: " + path);

  if (text[first] == '[') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path + ": " + e.what());
    }
    for (const auto& item : doc) {
      EvalRow row;
      row.algorithm = algorithm_from_string(item.at("algorithm").get<std::string>());
      row.lambda = item.at("lambda").get<double>();
      row.fold = item.at("fold").get<std::string>();
      row.arp = item.at("ARP").get<double>();
      row.aplt = item.at("APLT").get<double>();
      row.aclt = item.at("ACLT").get<double>();
      row.coverage_count = item.at("coverage_count").get<double>();
      row.coverage_fraction = item.at("coverage_fraction").get<double>();
      row.ndcg = item.at("NDCG").get<double>();
      report.rows.push_back(std::move(row));
    }
    return report;
  }

  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("algorithm,", 0) == 0) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 9)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 9 columns");
    EvalRow row;
    row.algorithm = algorithm_from_string(fields[0]);
    row.lambda = parse_real(fields[1], "lambda");
    row.fold = fields[2];
    row.arp = parse_real(fields[3], "ARP");
    row.aplt = parse_real(fields[4], "APLT");
    row.aclt = parse_real(fields[5], "ACLT");
    row.coverage_count = parse_real(fields[6], "coverage_count");
    row.coverage_fraction = parse_real(fields[7], "coverage_fraction");
    row.ndcg = parse_real(fields[8], "NDCG");
    report.rows.push_back(std::move(row));
  }
  if (report.rows.empty()) throw DataError("no rows in report file: " + path);
  return report;
}

Figure2Fixture make_figure2_fixture() {
  // Four head items carry 80% of the mass; ten tail items split the rest in
  // two groups whose popularity fractions are exact binary values, so the
  // two systems' ARP values are equal without rounding slack.
  auto items = std::make_shared<Vocab>();
  std::vector<double> phi;
  std::vector<char> is_head;
  for (int h = 0; h < 4; ++h) {
    items->intern("h" + std::to_string(h));
    phi.push_back(1.0);
    is_head.push_back(1);
  }
  const double tail_phi[10] = {0.0625, 0.125,   0.25,    0.03125, 0.03125,
                               0.25,   0.0625,  0.09375, 0.03125, 0.0625};
  std::vector<ItemIndex> tail_items;
  for (int t = 0; t < 10; ++t) {
    tail_items.push_back(items->intern("t" + std::to_string(t)));
    phi.push_back(tail_phi[t]);
    is_head.push_back(0);
  }

  Figure2Fixture fixture;
  fixture.partition = PopularityPartition(std::move(phi), std::move(is_head),
                                          0.8, std::move(items));

  const std::vector<ItemIndex> first_five(tail_items.begin(),
                                          tail_items.begin() + 5);
  const std::vector<ItemIndex> last_five(tail_items.begin() + 5,
                                         tail_items.end());

  // System 1 shows both users the same five items; system 2 spreads ten
  // distinct items across the two users at the same total popularity.
  fixture.concentrated.lists[0] = first_five;
  fixture.concentrated.lists[1] = first_five;
  fixture.concentrated.test_users = {0, 1};
  fixture.dispersed.lists[0] = first_five;
  fixture.dispersed.lists[1] = last_five;
  fixture.dispersed.test_users = {0, 1};
  return fixture;
}

}  // namespace longtail
