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

#include <iosfwd>
#include <string>
#include <vector>

#include "longtail/interactions.hpp"
#include "longtail/metrics.hpp"
#include "longtail/model.hpp"
#include "longtail/partition.hpp"
#include "longtail/rerank.hpp"

namespace longtail {

enum class Algorithm { base, binary_xquad, smooth_xquad, lt_reg };

const char* to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& token);

struct ExperimentConfig {
  std::string dataset_path;
  DatasetFormat format = DatasetFormat::tsv_triples;
  int folds = 5;
  double head_ratio = 0.8;
  int candidate_pool = 100;
  int list_size = 10;
  double relevance_threshold = 4.0;
  std::uint64_t seed = 7;
  FoldStrategy fold_strategy = FoldStrategy::interaction_shuffle;
  std::vector<Algorithm> algorithms = {Algorithm::base, Algorithm::binary_xquad,
                                       Algorithm::smooth_xquad, Algorithm::lt_reg};
  std::vector<double> lambda_grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  // Separate grid for the model-based algorithm; empty means reuse
  // lambda_grid.
  std::vector<double> lt_reg_lambda_grid;
  ScoreCombination combination = ScoreCombination::additive;
  double prior_smoothing = 0.0;
  std::string output_path;
  // Evaluate only the first n users of the vocabulary when positive.
  int sample_users = 0;
  TrainConfig trainer;
};

/// Flat `key value` config file; '#' starts a comment. Unknown keys are
/// errors, every key is optional.
ExperimentConfig parse_config_file(const std::string& path);

struct EvalRow {
  Algorithm algorithm = Algorithm::base;
  double lambda = 0.0;
  // Fold id as text; per-fold rows use "0".."k-1", aggregates "mean"/"std".
  std::string fold;
  double arp = 0.0;
  double aplt = 0.0;
  double aclt = 0.0;
  // Integral on per-fold rows, fractional on aggregate rows.
  double coverage_count = 0.0;
  double coverage_fraction = 0.0;
  double ndcg = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
};

/// Full protocol: k folds, per-fold training, candidate generation, each
/// algorithm across its lambda grid (base is pinned to lambda 0), metrics on
/// the held out fold, then mean and sample std aggregate rows.
EvalReport run_experiment(const ExperimentConfig& cfg);

/// Same but on an already loaded dataset, for tests.
EvalReport run_experiment_on(const InteractionDataset& data,
                             const ExperimentConfig& cfg);

enum class ReportFormat { csv, json };

/// Fixed 6-decimal numeric formatting so equal runs emit equal bytes in
/// either format.
void emit_report(const EvalReport& report, std::ostream& out,
                 ReportFormat format = ReportFormat::csv);
void write_report(const EvalReport& report, const std::string& path,
                  ReportFormat format = ReportFormat::csv);
/// Reads either format back, sniffing JSON by a leading '['.
EvalReport parse_report(const std::string& path);

/// Two same-length lists over one partition with equal ARP and APLT but
/// different distinct tail coverage, the coverage contrast fixture.
struct Figure2Fixture {
  PopularityPartition partition;
  RecommendationBatch concentrated;
  RecommendationBatch dispersed;
};

Figure2Fixture make_figure2_fixture();

}  // namespace longtail
