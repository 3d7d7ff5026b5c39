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

// Command line front end. Exit codes: 0 success, 1 usage error, 2 data or
// parse error, 3 training divergence.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "longtail/errors.hpp"
#include "longtail/harness.hpp"
#include "longtail/interactions.hpp"
#include "longtail/metrics.hpp"
#include "longtail/model.hpp"
#include "longtail/partition.hpp"
#include "longtail/ranked_list.hpp"
#include "longtail/rerank.hpp"

namespace {

using namespace longtail;

int cmd_run(const std::string& config_path, const std::string& out_override,
            int sample_users_override, const std::string& format_name) {
  ExperimentConfig cfg = parse_config_file(config_path);
  if (!out_override.empty()) cfg.output_path = out_override;
  if (sample_users_override >= 0) cfg.sample_users = sample_users_override;
  const ReportFormat format =
      format_name == "json" ? ReportFormat::json : ReportFormat::csv;

  const EvalReport report = run_experiment(cfg);
  if (cfg.output_path.empty()) {
    emit_report(report, std::cout, format);
  } else {
    write_report(report, cfg.output_path, format);
    std::fprintf(stderr, "wrote %zu rows to %s\n", report.rows.size(),
                 cfg.output_path.c_str());
  }
  return 0;
}

int cmd_partition(const std::string& input, const std::string& format_name,
                  double head_ratio, const std::string& out) {
  const DatasetFormat format = dataset_format_from_string(format_name);
  const InteractionDataset data = load_interactions(input, format);
  const PopularityPartition partition =
      build_popularity_partition(data, head_ratio);
  write_partition_csv(partition, out);
  std::fprintf(stderr, "%d items: %lld head, %lld tail\n", partition.num_items(),
               static_cast<long long>(partition.short_head_size()),
               static_cast<long long>(partition.long_tail_size()));
  return 0;
}

int cmd_rerank(const std::string& candidates_path,
               const std::string& partition_path, double lambda,
               const std::string& variant_name, int n, const std::string& out,
               const std::string& train_path, const std::string& format_name,
               double smoothing, bool convex) {
  const XquadVariant variant = variant_name == "smooth" ? XquadVariant::smooth
                                                        : XquadVariant::binary;
  LoadedLists loaded = read_lists_csv(candidates_path);
  PopularityPartition partition =
      align_partition(read_partition_csv(partition_path), loaded.items);

  // Priors come from a training file when given; otherwise every user gets
  // the uniform prior.
  std::vector<CategoryPrior> priors(static_cast<std::size_t>(loaded.users->size()),
                                    CategoryPrior{0.5, 0.5});
  if (!train_path.empty()) {
    const DatasetFormat format = dataset_format_from_string(format_name);
    const InteractionDataset train = load_interactions(train_path, format);
    std::vector<std::vector<ItemIndex>> profiles(
        static_cast<std::size_t>(loaded.users->size()));
    for (const Interaction& x : train.interactions()) {
      const auto u = loaded.users->find(train.users().id(x.user));
      if (!u) continue;
      const auto i = loaded.items->find(train.items().id(x.item));
      if (!i) continue;
      profiles[static_cast<std::size_t>(*u)].push_back(*i);
    }
    for (std::size_t u = 0; u < profiles.size(); ++u)
      if (!profiles[u].empty())
        priors[u] = category_prior(profiles[u], partition, smoothing);
  }

  XquadConfig cfg;
  cfg.lambda = lambda;
  cfg.variant = variant;
  cfg.combination = convex ? ScoreCombination::convex : ScoreCombination::additive;
  cfg.n = n;

  std::vector<RankedList> reranked;
  reranked.reserve(loaded.lists.size());
  for (RankedList& list : loaded.lists) {
    normalize_scores(&list);
    reranked.push_back(xquad_rerank(list, partition,
                                    priors[static_cast<std::size_t>(list.user)],
                                    cfg));
  }
  write_lists_csv(reranked, *loaded.users, *loaded.items, out, true);
  std::fprintf(stderr, "re-ranked %zu lists\n", reranked.size());
  return 0;
}

int cmd_metrics(const std::string& lists_path, const std::string& partition_path,
                const std::string& test_path, const std::string& out,
                const std::string& train_path, const std::string& format_name,
                double tau, const std::string& algorithm_name, double lambda,
                const std::string& fold) {
  LoadedLists loaded = read_lists_csv(lists_path);
  PopularityPartition partition =
      align_partition(read_partition_csv(partition_path), loaded.items);

  const DatasetFormat format = dataset_format_from_string(format_name);
  if (!train_path.empty()) {
    // Re-count phi from the training file so ARP reports real popularity
    // instead of zeros.
    const InteractionDataset train = load_interactions(train_path, format);
    partition = align_partition(with_training_counts(partition, train),
                                loaded.items);
  }

  const InteractionDataset test = load_interactions(test_path, format);
  RelevanceJudgments judgments;
  for (const Interaction& x : test.interactions()) {
    if (x.rating < tau) continue;
    const auto u = loaded.users->find(test.users().id(x.user));
    if (!u) continue;
    const auto i = loaded.items->find(test.items().id(x.item));
    if (!i) continue;
    judgments.relevant[*u].insert(*i);
  }

  const RecommendationBatch batch =
      RecommendationBatch::from_lists(loaded.lists);
  const int n = static_cast<int>(batch.common_length());
  if (n == 0) throw DataError("lists are empty");

  EvalRow row;
  row.algorithm = algorithm_from_string(algorithm_name);
  row.lambda = lambda;
  row.fold = fold;
  row.arp = arp(batch, partition);
  row.aplt = aplt(batch, partition);
  row.aclt = aclt(batch, partition);
  const CoverageResult coverage = distinct_long_tail_coverage(batch, partition);
  row.coverage_count = static_cast<double>(coverage.distinct_count);
  row.coverage_fraction = coverage.fraction;
  row.ndcg = ndcg(batch, judgments, n);

  const EvalReport report{{row}};
  if (out.empty())
    emit_report(report, std::cout, ReportFormat::csv);
  else
    write_report(report, out, ReportFormat::csv);
  return 0;
}

int cmd_fixture(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Figure2Fixture fixture = make_figure2_fixture();
  write_partition_csv(fixture.partition,
                      (std::filesystem::path(out_dir) / "partition.csv").string());

  const Vocab& items = *fixture.partition.item_vocab();
  auto write_batch = [&](const RecommendationBatch& batch,
                         const std::string& name) {
    std::vector<RankedList> lists;
    for (const auto& [user, list] : batch.lists) {
      RankedList ranked;
      ranked.user = user;
      for (ItemIndex i : list) ranked.entries.push_back(ScoredItem{i, 0.0});
      lists.push_back(std::move(ranked));
    }
    Vocab users;
    for (const auto& [user, list] : batch.lists)
      users.intern("u" + std::to_string(user));
    write_lists_csv(lists, users, items,
                    (std::filesystem::path(out_dir) / name).string(), false);
  };
  write_batch(fixture.concentrated, "system1_lists.csv");
  write_batch(fixture.dispersed, "system2_lists.csv");

  std::ofstream summary(std::filesystem::path(out_dir) / "summary.csv");
  if (!summary) throw DataError("cannot write fixture summary");
  summary << "system,ARP,APLT,ACLT,coverage_count,coverage_fraction\n";
  char buffer[256];
  const auto emit = [&](const char* name, const RecommendationBatch& batch) {
    const CoverageResult coverage =
        distinct_long_tail_coverage(batch, fixture.partition);
    std::snprintf(buffer, sizeof(buffer), "%s,%.6f,%.6f,%.6f,%lld,%.6f\n", name,
                  arp(batch, fixture.partition), aplt(batch, fixture.partition),
                  aclt(batch, fixture.partition),
                  static_cast<long long>(coverage.distinct_count),
                  coverage.fraction);
    summary << buffer;
  };
  emit("system1", fixture.concentrated);
  emit("system2", fixture.dispersed);
  std::fprintf(stderr, "wrote fixture files to %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Popularity-bias control toolkit: training, re-ranking, and "
               "evaluation for long-tail recommendation"};
  app.require_subcommand(1);

  std::string run_config, run_out, run_format = "csv";
  int run_sample_users = -1;
  CLI::App* run = app.add_subcommand("run", "Run a full experiment from a config");
  run->add_option("--config", run_config, "Experiment config file")->required();
  run->add_option("--out", run_out, "Report path (overrides config `output`)");
  run->add_option("--sample-users", run_sample_users,
                  "Evaluate only the first N users");
  run->add_option("--report-format", run_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string part_input, part_out, part_format = "tsv";
  double part_ratio = 0.8;
  CLI::App* part =
      app.add_subcommand("partition", "Build the head/tail popularity partition");
  part->add_option("--input", part_input, "Training interactions")->required();
  part->add_option("--head-ratio", part_ratio, "Share of ratings in the head");
  part->add_option("--out", part_out, "Partition CSV path")->required();
  part->add_option("--format", part_format, "tsv, csv, or movielens100k");

  std::string rr_candidates, rr_partition, rr_out, rr_train;
  std::string rr_variant = "binary", rr_format = "tsv";
  double rr_lambda = 0.0, rr_smoothing = 0.0;
  int rr_n = 10;
  bool rr_convex = false;
  CLI::App* rerank_cmd =
      app.add_subcommand("rerank", "Re-rank candidate lists with xQuAD");
  rerank_cmd->add_option("--candidates", rr_candidates, "Candidate lists CSV")
      ->required();
  rerank_cmd->add_option("--partition", rr_partition, "Partition CSV")->required();
  rerank_cmd->add_option("--lambda", rr_lambda, "Diversification weight");
  rerank_cmd->add_option("--variant", rr_variant, "binary or smooth")
      ->check(CLI::IsMember({"binary", "smooth"}));
  rerank_cmd->add_option("--n", rr_n, "Output list length");
  rerank_cmd->add_option("--out", rr_out, "Re-ranked lists CSV")->required();
  rerank_cmd->add_option("--train", rr_train,
                         "Training interactions for per-user priors");
  rerank_cmd->add_option("--format", rr_format, "Training file format");
  rerank_cmd->add_option("--smoothing", rr_smoothing, "Prior smoothing");
  rerank_cmd->add_flag("--convex", rr_convex,
                       "Use the convex combination instead of the additive form");

  std::string m_lists, m_partition, m_test, m_out, m_train;
  std::string m_format = "tsv", m_algorithm = "base", m_fold = "0";
  double m_tau = 4.0, m_lambda = 0.0;
  CLI::App* metrics_cmd =
      app.add_subcommand("metrics", "Evaluate recommendation lists");
  metrics_cmd->add_option("--lists", m_lists, "Recommendation lists CSV")
      ->required();
  metrics_cmd->add_option("--partition", m_partition, "Partition CSV")->required();
  metrics_cmd->add_option("--test", m_test, "Held-out interactions")->required();
  metrics_cmd->add_option("--out", m_out, "Report CSV path (stdout if absent)");
  metrics_cmd->add_option("--train", m_train,
                          "Training interactions for popularity counts");
  metrics_cmd->add_option("--format", m_format, "Interaction file format");
  metrics_cmd->add_option("--tau", m_tau, "Relevance threshold");
  metrics_cmd->add_option("--algorithm", m_algorithm, "Label for the report row");
  metrics_cmd->add_option("--lambda", m_lambda, "Label for the report row");
  metrics_cmd->add_option("--fold", m_fold, "Label for the report row");

  std::string fix_out;
  CLI::App* fixture_cmd = app.add_subcommand(
      "fixture-figure2", "Write the coverage-contrast fixture files");
  fixture_cmd->add_option("--out", fix_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed())
      return cmd_run(run_config, run_out, run_sample_users, run_format);
    if (part->parsed())
      return cmd_partition(part_input, part_format, part_ratio, part_out);
    if (rerank_cmd->parsed())
      return cmd_rerank(rr_candidates, rr_partition, rr_lambda, rr_variant, rr_n,
                        rr_out, rr_train, rr_format, rr_smoothing, rr_convex);
    if (metrics_cmd->parsed())
      return cmd_metrics(m_lists, m_partition, m_test, m_out, m_train, m_format,
                         m_tau, m_algorithm, m_lambda, m_fold);
    if (fixture_cmd->parsed()) return cmd_fixture(fix_out);
  } catch (const TrainingError& e) {
    std::fprintf(stderr, "error: %s (epoch %d)\n", e.what(), e.epoch());
    return 3;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
