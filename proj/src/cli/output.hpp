#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "folkmetrics/binning.hpp"
#include "folkmetrics/consensus.hpp"
#include "folkmetrics/corpus.hpp"
#include "folkmetrics/motivation.hpp"
#include "folkmetrics/partition.hpp"
#include "folkmetrics/similarity.hpp"
#include "folkmetrics/taxonomy.hpp"
#include "folkmetrics/user_score.hpp"

namespace folkmetrics::cli {

// Shortest round-trip text for a double; "nan" / "inf" for non-finite values.
std::string format_number(double value);

// An output destination: a file path, or the fallback stream when the path is
// empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback);
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void write_binned_csv(std::ostream& out, const BinnedSeries& series);
void write_exo_csv(std::ostream& out, const BinnedSeries& series);
void write_consensus_csv(std::ostream& out, const ConsensusSeries& series);
void write_motivation_binned_csv(std::ostream& out, const MotivationSeries& series);
void write_motivation_per_user_csv(std::ostream& out, const FolksonomyIndex& index,
                                   std::span<const MotivationScores> scores);
void write_user_scores_csv(std::ostream& out, const FolksonomyIndex& index, std::span<const UserScore> scores);
void write_similarity_csv(std::ostream& out, const SimilarityCurve& curve);
void write_usage_csv(std::ostream& out, std::span<const UsagePoint> supertaggers, std::span<const UsagePoint> others);
void write_pareto_csv(std::ostream& out, std::span<const ParetoPoint> curve);
void write_partition_summary_csv(std::ostream& out, const PartitionSummary& summary);

// Partition as JSON. With users_dir set, user lists go to
// users_dir/supertaggers.txt and users_dir/others.txt instead of inline arrays.
void write_partition_json(std::ostream& out, const FolksonomyIndex& index, const Partition& partition,
                          double gini_value, const std::filesystem::path& users_dir = {});

void write_summary_json(std::ostream& out, const DatasetSummary& summary, const IngestStats& ingest, double gini_value);

void write_forest_json(std::ostream& out, const FolksonomyIndex& index, const TaxonomyForest& forest, double threshold,
                       std::uint32_t min_support, double coverage);

}  // namespace folkmetrics::cli
