#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "folkmetrics/corpus.hpp"

namespace folkmetrics {

// G = 2 sum(i * y_i) / (n sum(y)) - (n + 1) / n over y sorted non-decreasing,
// i from 1. Throws DomainError for empty, all-zero or negative input.
double gini(std::span<const double> values);

// Gini over per-user annotation counts (every indexed user has >= 1).
double user_gini(const FolksonomyIndex& index);

// Descending by annotation count, ties by identifier.
std::vector<UserId> rank_users(const FolksonomyIndex& index);

enum class Group : std::uint8_t { others = 0, supertaggers = 1 };

// Supertaggers are the shortest prefix of the ranked users whose annotations
// reach target_fraction of the total. Users tied at the threshold count are
// admitted in rank order only as far as needed.
struct Partition {
  std::vector<UserId> supertaggers;  // rank order
  std::vector<UserId> others;        // rank order
  std::uint32_t annotation_threshold = 0;
  double target_fraction = 0.5;
  std::uint64_t supertagger_annotations = 0;
  std::uint64_t total_annotations = 0;
  std::vector<Group> membership;  // indexed by user handle

  Group group_of(UserId u) const { return membership[u.value]; }
  bool is_supertagger(UserId u) const { return membership[u.value] == Group::supertaggers; }
};

Partition split_supertaggers(const FolksonomyIndex& index, double target_fraction = 0.5);

// Throws DomainError unless the partition covers exactly the index's users
// and annotation totals.
void check_partition(const FolksonomyIndex& index, const Partition& partition);

struct ParetoPoint {
  double users = 0.0;        // fraction of top-ranked users
  double annotations = 0.0;  // fraction of annotations they produced
};

// Cumulative annotation share after each ranked user, sampled at `resolution`
// points uniformly in rank space (or every rank when full is set). Always
// includes (0,0) and (1,1).
std::vector<ParetoPoint> pareto_curve(const FolksonomyIndex& index, std::size_t resolution = 101,
                                      bool full = false);

struct GroupSummary {
  std::size_t users = 0;
  std::uint64_t annotations = 0;
  std::size_t total_tags = 0;   // distinct tags used by the group
  std::size_t unique_tags = 0;  // used by this group only
  std::size_t total_items = 0;
  std::size_t unique_items = 0;
  CountSummary per_user_annotations;
  CountSummary per_user_tags;
  CountSummary per_user_items;
};

struct PartitionSummary {
  GroupSummary supertaggers;
  GroupSummary others;
  std::size_t shared_tags = 0;
  std::size_t shared_items = 0;
};

PartitionSummary partition_summary(const FolksonomyIndex& index, const Partition& partition);

}  // namespace folkmetrics
