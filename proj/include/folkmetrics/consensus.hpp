#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "folkmetrics/binning.hpp"
#include "folkmetrics/corpus.hpp"
#include "folkmetrics/partition.hpp"

namespace folkmetrics {

struct TagCount {
  TagId tag;
  std::uint32_t count = 0;

  friend bool operator==(const TagCount&, const TagCount&) = default;
};

// Distinct-user tag counts for one item within one group, sorted by tag.
struct TagDistribution {
  ItemId item;
  std::vector<TagCount> counts;
};

TagDistribution item_tag_distribution(const FolksonomyIndex& index, const Partition& partition, ItemId item,
                                      Group group);

// Most used tag; ties go to the lexicographically smallest. nullopt when empty.
std::optional<TagId> top_tag(const TagDistribution& dist);

// nullopt when the item is untagged by either group (not scored).
std::optional<bool> top_tag_match(const TagDistribution& supertaggers, const TagDistribution& others);
std::optional<double> item_cosine(const TagDistribution& supertaggers, const TagDistribution& others);

struct ConsensusSeries {
  BinnedSeries top_match;  // share of items whose top tags agree
  BinnedSeries cosine;
  std::size_t shared_items = 0;
};

// Scores every item tagged by both groups and bins by the item's total
// annotation count. Throws DomainError when no item is shared.
ConsensusSeries consensus_by_bin(const FolksonomyIndex& index, const Partition& partition, const BinSpec& spec);

}  // namespace folkmetrics
