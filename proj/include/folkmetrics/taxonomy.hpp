#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "folkmetrics/binning.hpp"
#include "folkmetrics/corpus.hpp"
#include "folkmetrics/user_score.hpp"

namespace folkmetrics {

// Co-occurrence of two tags over distinct items; first < second.
struct TagPair {
  TagId first;
  TagId second;
  std::uint32_t support = 0;
};

// Pairwise conditional probabilities P(A|B) = |items with A and B| / |items with B|
// over a chosen tag set. Per-tag arrays are indexed by tag handle.
struct ConditionalTable {
  std::size_t universe = 0;
  std::vector<TagId> tags;                // considered tags, ascending
  std::vector<std::uint32_t> item_count;  // items carrying each tag
  std::vector<std::uint64_t> frequency;   // global annotation count of each tag
  std::vector<TagPair> pairs;             // ascending by (first, second)

  std::uint32_t support(TagId a, TagId b) const;
  // P(a | b); 0 when the pair has no entry.
  double conditional(TagId a, TagId b) const;
};

// Only pairs with support >= min_support get an entry; self-pairs never do.
ConditionalTable conditional_table(const FolksonomyIndex& index, std::span<const TagId> tags,
                                   std::uint32_t min_support = 10);

// Forest of tags; arrays are indexed by tag handle.
struct TaxonomyForest {
  std::vector<TagId> nodes;         // every considered tag, ascending
  std::vector<TagId> disconnected;  // considered tags with no parent and no child
  std::vector<std::optional<TagId>> parent;
  std::vector<std::uint32_t> raw_depth;
  std::vector<double> norm_depth;
  std::vector<bool> connected;

  std::size_t edges() const;
  std::uint32_t max_raw_depth() const;
};

// B becomes a candidate child of A when P(A|B) >= threshold, P(B|A) < threshold
// and A is globally more frequent than B. Each child keeps the candidate with
// the highest P(A|B), then the more frequent one, then the smaller name. Depths
// are normalized by the deepest node of the same tree.
TaxonomyForest induce_forest(const ConditionalTable& table, double threshold = 0.8);

enum class DepthMode {
  annotation,  // mean over the user's annotations
  vocabulary,  // mean over the user's distinct tags
};

std::string_view to_string(DepthMode mode);

// Mean normalized depth of the user's connected tags; nullopt when the user
// never used a connected tag.
std::optional<double> user_depth_expertise(const FolksonomyIndex& index, const TaxonomyForest& forest, UserId user,
                                           DepthMode mode);

std::vector<UserScore> all_depth_expertise(const FolksonomyIndex& index, const TaxonomyForest& forest,
                                           DepthMode mode);

BinnedSeries depth_by_bin(const FolksonomyIndex& index, const TaxonomyForest& forest, const BinSpec& spec,
                          DepthMode mode);

// Share of annotations whose tag is connected in the forest.
double connected_coverage(const FolksonomyIndex& index, const TaxonomyForest& forest);

}  // namespace folkmetrics
