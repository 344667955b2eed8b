#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "folkmetrics/binning.hpp"
#include "folkmetrics/corpus.hpp"
#include "folkmetrics/partition.hpp"

namespace folkmetrics {

enum class Dimension { tag, item };

std::string_view to_string(Dimension d);

struct KeyCount {
  std::uint32_t key = 0;  // tag or item handle
  std::uint64_t count = 0;

  friend bool operator==(const KeyCount&, const KeyCount&) = default;
};

// Annotation counts of one sub-folksonomy keyed by tag or item handle,
// sorted by key. Handles order lexicographically, so key order doubles as the
// deterministic tiebreak.
struct FreqDist {
  Dimension dimension = Dimension::tag;
  std::vector<KeyCount> counts;

  std::uint64_t total() const;
};

FreqDist freq_dist(const FolksonomyIndex& index, std::span<const UserId> users, Dimension dimension);

struct UsagePoint {
  std::uint64_t popularity = 0;  // total uses N of a key within the sub-folksonomy
  double proportion = 0.0;
};

// Non-cumulative: share of annotations on keys used exactly N times.
// Cumulative: share on keys used at least N times.
std::vector<UsagePoint> usage_distribution(const FreqDist& dist, bool cumulative);

// Rank correlation of the two top-N lists. Keys missing from one side's top N
// take rank N+1 there; within a side ties share average ranks.
double spearman_topn(const FreqDist& a, const FreqDist& b, std::size_t n);

// Cosine of raw counts over the union of the top-N lists; keys outside a
// side's top N count as 0 there.
double cosine_topn(const FreqDist& a, const FreqDist& b, std::size_t n);

struct SimilarityPoint {
  std::size_t n = 0;
  double rho = 0.0;  // NaN where the correlation is undefined
  double cosine = 0.0;
  double coverage = 0.0;
};

struct SimilarityCurve {
  std::vector<SimilarityPoint> points;
  std::size_t core_size = 0;  // smallest N with maximal rho; 0 if rho is never defined
};

// 1..100, then 20 points per decade up to max_n.
std::vector<std::size_t> default_n_grid(std::size_t max_n = 100000);

// Drops grid values past the first one that covers both distributions whole;
// every later point would repeat it.
std::vector<std::size_t> trim_n_grid(std::span<const std::size_t> grid, const FreqDist& a, const FreqDist& b);

SimilarityCurve similarity_curve(const FolksonomyIndex& index, const Partition& partition,
                                 Dimension dimension, std::span<const std::size_t> n_values);

struct ItemPopularity {
  ItemId item;
  double popularity = 0.0;
};

// Reads `<item><d><count>` lines; items unknown to the index are skipped.
std::vector<ItemPopularity> parse_popularity(std::istream& in, const FolksonomyIndex& index,
                                             char delimiter = '\t');

// Per popularity bin: mean over items of (supertagger annotations - other
// annotations) with its standard error.
BinnedSeries exogenous_popularity_diff(const FolksonomyIndex& index, const Partition& partition,
                                       std::span<const ItemPopularity> popularity, const BinSpec& bins);

}  // namespace folkmetrics
