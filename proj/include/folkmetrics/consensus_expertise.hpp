#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "folkmetrics/binning.hpp"
#include "folkmetrics/corpus.hpp"
#include "folkmetrics/user_score.hpp"

namespace folkmetrics {

// How F(t, i), the frequency of tag t on item i, is counted.
enum class FrequencyMode {
  distinct_users,   // users who applied t to i
  raw_annotations,  // every annotation, for sensitivity checks
};

// Agreement of one annotation with the item's consensus: 1 when t is (one of)
// the item's most frequent tags, otherwise (F(t,i) - 1) / max_x F(x,i). The
// scoring user is removed from the numerator only.
double annotation_score(const FolksonomyIndex& index, UserId user, ItemId item, TagId tag,
                        FrequencyMode mode = FrequencyMode::distinct_users);
double annotation_score(const FolksonomyIndex& index, std::string_view user, std::string_view item,
                        std::string_view tag, FrequencyMode mode = FrequencyMode::distinct_users);

// log10(sum_t F(t,i) - F(u,i)), where F(u,i) is the user's own contribution to
// the item. Arguments <= 1 weigh 0; nullopt when nobody else tagged the item,
// which removes it from the user's mean.
std::optional<double> annotation_weight(const FolksonomyIndex& index, UserId user, ItemId item,
                                        FrequencyMode mode = FrequencyMode::distinct_users);

// Weighted mean over the user's items of the best annotation score on each
// item. nullopt when every item is excluded or all weights are 0.
std::optional<double> user_consensus_expertise(const FolksonomyIndex& index, UserId user,
                                               FrequencyMode mode = FrequencyMode::distinct_users);

// Every scoreable user, in handle order.
std::vector<UserScore> all_consensus_expertise(const FolksonomyIndex& index,
                                               FrequencyMode mode = FrequencyMode::distinct_users);

// Keyed by each user's total annotation count; users without a score are left out.
BinnedSeries consensus_expertise_by_bin(const FolksonomyIndex& index, const BinSpec& spec,
                                        FrequencyMode mode = FrequencyMode::distinct_users);

}  // namespace folkmetrics
