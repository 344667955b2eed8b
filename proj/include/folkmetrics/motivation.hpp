#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "folkmetrics/binning.hpp"
#include "folkmetrics/corpus.hpp"

namespace folkmetrics {

// Categorizer/describer measures of one user. A post is a distinct
// (user, item) pair; repeated tagging of the same item merges into it.
struct MotivationScores {
  UserId user;
  double tpp = 0.0;           // distinct (item, tag) pairs per post
  double trr = 0.0;           // vocabulary size per tagged item
  double orphan_ratio = 0.0;  // share of the vocabulary that is orphaned
};

// A tag is an orphan when the user put it on at most
// ceil(max per-tag item count / orphan_divisor) items.
MotivationScores motivation_scores(const FolksonomyIndex& index, UserId user, double orphan_divisor = 100.0);

double tpp(const FolksonomyIndex& index, std::string_view user);
double trr(const FolksonomyIndex& index, std::string_view user);
double orphan_ratio(const FolksonomyIndex& index, std::string_view user, double orphan_divisor = 100.0);

// Scores for every user, in handle order.
std::vector<MotivationScores> all_motivation_scores(const FolksonomyIndex& index, double orphan_divisor = 100.0);

struct MotivationSeries {
  BinnedSeries tpp;
  BinnedSeries trr;
  BinnedSeries orphan_ratio;
};

// Keyed by each user's total annotation count.
MotivationSeries motivation_by_bin(const FolksonomyIndex& index, const BinSpec& spec, double orphan_divisor = 100.0);

}  // namespace folkmetrics
