#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "folkmetrics/binning.hpp"
#include "folkmetrics/corpus.hpp"
#include "folkmetrics/user_score.hpp"

namespace folkmetrics {

// The top_k most annotated tags (ties by name) that at least min_users
// distinct users applied. Returned in handle order.
std::vector<TagId> eligible_tags(const FolksonomyIndex& index, std::size_t top_k = 10000,
                                 std::size_t min_users = 10);

// Sparse user x item credit matrix for one tag, rows by user. The entry for
// (u, i) is (1 + number of users who tagged i strictly later than u)^exponent,
// using each user's earliest (u, i, tag) timestamp.
struct CreditMatrix {
  TagId tag;
  std::vector<UserId> users;  // row order, ascending
  std::vector<ItemId> items;  // column order, ascending
  std::vector<std::uint32_t> row_offsets;  // users.size() + 1
  std::vector<std::uint32_t> columns;      // local item column per entry
  std::vector<double> credits;

  std::size_t entries() const { return credits.size(); }
  // 0 when the user did not tag the item.
  double credit(UserId user, ItemId item) const;
};

CreditMatrix credit_matrix(const FolksonomyIndex& index, TagId tag, double exponent = 0.5);
CreditMatrix credit_matrix(const FolksonomyIndex& index, std::string_view tag, double exponent = 0.5);

struct SpearResult {
  TagId tag;
  std::vector<UserId> users;
  std::vector<double> user_scores;  // L1-normalized, parallel to users
  std::vector<ItemId> items;
  std::vector<double> item_scores;  // L1-normalized, parallel to items
  std::size_t iterations = 0;
  bool converged = false;

  double score(UserId user) const;
};

// Mutual reinforcement: expertise <- C * quality, quality <- C^T * expertise,
// each L1-normalized after its update, starting from uniform vectors. Stops
// once no user score moves by tolerance or more, or after max_iter rounds.
SpearResult spear_scores(const CreditMatrix& credit, double tolerance = 1e-8, std::size_t max_iter = 250);

// z-scores each tag's user scores (population deviation; zero-variance tags
// give 0) and averages them per user without weighting. Sorted by user.
std::vector<UserScore> standardize_and_average(std::span<const SpearResult> results);

struct SpearOptions {
  std::size_t top_k = 10000;
  std::size_t min_users = 10;
  double exponent = 0.5;
  double tolerance = 1e-8;
  std::size_t max_iter = 250;
};

struct SpearRun {
  std::vector<SpearResult> per_tag;
  std::vector<UserScore> user_means;
  std::size_t unconverged_tags = 0;
};

// Scores every eligible tag over the whole folksonomy. Throws DomainError when
// no tag is eligible.
SpearRun run_spear(const FolksonomyIndex& index, const SpearOptions& options = {});

BinnedSeries spear_by_bin(const FolksonomyIndex& index, const BinSpec& spec, const SpearOptions& options = {});
BinnedSeries spear_by_bin(const FolksonomyIndex& index, const SpearRun& run, const BinSpec& spec);

}  // namespace folkmetrics
