#include "folkmetrics/motivation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "folkmetrics/errors.hpp"
#include "folkmetrics/parallel.hpp"

namespace folkmetrics {

MotivationScores motivation_scores(const FolksonomyIndex& index, UserId user, double orphan_divisor) {
  if (user.value >= index.user_count()) throw NotFoundError("unknown user handle");
  if (!(orphan_divisor > 0)) throw DomainError("orphan divisor must be > 0");

  // Distinct (tag, item) pairs, grouped by tag.
  std::vector<std::pair<TagId, ItemId>> pairs;
  std::vector<ItemId> items;
  for (auto p : index.positions(user)) {
    const auto& r = index.record(p);
    pairs.emplace_back(r.tag, r.item);
    items.push_back(r.item);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::sort(items.begin(), items.end());
  const auto posts = static_cast<double>(std::unique(items.begin(), items.end()) - items.begin());

  std::vector<std::size_t> usage;  // items per tag
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (k == 0 || pairs[k].first != pairs[k - 1].first) usage.push_back(0);
    ++usage.back();
  }
  const auto max_usage = *std::max_element(usage.begin(), usage.end());
  const double threshold = std::ceil(static_cast<double>(max_usage) / orphan_divisor);
  const auto orphans = std::count_if(usage.begin(), usage.end(),
                                     [&](std::size_t u) { return static_cast<double>(u) <= threshold; });

  MotivationScores s;
  s.user = user;
  s.tpp = static_cast<double>(pairs.size()) / posts;
  s.trr = static_cast<double>(usage.size()) / posts;
  s.orphan_ratio = static_cast<double>(orphans) / static_cast<double>(usage.size());
  return s;
}

namespace {

UserId require_user(const FolksonomyIndex& index, std::string_view user) {
  const auto id = index.find_user(user);
  if (!id) throw NotFoundError("unknown user: " + std::string(user));
  return *id;
}

}  // namespace

double tpp(const FolksonomyIndex& index, std::string_view user) {
  return motivation_scores(index, require_user(index, user)).tpp;
}

double trr(const FolksonomyIndex& index, std::string_view user) {
  return motivation_scores(index, require_user(index, user)).trr;
}

double orphan_ratio(const FolksonomyIndex& index, std::string_view user, double orphan_divisor) {
  return motivation_scores(index, require_user(index, user), orphan_divisor).orphan_ratio;
}

std::vector<MotivationScores> all_motivation_scores(const FolksonomyIndex& index, double orphan_divisor) {
  std::vector<MotivationScores> scores(index.user_count());
  parallel_for(index.user_count(), [&](std::size_t u) {
    scores[u] = motivation_scores(index, UserId(static_cast<std::uint32_t>(u)), orphan_divisor);
  });
  return scores;
}

MotivationSeries motivation_by_bin(const FolksonomyIndex& index, const BinSpec& spec, double orphan_divisor) {
  if (index.user_count() == 0) throw DomainError("motivation needs at least one tagging user");
  const auto scores = all_motivation_scores(index, orphan_divisor);
  std::vector<KeyedValue> tpps, trrs, ors;
  for (const auto& s : scores) {
    const double key = index.annotation_count(s.user);
    tpps.push_back(KeyedValue{key, s.tpp});
    trrs.push_back(KeyedValue{key, s.trr});
    ors.push_back(KeyedValue{key, s.orphan_ratio});
  }
  return MotivationSeries{binned_mean(tpps, spec), binned_mean(trrs, spec), binned_mean(ors, spec)};
}

}  // namespace folkmetrics
