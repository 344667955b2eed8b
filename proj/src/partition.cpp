#include "folkmetrics/partition.hpp"

#include <algorithm>
#include <cmath>

#include "folkmetrics/errors.hpp"

namespace folkmetrics {

double gini(std::span<const double> values) {
  if (values.empty()) throw DomainError("gini of an empty sequence");
  std::vector<double> y(values.begin(), values.end());
  std::sort(y.begin(), y.end());
  if (y.front() < 0) throw DomainError("gini requires non-negative values");
  long double weighted = 0, total = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    weighted += static_cast<long double>(i + 1) * y[i];
    total += y[i];
  }
  if (total == 0) throw DomainError("gini of an all-zero sequence");
  const long double n = y.size();
  const long double g = 2 * weighted / (n * total) - (n + 1) / n;
  // Perfect equality is exactly zero; rounding can land a hair below.
  return static_cast<double>(std::max<long double>(g, 0));
}

double user_gini(const FolksonomyIndex& index) {
  std::vector<double> counts;
  counts.reserve(index.user_count());
  for (std::uint32_t u = 0; u < index.user_count(); ++u) counts.push_back(index.annotation_count(UserId(u)));
  return gini(counts);
}

std::vector<UserId> rank_users(const FolksonomyIndex& index) {
  std::vector<UserId> users(index.user_count());
  for (std::uint32_t u = 0; u < users.size(); ++u) users[u] = UserId(u);
  std::stable_sort(users.begin(), users.end(), [&](UserId a, UserId b) {
    return index.annotation_count(a) > index.annotation_count(b);
  });
  return users;
}

Partition split_supertaggers(const FolksonomyIndex& index, double target_fraction) {
  if (!(target_fraction > 0.0 && target_fraction <= 1.0))
    throw DomainError("target fraction must lie in (0, 1]");
  if (index.empty()) throw DomainError("cannot partition an empty index");

  Partition p;
  p.target_fraction = target_fraction;
  p.total_annotations = index.size();
  p.membership.assign(index.user_count(), Group::others);

  const auto ranked = rank_users(index);
  // Rounding the product to double absorbs the representation error of
  // decimal fractions such as 0.9.
  const double target = target_fraction * static_cast<double>(p.total_annotations);
  std::size_t cut = 0;
  while (cut < ranked.size() && static_cast<double>(p.supertagger_annotations) < target) {
    p.supertagger_annotations += index.annotation_count(ranked[cut]);
    ++cut;
  }
  p.supertaggers.assign(ranked.begin(), ranked.begin() + cut);
  p.others.assign(ranked.begin() + cut, ranked.end());
  for (auto u : p.supertaggers) p.membership[u.value] = Group::supertaggers;
  p.annotation_threshold = index.annotation_count(p.supertaggers.back());
  return p;
}

void check_partition(const FolksonomyIndex& index, const Partition& p) {
  if (p.membership.size() != index.user_count() ||
      p.supertaggers.size() + p.others.size() != index.user_count() ||
      p.total_annotations != index.size())
    throw DomainError("partition does not belong to this index");
  std::uint64_t s_total = 0;
  for (auto u : p.supertaggers) {
    if (u.value >= index.user_count() || !p.is_supertagger(u)) throw DomainError("inconsistent partition");
    s_total += index.annotation_count(u);
  }
  for (auto u : p.others) {
    if (u.value >= index.user_count() || p.is_supertagger(u)) throw DomainError("inconsistent partition");
  }
  if (s_total != p.supertagger_annotations) throw DomainError("partition does not belong to this index");
}

std::vector<ParetoPoint> pareto_curve(const FolksonomyIndex& index, std::size_t resolution, bool full) {
  if (index.empty()) throw DomainError("pareto curve of an empty index");
  const auto ranked = rank_users(index);
  const std::size_t n = ranked.size();
  std::vector<std::uint64_t> cumulative(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) cumulative[k + 1] = cumulative[k] + index.annotation_count(ranked[k]);
  const auto total = static_cast<double>(cumulative[n]);

  std::vector<std::size_t> ranks;
  if (full || resolution < 2 || resolution >= n + 1) {
    for (std::size_t k = 0; k <= n; ++k) ranks.push_back(k);
  } else {
    for (std::size_t j = 0; j < resolution; ++j) {
      const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(j) * n / (resolution - 1)));
      if (ranks.empty() || ranks.back() != k) ranks.push_back(k);
    }
  }

  std::vector<ParetoPoint> curve;
  curve.reserve(ranks.size());
  for (auto k : ranks) {
    curve.push_back(ParetoPoint{static_cast<double>(k) / n, static_cast<double>(cumulative[k]) / total});
  }
  curve.back() = ParetoPoint{1.0, 1.0};
  return curve;
}

namespace {

std::size_t count_flags(const std::vector<std::uint8_t>& used, std::uint8_t mask) {
  return static_cast<std::size_t>(
      std::count_if(used.begin(), used.end(), [&](std::uint8_t f) { return (f & mask) == mask; }));
}

GroupSummary summarize_group(const FolksonomyIndex& index, const std::vector<UserId>& users) {
  GroupSummary g;
  g.users = users.size();
  std::vector<std::uint64_t> annotations, tags, items;
  for (auto u : users) {
    const auto s = user_stats(index, u);
    g.annotations += s.annotations;
    annotations.push_back(s.annotations);
    tags.push_back(s.distinct_tags);
    items.push_back(s.distinct_items);
  }
  g.per_user_annotations = summarize_counts(std::move(annotations));
  g.per_user_tags = summarize_counts(std::move(tags));
  g.per_user_items = summarize_counts(std::move(items));
  return g;
}

}  // namespace

PartitionSummary partition_summary(const FolksonomyIndex& index, const Partition& partition) {
  check_partition(index, partition);
  // Bit 1: used by supertaggers, bit 2: used by others.
  std::vector<std::uint8_t> tag_use(index.tag_count(), 0);
  std::vector<std::uint8_t> item_use(index.item_count(), 0);
  for (const auto& r : index.records()) {
    const std::uint8_t bit = partition.is_supertagger(r.user) ? 1 : 2;
    tag_use[r.tag.value] |= bit;
    item_use[r.item.value] |= bit;
  }

  PartitionSummary out;
  out.supertaggers = summarize_group(index, partition.supertaggers);
  out.others = summarize_group(index, partition.others);
  out.shared_tags = count_flags(tag_use, 3);
  out.shared_items = count_flags(item_use, 3);
  out.supertaggers.total_tags = count_flags(tag_use, 1);
  out.others.total_tags = count_flags(tag_use, 2);
  out.supertaggers.unique_tags = out.supertaggers.total_tags - out.shared_tags;
  out.others.unique_tags = out.others.total_tags - out.shared_tags;
  out.supertaggers.total_items = count_flags(item_use, 1);
  out.others.total_items = count_flags(item_use, 2);
  out.supertaggers.unique_items = out.supertaggers.total_items - out.shared_items;
  out.others.unique_items = out.others.total_items - out.shared_items;
  return out;
}

}  // namespace folkmetrics
