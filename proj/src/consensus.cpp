#include "folkmetrics/consensus.hpp"

#include <algorithm>

#include "folkmetrics/errors.hpp"
#include "folkmetrics/parallel.hpp"
#include "folkmetrics/stats.hpp"

namespace folkmetrics {

TagDistribution item_tag_distribution(const FolksonomyIndex& index, const Partition& partition, ItemId item,
                                      Group group) {
  std::vector<std::pair<TagId, UserId>> pairs;
  for (auto p : index.positions(item)) {
    const auto& r = index.record(p);
    if (partition.group_of(r.user) == group) pairs.emplace_back(r.tag, r.user);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  TagDistribution dist{item, {}};
  for (const auto& [tag, user] : pairs) {
    if (dist.counts.empty() || dist.counts.back().tag != tag) dist.counts.push_back(TagCount{tag, 0});
    ++dist.counts.back().count;
  }
  return dist;
}

std::optional<TagId> top_tag(const TagDistribution& dist) {
  if (dist.counts.empty()) return std::nullopt;
  // max_element keeps the first maximum, and counts are sorted by tag.
  return std::max_element(dist.counts.begin(), dist.counts.end(),
                          [](const TagCount& a, const TagCount& b) { return a.count < b.count; })
      ->tag;
}

std::optional<bool> top_tag_match(const TagDistribution& s, const TagDistribution& o) {
  const auto a = top_tag(s);
  const auto b = top_tag(o);
  if (!a || !b) return std::nullopt;
  return *a == *b;
}

std::optional<double> item_cosine(const TagDistribution& s, const TagDistribution& o) {
  if (s.counts.empty() || o.counts.empty()) return std::nullopt;
  std::vector<double> x, y;
  std::size_t i = 0, j = 0;
  while (i < s.counts.size() || j < o.counts.size()) {
    if (j == o.counts.size() || (i < s.counts.size() && s.counts[i].tag < o.counts[j].tag)) {
      x.push_back(s.counts[i++].count);
      y.push_back(0);
    } else if (i == s.counts.size() || o.counts[j].tag < s.counts[i].tag) {
      x.push_back(0);
      y.push_back(o.counts[j++].count);
    } else {
      x.push_back(s.counts[i++].count);
      y.push_back(o.counts[j++].count);
    }
  }
  return cosine(x, y);
}

ConsensusSeries consensus_by_bin(const FolksonomyIndex& index, const Partition& partition, const BinSpec& spec) {
  check_partition(index, partition);
  struct Score {
    bool shared = false;
    double match = 0;
    double cosine = 0;
  };
  std::vector<Score> scores(index.item_count());
  parallel_for(index.item_count(), [&](std::size_t i) {
    const ItemId item(static_cast<std::uint32_t>(i));
    const auto s = item_tag_distribution(index, partition, item, Group::supertaggers);
    const auto o = item_tag_distribution(index, partition, item, Group::others);
    const auto match = top_tag_match(s, o);
    if (!match) return;
    scores[i] = Score{true, *match ? 1.0 : 0.0, *item_cosine(s, o)};
  });

  std::vector<KeyedValue> matches, cosines;
  for (std::uint32_t i = 0; i < scores.size(); ++i) {
    if (!scores[i].shared) continue;
    const double key = index.annotation_count(ItemId(i));
    matches.push_back(KeyedValue{key, scores[i].match});
    cosines.push_back(KeyedValue{key, scores[i].cosine});
  }
  if (matches.empty()) throw DomainError("no item is tagged by both groups");

  ConsensusSeries out;
  out.top_match = binned_mean(matches, spec);
  out.cosine = binned_mean(cosines, spec);
  out.shared_items = matches.size();
  return out;
}

}  // namespace folkmetrics
