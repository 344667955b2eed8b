#include "folkmetrics/consensus_expertise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "folkmetrics/errors.hpp"
#include "folkmetrics/parallel.hpp"

namespace folkmetrics {
namespace {

std::uint32_t frequency(const TagFrequency& f, FrequencyMode mode) {
  return mode == FrequencyMode::distinct_users ? f.users : f.annotations;
}

struct ItemTotals {
  std::uint32_t max = 0;  // max_x F(x, i)
  std::uint64_t sum = 0;  // sum_t F(t, i)
};

ItemTotals item_totals(const FolksonomyIndex& index, ItemId item, FrequencyMode mode) {
  ItemTotals t;
  for (const auto& f : index.item_tags(item)) {
    t.max = std::max(t.max, frequency(f, mode));
    t.sum += frequency(f, mode);
  }
  return t;
}

std::uint32_t tag_frequency(const FolksonomyIndex& index, ItemId item, TagId tag, FrequencyMode mode) {
  const auto row = index.item_tags(item);
  const auto it = std::lower_bound(row.begin(), row.end(), tag,
                                   [](const TagFrequency& f, TagId t) { return f.tag < t; });
  return it != row.end() && it->tag == tag ? frequency(*it, mode) : 0;
}

double score_from(std::uint32_t f, std::uint32_t max) {
  if (f >= max) return 1.0;
  return static_cast<double>(f - 1) / static_cast<double>(max);
}

std::optional<double> weight_from(std::uint64_t total, std::uint64_t own) {
  const std::uint64_t others = total - own;
  if (others == 0) return std::nullopt;
  if (others <= 1) return 0.0;
  return std::log10(static_cast<double>(others));
}

// The user's records grouped per item: (item, tag) pairs with raw multiplicity.
struct UserItemTags {
  ItemId item;
  TagId tag;
  std::uint32_t raw = 0;
};

std::vector<UserItemTags> user_item_tags(const FolksonomyIndex& index, UserId user) {
  std::vector<UserItemTags> rows;
  for (auto p : index.positions(user)) {
    const auto& r = index.record(p);
    rows.push_back(UserItemTags{r.item, r.tag, 1});
  }
  std::sort(rows.begin(), rows.end(), [](const UserItemTags& a, const UserItemTags& b) {
    return a.item != b.item ? a.item < b.item : a.tag < b.tag;
  });
  std::vector<UserItemTags> merged;
  for (const auto& r : rows) {
    if (!merged.empty() && merged.back().item == r.item && merged.back().tag == r.tag) {
      ++merged.back().raw;
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

std::optional<double> score_user(const FolksonomyIndex& index, UserId user, FrequencyMode mode,
                                 const std::vector<ItemTotals>* cache) {
  const auto rows = user_item_tags(index, user);
  long double weighted = 0, weights = 0;
  bool any = false;
  for (std::size_t begin = 0; begin < rows.size();) {
    const ItemId item = rows[begin].item;
    const ItemTotals totals = cache ? (*cache)[item.value] : item_totals(index, item, mode);
    std::size_t end = begin;
    double best = 0.0;
    std::uint64_t own = 0;
    for (; end < rows.size() && rows[end].item == item; ++end) {
      best = std::max(best, score_from(tag_frequency(index, item, rows[end].tag, mode), totals.max));
      own += mode == FrequencyMode::distinct_users ? 1 : rows[end].raw;
    }
    begin = end;
    const auto w = weight_from(totals.sum, own);
    if (!w) continue;
    any = true;
    weighted += best * *w;
    weights += *w;
  }
  if (!any || weights == 0) return std::nullopt;
  return std::clamp(static_cast<double>(weighted / weights), 0.0, 1.0);
}

bool has_triple(const FolksonomyIndex& index, UserId user, ItemId item, TagId tag) {
  for (auto p : index.positions(user)) {
    const auto& r = index.record(p);
    if (r.item == item && r.tag == tag) return true;
  }
  return false;
}

}  // namespace

double annotation_score(const FolksonomyIndex& index, UserId user, ItemId item, TagId tag, FrequencyMode mode) {
  if (user.value >= index.user_count() || item.value >= index.item_count() || tag.value >= index.tag_count() ||
      !has_triple(index, user, item, tag))
    throw NotFoundError("no such (user, item, tag) annotation");
  return score_from(tag_frequency(index, item, tag, mode), item_totals(index, item, mode).max);
}

double annotation_score(const FolksonomyIndex& index, std::string_view user, std::string_view item,
                        std::string_view tag, FrequencyMode mode) {
  const auto u = index.find_user(user);
  const auto i = index.find_item(item);
  const auto t = index.find_tag(tag);
  if (!u || !i || !t) {
    throw NotFoundError("no such annotation: " + std::string(user) + "/" + std::string(item) + "/" +
                        std::string(tag));
  }
  return annotation_score(index, *u, *i, *t, mode);
}

std::optional<double> annotation_weight(const FolksonomyIndex& index, UserId user, ItemId item, FrequencyMode mode) {
  if (user.value >= index.user_count() || item.value >= index.item_count())
    throw NotFoundError("unknown user or item handle");
  std::uint64_t own = 0;
  bool tagged = false;
  for (const auto& row : user_item_tags(index, user)) {
    if (row.item != item) continue;
    tagged = true;
    own += mode == FrequencyMode::distinct_users ? 1 : row.raw;
  }
  if (!tagged) throw NotFoundError("user did not tag this item");
  return weight_from(item_totals(index, item, mode).sum, own);
}

std::optional<double> user_consensus_expertise(const FolksonomyIndex& index, UserId user, FrequencyMode mode) {
  if (user.value >= index.user_count()) throw NotFoundError("unknown user handle");
  return score_user(index, user, mode, nullptr);
}

std::vector<UserScore> all_consensus_expertise(const FolksonomyIndex& index, FrequencyMode mode) {
  std::vector<ItemTotals> cache(index.item_count());
  parallel_for(index.item_count(), [&](std::size_t i) {
    cache[i] = item_totals(index, ItemId(static_cast<std::uint32_t>(i)), mode);
  });
  std::vector<std::optional<double>> scores(index.user_count());
  parallel_for(index.user_count(), [&](std::size_t u) {
    scores[u] = score_user(index, UserId(static_cast<std::uint32_t>(u)), mode, &cache);
  });
  std::vector<UserScore> out;
  for (std::uint32_t u = 0; u < scores.size(); ++u) {
    if (scores[u]) out.push_back(UserScore{UserId(u), *scores[u]});
  }
  return out;
}

BinnedSeries consensus_expertise_by_bin(const FolksonomyIndex& index, const BinSpec& spec, FrequencyMode mode) {
  const auto scores = all_consensus_expertise(index, mode);
  std::vector<KeyedValue> values;
  values.reserve(scores.size());
  for (const auto& s : scores) values.push_back(KeyedValue{static_cast<double>(index.annotation_count(s.user)), s.score});
  return binned_mean(values, spec);
}

}  // namespace folkmetrics
