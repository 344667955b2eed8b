#include "folkmetrics/taxonomy.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "folkmetrics/errors.hpp"
#include "folkmetrics/parallel.hpp"

namespace folkmetrics {

std::uint32_t ConditionalTable::support(TagId a, TagId b) const {
  if (a == b) return 0;
  const auto key = std::minmax(a, b);
  const auto it = std::lower_bound(pairs.begin(), pairs.end(), key, [](const TagPair& p, const auto& k) {
    return std::tie(p.first, p.second) < std::tie(k.first, k.second);
  });
  return it != pairs.end() && it->first == key.first && it->second == key.second ? it->support : 0;
}

double ConditionalTable::conditional(TagId a, TagId b) const {
  const auto s = support(a, b);
  return s == 0 ? 0.0 : static_cast<double>(s) / static_cast<double>(item_count[b.value]);
}

ConditionalTable conditional_table(const FolksonomyIndex& index, std::span<const TagId> tags,
                                   std::uint32_t min_support) {
  ConditionalTable table;
  table.universe = index.tag_count();
  table.tags.assign(tags.begin(), tags.end());
  std::sort(table.tags.begin(), table.tags.end());
  table.tags.erase(std::unique(table.tags.begin(), table.tags.end()), table.tags.end());
  for (auto t : table.tags) {
    if (t.value >= index.tag_count()) throw NotFoundError("tag handle outside the index");
  }

  table.item_count.assign(table.universe, 0);
  table.frequency.assign(table.universe, 0);
  for (std::uint32_t t = 0; t < table.universe; ++t) table.frequency[t] = index.annotation_count(TagId(t));

  // Local ordinals for the considered tags; ascending handles keep them ordered.
  constexpr std::uint32_t none = ~0u;
  std::vector<std::uint32_t> local(table.universe, none);
  for (std::uint32_t k = 0; k < table.tags.size(); ++k) local[table.tags[k].value] = k;

  // Per-item considered tags and the inverse lists.
  const std::size_t n_tags = table.tags.size();
  std::vector<std::vector<std::uint32_t>> item_tags(index.item_count());
  std::vector<std::vector<std::uint32_t>> tag_items(n_tags);
  for (std::uint32_t i = 0; i < index.item_count(); ++i) {
    for (const auto& f : index.item_tags(ItemId(i))) {
      ++table.item_count[f.tag.value];
      const auto l = local[f.tag.value];
      if (l == none) continue;
      item_tags[i].push_back(l);
      tag_items[l].push_back(i);
    }
  }

  // Row a counts co-occurring tags b > a; rows are independent.
  std::vector<std::vector<TagPair>> rows(n_tags);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(thread_count(), n_tags));
  parallel_for(workers, [&](std::size_t w) {
    std::vector<std::uint32_t> counter(n_tags, 0);
    std::vector<std::uint32_t> touched;
    for (std::size_t a = w; a < n_tags; a += workers) {
      touched.clear();
      for (auto item : tag_items[a]) {
        const auto& list = item_tags[item];
        for (auto it = std::upper_bound(list.begin(), list.end(), static_cast<std::uint32_t>(a)); it != list.end();
             ++it) {
          if (counter[*it]++ == 0) touched.push_back(*it);
        }
      }
      std::sort(touched.begin(), touched.end());
      for (auto b : touched) {
        if (counter[b] >= min_support) rows[a].push_back(TagPair{table.tags[a], table.tags[b], counter[b]});
        counter[b] = 0;
      }
    }
  });
  for (auto& row : rows) table.pairs.insert(table.pairs.end(), row.begin(), row.end());
  return table;
}

std::size_t TaxonomyForest::edges() const {
  return static_cast<std::size_t>(std::count_if(parent.begin(), parent.end(), [](const auto& p) { return p.has_value(); }));
}

std::uint32_t TaxonomyForest::max_raw_depth() const {
  return raw_depth.empty() ? 0 : *std::max_element(raw_depth.begin(), raw_depth.end());
}

TaxonomyForest induce_forest(const ConditionalTable& table, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw DomainError("threshold must lie in (0, 1]");
  constexpr double slack = 1e-12;
  const std::size_t n = table.universe;

  struct Candidate {
    double probability = -1.0;  // P(parent | child)
    std::uint64_t frequency = 0;
    TagId parent;
  };
  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.parent < b.parent;
  };

  std::vector<Candidate> best(n);
  auto consider = [&](TagId super, TagId sub, std::uint32_t support) {
    const double up = static_cast<double>(support) / table.item_count[sub.value];     // P(super | sub)
    const double down = static_cast<double>(support) / table.item_count[super.value];  // P(sub | super)
    if (up + slack < threshold || down + slack >= threshold) return;
    if (table.frequency[super.value] <= table.frequency[sub.value]) return;
    const Candidate c{up, table.frequency[super.value], super};
    if (best[sub.value].probability < 0 || better(c, best[sub.value])) best[sub.value] = c;
  };
  for (const auto& p : table.pairs) {
    consider(p.first, p.second, p.support);
    consider(p.second, p.first, p.support);
  }

  TaxonomyForest forest;
  forest.nodes = table.tags;
  forest.parent.assign(n, std::nullopt);
  forest.raw_depth.assign(n, 0);
  forest.norm_depth.assign(n, 0.0);
  forest.connected.assign(n, false);
  for (auto t : table.tags) {
    if (best[t.value].probability >= 0) {
      forest.parent[t.value] = best[t.value].parent;
      forest.connected[t.value] = true;
      forest.connected[best[t.value].parent.value] = true;
    }
  }

  // Parents are strictly more frequent, so a frequency-descending sweep
  // always visits a parent before its children.
  std::vector<TagId> order = table.tags;
  std::sort(order.begin(), order.end(), [&](TagId a, TagId b) {
    if (table.frequency[a.value] != table.frequency[b.value]) return table.frequency[a.value] > table.frequency[b.value];
    return a < b;
  });
  std::vector<TagId> root(n);
  for (auto t : order) {
    if (const auto& p = forest.parent[t.value]) {
      forest.raw_depth[t.value] = forest.raw_depth[p->value] + 1;
      root[t.value] = root[p->value];
    } else {
      root[t.value] = t;
    }
  }
  std::vector<std::uint32_t> tree_depth(n, 0);
  for (auto t : table.tags) {
    auto& d = tree_depth[root[t.value].value];
    d = std::max(d, forest.raw_depth[t.value]);
  }
  for (auto t : table.tags) {
    if (!forest.connected[t.value]) {
      forest.disconnected.push_back(t);
      continue;
    }
    const auto depth = tree_depth[root[t.value].value];
    forest.norm_depth[t.value] = depth == 0 ? 0.0 : static_cast<double>(forest.raw_depth[t.value]) / depth;
  }
  return forest;
}

std::string_view to_string(DepthMode mode) { return mode == DepthMode::vocabulary ? "vocabulary" : "annotation"; }

namespace {

void check_forest(const FolksonomyIndex& index, const TaxonomyForest& forest) {
  if (forest.connected.size() != index.tag_count()) throw DomainError("forest was not built from this index");
}

std::optional<double> depth_score(const FolksonomyIndex& index, const TaxonomyForest& forest, UserId user,
                                  DepthMode mode, std::vector<TagId>& scratch) {
  long double sum = 0;
  std::size_t n = 0;
  if (mode == DepthMode::annotation) {
    for (auto p : index.positions(user)) {
      const auto t = index.record(p).tag;
      if (!forest.connected[t.value]) continue;
      sum += forest.norm_depth[t.value];
      ++n;
    }
  } else {
    scratch.clear();
    for (auto p : index.positions(user)) {
      const auto t = index.record(p).tag;
      if (forest.connected[t.value]) scratch.push_back(t);
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    for (auto t : scratch) sum += forest.norm_depth[t.value];
    n = scratch.size();
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(sum / n);
}

}  // namespace

std::optional<double> user_depth_expertise(const FolksonomyIndex& index, const TaxonomyForest& forest, UserId user,
                                           DepthMode mode) {
  check_forest(index, forest);
  if (user.value >= index.user_count()) throw NotFoundError("unknown user handle");
  std::vector<TagId> scratch;
  return depth_score(index, forest, user, mode, scratch);
}

std::vector<UserScore> all_depth_expertise(const FolksonomyIndex& index, const TaxonomyForest& forest,
                                           DepthMode mode) {
  check_forest(index, forest);
  std::vector<std::optional<double>> scores(index.user_count());
  parallel_for(index.user_count(), [&](std::size_t u) {
    std::vector<TagId> scratch;
    scores[u] = depth_score(index, forest, UserId(static_cast<std::uint32_t>(u)), mode, scratch);
  });
  std::vector<UserScore> out;
  for (std::uint32_t u = 0; u < scores.size(); ++u) {
    if (scores[u]) out.push_back(UserScore{UserId(u), *scores[u]});
  }
  return out;
}

BinnedSeries depth_by_bin(const FolksonomyIndex& index, const TaxonomyForest& forest, const BinSpec& spec,
                          DepthMode mode) {
  std::vector<KeyedValue> values;
  for (const auto& s : all_depth_expertise(index, forest, mode)) {
    values.push_back(KeyedValue{static_cast<double>(index.annotation_count(s.user)), s.score});
  }
  return binned_mean(values, spec);
}

double connected_coverage(const FolksonomyIndex& index, const TaxonomyForest& forest) {
  check_forest(index, forest);
  if (index.empty()) return 0.0;
  std::uint64_t covered = 0;
  for (std::uint32_t t = 0; t < index.tag_count(); ++t) {
    if (forest.connected[t]) covered += index.annotation_count(TagId(t));
  }
  return static_cast<double>(covered) / static_cast<double>(index.size());
}

}  // namespace folkmetrics
