#include "folkmetrics/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <string>

#include "folkmetrics/errors.hpp"
#include "folkmetrics/parallel.hpp"
#include "folkmetrics/stats.hpp"

namespace folkmetrics {

std::string_view to_string(Dimension d) { return d == Dimension::item ? "item" : "tag"; }

std::uint64_t FreqDist::total() const {
  std::uint64_t t = 0;
  for (const auto& kc : counts) t += kc.count;
  return t;
}

FreqDist freq_dist(const FolksonomyIndex& index, std::span<const UserId> users, Dimension dimension) {
  const std::size_t universe = dimension == Dimension::tag ? index.tag_count() : index.item_count();
  std::vector<std::uint64_t> dense(universe, 0);
  for (auto u : users) {
    for (auto p : index.positions(u)) {
      const auto& r = index.record(p);
      ++dense[dimension == Dimension::tag ? r.tag.value : r.item.value];
    }
  }
  FreqDist dist;
  dist.dimension = dimension;
  for (std::uint32_t k = 0; k < universe; ++k) {
    if (dense[k] > 0) dist.counts.push_back(KeyCount{k, dense[k]});
  }
  return dist;
}

std::vector<UsagePoint> usage_distribution(const FreqDist& dist, bool cumulative) {
  if (dist.counts.empty()) throw DomainError("usage distribution of an empty distribution");
  std::map<std::uint64_t, std::uint64_t> mass;  // uses N -> annotations on keys with N uses
  for (const auto& kc : dist.counts) mass[kc.count] += kc.count;
  const auto total = static_cast<long double>(dist.total());

  std::vector<UsagePoint> out;
  out.reserve(mass.size());
  if (!cumulative) {
    for (const auto& [n, m] : mass) out.push_back(UsagePoint{n, static_cast<double>(m / total)});
    return out;
  }
  // Suffix sums give the share on keys used at least N times.
  std::uint64_t remaining = static_cast<std::uint64_t>(total);
  for (const auto& [n, m] : mass) {
    out.push_back(UsagePoint{n, static_cast<double>(remaining / total)});
    remaining -= m;
  }
  return out;
}

namespace {

// Descending count, ascending key.
std::vector<KeyCount> rank_order(const FreqDist& dist) {
  std::vector<KeyCount> ordered = dist.counts;
  std::sort(ordered.begin(), ordered.end(), [](const KeyCount& a, const KeyCount& b) {
    return a.count != b.count ? a.count > b.count : a.key < b.key;
  });
  return ordered;
}

struct RankedKey {
  std::uint32_t key;
  double rank;
  std::uint64_t count;
};

// The first n entries with within-prefix average ranks, sorted by key.
std::vector<RankedKey> top_n(std::span<const KeyCount> ordered, std::size_t n) {
  const std::size_t m = std::min(n, ordered.size());
  std::vector<RankedKey> out;
  out.reserve(m);
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && ordered[j + 1].count == ordered[i].count) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) out.push_back(RankedKey{ordered[k].key, avg, ordered[k].count});
    i = j + 1;
  }
  std::sort(out.begin(), out.end(), [](const RankedKey& a, const RankedKey& b) { return a.key < b.key; });
  return out;
}

struct Aligned {
  std::vector<std::uint32_t> keys;
  std::vector<double> rank_a, rank_b;
  std::vector<double> count_a, count_b;
};

Aligned align(std::span<const KeyCount> ordered_a, std::span<const KeyCount> ordered_b, std::size_t n) {
  const auto a = top_n(ordered_a, n);
  const auto b = top_n(ordered_b, n);
  const double absent = static_cast<double>(n) + 1.0;
  Aligned out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].key < b[j].key)) {
      out.keys.push_back(a[i].key);
      out.rank_a.push_back(a[i].rank);
      out.rank_b.push_back(absent);
      out.count_a.push_back(static_cast<double>(a[i].count));
      out.count_b.push_back(0.0);
      ++i;
    } else if (i == a.size() || b[j].key < a[i].key) {
      out.keys.push_back(b[j].key);
      out.rank_a.push_back(absent);
      out.rank_b.push_back(b[j].rank);
      out.count_a.push_back(0.0);
      out.count_b.push_back(static_cast<double>(b[j].count));
      ++j;
    } else {
      out.keys.push_back(a[i].key);
      out.rank_a.push_back(a[i].rank);
      out.rank_b.push_back(b[j].rank);
      out.count_a.push_back(static_cast<double>(a[i].count));
      out.count_b.push_back(static_cast<double>(b[j].count));
      ++i, ++j;
    }
  }
  return out;
}

void require_n(std::size_t n) {
  if (n < 1) throw DomainError("top-N comparisons need N >= 1");
}

}  // namespace

double spearman_topn(const FreqDist& a, const FreqDist& b, std::size_t n) {
  require_n(n);
  const auto aligned = align(rank_order(a), rank_order(b), n);
  return pearson(aligned.rank_a, aligned.rank_b);
}

double cosine_topn(const FreqDist& a, const FreqDist& b, std::size_t n) {
  require_n(n);
  const auto aligned = align(rank_order(a), rank_order(b), n);
  return cosine(aligned.count_a, aligned.count_b);
}

std::vector<std::size_t> default_n_grid(std::size_t max_n) {
  std::vector<std::size_t> grid;
  for (std::size_t n = 1; n <= std::min<std::size_t>(100, max_n); ++n) grid.push_back(n);
  for (int k = 1;; ++k) {
    const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, 2.0 + k / 20.0)));
    if (n > max_n) break;
    if (n > grid.back()) grid.push_back(n);
  }
  return grid;
}

std::vector<std::size_t> trim_n_grid(std::span<const std::size_t> grid, const FreqDist& a, const FreqDist& b) {
  const std::size_t whole = std::max(a.counts.size(), b.counts.size());
  std::vector<std::size_t> out;
  for (auto n : grid) {
    out.push_back(n);
    if (n >= whole) break;
  }
  return out;
}

SimilarityCurve similarity_curve(const FolksonomyIndex& index, const Partition& partition,
                                 Dimension dimension, std::span<const std::size_t> n_values) {
  check_partition(index, partition);
  const auto dist_s = freq_dist(index, partition.supertaggers, dimension);
  const auto dist_o = freq_dist(index, partition.others, dimension);
  if (dist_s.counts.empty() || dist_o.counts.empty())
    throw DomainError("similarity curve needs two non-empty sub-folksonomies");
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    require_n(n_values[k]);
    if (k > 0 && n_values[k] <= n_values[k - 1]) throw DomainError("N values must be strictly increasing");
  }

  const auto ordered_s = rank_order(dist_s);
  const auto ordered_o = rank_order(dist_o);
  const auto total = static_cast<long double>(index.size());
  auto full_count = [&](std::uint32_t key) -> std::uint64_t {
    return dimension == Dimension::tag ? index.annotation_count(TagId(key)) : index.annotation_count(ItemId(key));
  };

  SimilarityCurve curve;
  curve.points.resize(n_values.size());
  parallel_for(n_values.size(), [&](std::size_t k) {
    const std::size_t n = n_values[k];
    const auto aligned = align(ordered_s, ordered_o, n);
    SimilarityPoint point;
    point.n = n;
    try {
      point.rho = pearson(aligned.rank_a, aligned.rank_b);
    } catch (const UndefinedCorrelation&) {
      // Identical rankings (e.g. one shared key) are perfectly concordant.
      point.rho = aligned.rank_a == aligned.rank_b ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    }
    point.cosine = cosine(aligned.count_a, aligned.count_b);
    std::uint64_t covered = 0;
    for (auto key : aligned.keys) covered += full_count(key);
    point.coverage = static_cast<double>(covered / total);
    curve.points[k] = point;
  });

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : curve.points) {
    if (!std::isnan(p.rho) && p.rho > best) {
      best = p.rho;
      curve.core_size = p.n;
    }
  }
  return curve;
}

std::vector<ItemPopularity> parse_popularity(std::istream& in, const FolksonomyIndex& index, char delimiter) {
  std::vector<ItemPopularity> out;
  std::vector<bool> seen(index.item_count(), false);
  std::string line;
  std::size_t lines = 0, malformed = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++lines;
    const auto split = line.find(delimiter);
    if (split == std::string::npos || split == 0) {
      ++malformed;
      continue;
    }
    const std::string value = line.substr(split + 1);
    double popularity = 0;
    try {
      std::size_t used = 0;
      popularity = std::stod(value, &used);
      if (used != value.size() || !(popularity >= 0) || std::isinf(popularity)) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      ++malformed;
      continue;
    }
    const auto item = index.find_item(std::string_view(line).substr(0, split));
    if (!item || seen[item->value]) continue;
    seen[item->value] = true;
    out.push_back(ItemPopularity{*item, popularity});
  }
  if (malformed * 2 > lines) throw FormatError("popularity file: most lines are malformed");
  std::sort(out.begin(), out.end(), [](const ItemPopularity& a, const ItemPopularity& b) { return a.item < b.item; });
  return out;
}

BinnedSeries exogenous_popularity_diff(const FolksonomyIndex& index, const Partition& partition,
                                       std::span<const ItemPopularity> popularity, const BinSpec& bins) {
  check_partition(index, partition);
  std::vector<KeyedValue> diffs;
  for (const auto& ip : popularity) {
    if (ip.item.value >= index.item_count()) continue;
    long long diff = 0;
    for (auto p : index.positions(ip.item)) diff += partition.is_supertagger(index.record(p).user) ? 1 : -1;
    diffs.push_back(KeyedValue{ip.popularity, static_cast<double>(diff)});
  }
  if (diffs.empty()) throw DomainError("no indexed item has an exogenous popularity value");
  return binned_mean(diffs, bins);
}

}  // namespace folkmetrics
