#include "folkmetrics/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "folkmetrics/errors.hpp"

namespace folkmetrics {

std::string_view to_string(TimeGranularity g) {
  return g == TimeGranularity::months ? "months" : "seconds";
}

std::optional<TimeGranularity> parse_granularity(std::string_view text) {
  if (text == "seconds") return TimeGranularity::seconds;
  if (text == "months") return TimeGranularity::months;
  return std::nullopt;
}

std::optional<Annotation> parse_line(std::string_view line, char delimiter) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

  std::string_view fields[4];
  std::size_t start = 0;
  for (int f = 0; f < 4; ++f) {
    const std::size_t end = f < 3 ? line.find(delimiter, start) : line.size();
    if (end == std::string_view::npos) return std::nullopt;
    fields[f] = line.substr(start, end - start);
    start = end + 1;
  }
  if (fields[3].find(delimiter) != std::string_view::npos) return std::nullopt;
  if (fields[0].empty() || fields[1].empty()) return std::nullopt;

  auto tag = normalize_tag(fields[2]);
  if (!tag || tag->empty()) return std::nullopt;

  std::int64_t time = 0;
  const auto* first = fields[3].data();
  const auto* last = first + fields[3].size();
  const auto [ptr, ec] = std::from_chars(first, last, time);
  if (ec != std::errc{} || ptr != last || time < 0) return std::nullopt;

  return Annotation{std::string(fields[0]), std::string(fields[1]), std::move(*tag), time};
}

namespace {

template <class Sink>
IngestStats for_each_annotation(std::istream& in, const ParseOptions& options, Sink&& sink) {
  IngestStats stats;
  std::string line;
  bool skip_header = options.header;
  while (std::getline(in, line)) {
    if (skip_header) {
      skip_header = false;
      continue;
    }
    if (line.empty() || line == "\r") continue;
    ++stats.lines;
    if (auto a = parse_line(line, options.delimiter)) {
      sink(std::move(*a));
    } else {
      ++stats.malformed;
    }
  }
  if (in.bad()) throw IoError("read error while parsing annotations");
  if (stats.malformed * 2 > stats.lines) {
    throw FormatError(std::to_string(stats.malformed) + " of " + std::to_string(stats.lines) +
                      " lines are malformed; check the delimiter");
  }
  return stats;
}

}  // namespace

ParseResult parse_annotations(std::istream& in, const ParseOptions& options) {
  ParseResult result;
  result.granularity = options.granularity;
  const auto stats = for_each_annotation(in, options, [&](Annotation&& a) { result.annotations.push_back(std::move(a)); });
  result.lines = stats.lines;
  result.malformed = stats.malformed;
  return result;
}

IngestStats ingest(std::istream& in, const ParseOptions& options, IndexBuilder& builder) {
  return for_each_annotation(in, options, [&](Annotation&& a) { builder.add(a); });
}

ParseResult parse_annotations_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_annotations(in, options);
}

void write_annotations(std::ostream& out, std::span<const Annotation> annotations, char delimiter) {
  for (const auto& a : annotations) {
    out << a.user << delimiter << a.item << delimiter << a.tag << delimiter << a.time << '\n';
  }
}

// ---------------------------------------------------------------------------
// Index

Annotation FolksonomyIndex::annotation(std::size_t position) const {
  const Record& r = records_[position];
  return Annotation{name(r.user), name(r.item), name(r.tag), r.time};
}

namespace {

template <class Handle>
std::optional<Handle> find_name(const std::vector<std::string>& names, std::string_view name) {
  const auto it = std::lower_bound(names.begin(), names.end(), name,
                                   [](const std::string& a, std::string_view b) { return a < b; });
  if (it == names.end() || *it != name) return std::nullopt;
  return Handle(static_cast<std::uint32_t>(it - names.begin()));
}

}  // namespace

std::optional<UserId> FolksonomyIndex::find_user(std::string_view n) const {
  return find_name<UserId>(users_, n);
}
std::optional<ItemId> FolksonomyIndex::find_item(std::string_view n) const {
  return find_name<ItemId>(items_, n);
}
std::optional<TagId> FolksonomyIndex::find_tag(std::string_view n) const {
  return find_name<TagId>(tags_, n);
}

std::span<const TagFrequency> FolksonomyIndex::item_tags(ItemId i) const {
  const auto begin = item_tag_offsets_[i.value];
  const auto end = item_tag_offsets_[i.value + 1];
  return std::span(item_tag_table_).subspan(begin, end - begin);
}

std::uint32_t FolksonomyIndex::item_tag_freq(ItemId i, TagId t) const {
  const auto row = item_tags(i);
  const auto it = std::lower_bound(row.begin(), row.end(), t,
                                   [](const TagFrequency& f, TagId tag) { return f.tag < tag; });
  return it != row.end() && it->tag == t ? it->users : 0;
}

std::uint32_t IndexBuilder::Interner::intern(std::string_view s) {
  auto [it, inserted] = ids.try_emplace(std::string(s), static_cast<std::uint32_t>(names.size()));
  if (inserted) names.push_back(&it->first);
  return it->second;
}

void IndexBuilder::add(std::string_view user, std::string_view item, std::string_view tag,
                       std::int64_t time) {
  records_.push_back(Record{UserId(users_.intern(user)), ItemId(items_.intern(item)),
                            TagId(tags_.intern(tag)), time});
}

namespace {

// Sorts interned names and returns (sorted names, old id -> new id).
std::pair<std::vector<std::string>, std::vector<std::uint32_t>> finalize(
    const std::vector<const std::string*>& names) {
  std::vector<std::uint32_t> order(names.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return *names[a] < *names[b]; });
  std::vector<std::string> sorted;
  sorted.reserve(names.size());
  std::vector<std::uint32_t> remap(names.size());
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
    sorted.push_back(*names[order[rank]]);
    remap[order[rank]] = rank;
  }
  return {std::move(sorted), std::move(remap)};
}

template <class Key>
void fill_csr(std::vector<std::uint32_t>& offsets, std::vector<std::uint32_t>& values,
              std::size_t keys, std::span<const Record> records, Key key) {
  offsets.assign(keys + 1, 0);
  for (const auto& r : records) ++offsets[key(r) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  values.resize(records.size());
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::uint32_t pos = 0; pos < records.size(); ++pos) {
    values[cursor[key(records[pos])]++] = pos;
  }
}

}  // namespace

FolksonomyIndex IndexBuilder::build(bool dedupe) && {
  FolksonomyIndex index;
  index.granularity_ = granularity_;
  index.deduplicated_ = dedupe;

  auto [users, user_map] = finalize(users_.names);
  auto [items, item_map] = finalize(items_.names);
  auto [tags, tag_map] = finalize(tags_.names);
  for (auto& r : records_) {
    r.user = UserId(user_map[r.user.value]);
    r.item = ItemId(item_map[r.item.value]);
    r.tag = TagId(tag_map[r.tag.value]);
  }
  users_ = {};
  items_ = {};
  tags_ = {};

  if (dedupe && !records_.empty()) {
    std::vector<std::uint32_t> order(records_.size());
    std::iota(order.begin(), order.end(), 0u);
    auto key = [&](std::uint32_t p) {
      const auto& r = records_[p];
      return std::tie(r.user, r.item, r.tag, r.time);
    };
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      const auto ka = key(a);
      const auto kb = key(b);
      return ka != kb ? ka < kb : a < b;
    });
    std::vector<bool> keep(records_.size(), false);
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto& r = records_[order[k]];
      if (k == 0) {
        keep[order[k]] = true;
        continue;
      }
      const auto& prev = records_[order[k - 1]];
      if (r.user != prev.user || r.item != prev.item || r.tag != prev.tag) keep[order[k]] = true;
    }
    std::vector<Record> kept;
    kept.reserve(records_.size());
    for (std::size_t p = 0; p < records_.size(); ++p) {
      if (keep[p]) kept.push_back(records_[p]);
    }
    records_ = std::move(kept);
  }

  index.users_ = std::move(users);
  index.items_ = std::move(items);
  index.tags_ = std::move(tags);
  index.records_ = std::move(records_);
  records_ = {};

  const std::span<const Record> recs = index.records_;
  fill_csr(index.by_user_.offsets, index.by_user_.values, index.users_.size(), recs,
           [](const Record& r) { return r.user.value; });
  fill_csr(index.by_item_.offsets, index.by_item_.values, index.items_.size(), recs,
           [](const Record& r) { return r.item.value; });
  fill_csr(index.by_tag_.offsets, index.by_tag_.values, index.tags_.size(), recs,
           [](const Record& r) { return r.tag.value; });

  // Per-item (tag, user) pairs sorted, then run-length counted.
  index.item_tag_offsets_.assign(index.items_.size() + 1, 0);
  std::vector<std::pair<TagId, UserId>> pairs;
  for (std::uint32_t item = 0; item < index.items_.size(); ++item) {
    pairs.clear();
    for (auto p : FolksonomyIndex::slice(index.by_item_, item)) {
      pairs.emplace_back(recs[p].tag, recs[p].user);
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const bool new_tag = k == 0 || pairs[k].first != pairs[k - 1].first;
      if (new_tag) index.item_tag_table_.push_back(TagFrequency{pairs[k].first, 0, 0});
      auto& entry = index.item_tag_table_.back();
      ++entry.annotations;
      if (new_tag || pairs[k].second != pairs[k - 1].second) ++entry.users;
    }
    index.item_tag_offsets_[item + 1] = static_cast<std::uint32_t>(index.item_tag_table_.size());
  }

  index.tag_users_.assign(index.tags_.size(), 0);
  std::vector<UserId> tag_users;
  for (std::uint32_t tag = 0; tag < index.tags_.size(); ++tag) {
    tag_users.clear();
    for (auto p : FolksonomyIndex::slice(index.by_tag_, tag)) tag_users.push_back(recs[p].user);
    std::sort(tag_users.begin(), tag_users.end());
    index.tag_users_[tag] = static_cast<std::uint32_t>(
        std::unique(tag_users.begin(), tag_users.end()) - tag_users.begin());
  }
  return index;
}

FolksonomyIndex build_index(std::span<const Annotation> annotations, bool dedupe,
                            TimeGranularity granularity) {
  IndexBuilder builder(granularity);
  for (const auto& a : annotations) builder.add(a);
  return std::move(builder).build(dedupe);
}

FolksonomyIndex deduplicated(const FolksonomyIndex& index) {
  IndexBuilder builder(index.granularity());
  for (const auto& r : index.records()) builder.add(index.name(r.user), index.name(r.item), index.name(r.tag), r.time);
  return std::move(builder).build(true);
}

// ---------------------------------------------------------------------------
// Statistics

UserStats user_stats(const FolksonomyIndex& index, UserId user) {
  if (user.value >= index.user_count()) throw NotFoundError("unknown user handle");
  std::vector<TagId> tags;
  std::vector<ItemId> items;
  for (auto p : index.positions(user)) {
    tags.push_back(index.record(p).tag);
    items.push_back(index.record(p).item);
  }
  std::sort(tags.begin(), tags.end());
  std::sort(items.begin(), items.end());
  UserStats s;
  s.annotations = index.annotation_count(user);
  s.distinct_tags = static_cast<std::uint32_t>(std::unique(tags.begin(), tags.end()) - tags.begin());
  s.distinct_items =
      static_cast<std::uint32_t>(std::unique(items.begin(), items.end()) - items.begin());
  return s;
}

UserStats user_stats(const FolksonomyIndex& index, std::string_view user) {
  const auto id = index.find_user(user);
  if (!id) throw NotFoundError("unknown user: " + std::string(user));
  return user_stats(index, *id);
}

CountSummary summarize_counts(std::vector<std::uint64_t> counts) {
  if (counts.empty()) return {};
  std::sort(counts.begin(), counts.end());
  const std::size_t n = counts.size();
  // Nearest rank: smallest value whose rank r (1-based) satisfies r >= p * n.
  auto nearest_rank = [&](std::size_t percent) {
    std::size_t rank = (percent * n + 99) / 100;
    if (rank < 1) rank = 1;
    return counts[rank - 1];
  };
  return CountSummary{counts[(n - 1) / 2], nearest_rank(25), nearest_rank(75)};
}

DatasetSummary summary(const FolksonomyIndex& index) {
  DatasetSummary s;
  s.taggers = index.user_count();
  s.tags = index.tag_count();
  s.items = index.item_count();
  s.annotations = index.size();

  std::vector<std::uint64_t> counts;
  counts.reserve(index.user_count());
  for (std::uint32_t u = 0; u < index.user_count(); ++u) counts.push_back(index.annotation_count(UserId(u)));
  s.per_user = summarize_counts(std::move(counts));

  counts = {};
  for (std::uint32_t t = 0; t < index.tag_count(); ++t) counts.push_back(index.annotation_count(TagId(t)));
  s.per_tag = summarize_counts(std::move(counts));

  counts = {};
  for (std::uint32_t i = 0; i < index.item_count(); ++i) counts.push_back(index.annotation_count(ItemId(i)));
  s.per_item = summarize_counts(std::move(counts));
  return s;
}

}  // namespace folkmetrics
