#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "folkmetrics/ids.hpp"

namespace folkmetrics {

enum class TimeGranularity { seconds, months };

std::string_view to_string(TimeGranularity g);
std::optional<TimeGranularity> parse_granularity(std::string_view text);

// One act of tagging. Monthly data stores integer months since the epoch;
// annotations sharing a month are simultaneous.
struct Annotation {
  std::string user;
  std::string item;
  std::string tag;
  std::int64_t time = 0;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

// Trim surrounding whitespace and lowercase (full Unicode simple case mapping).
// Returns nullopt for text that is not valid UTF-8.
std::optional<std::string> normalize_tag(std::string_view raw);

struct ParseOptions {
  char delimiter = '\t';
  bool header = false;
  TimeGranularity granularity = TimeGranularity::seconds;
};

struct ParseResult {
  std::vector<Annotation> annotations;
  std::size_t lines = 0;      // non-blank data lines seen (header excluded)
  std::size_t malformed = 0;  // of those, lines that were rejected
  TimeGranularity granularity = TimeGranularity::seconds;
};

// Parses one data line. nullopt when the line is malformed.
std::optional<Annotation> parse_line(std::string_view line, char delimiter);

// Reads `user<d>item<d>tag<d>time` lines. Malformed lines are skipped and
// counted; if more than half of the lines are malformed a FormatError is
// thrown because the delimiter is almost certainly wrong.
ParseResult parse_annotations(std::istream& in, const ParseOptions& options = {});
ParseResult parse_annotations_file(const std::string& path, const ParseOptions& options = {});

void write_annotations(std::ostream& out, std::span<const Annotation> annotations,
                       char delimiter = '\t');

// Interned annotation as stored by the index.
struct Record {
  UserId user;
  ItemId item;
  TagId tag;
  std::int64_t time = 0;
};

struct TagFrequency {
  TagId tag;
  std::uint32_t users = 0;        // distinct users that applied tag to the item
  std::uint32_t annotations = 0;  // raw annotation count
};

class IndexBuilder;

// Immutable multi-way index over one annotation set. Users, items and tags
// are interned into lexicographically ordered handles. Safe to share between
// threads once built.
class FolksonomyIndex {
 public:
  FolksonomyIndex() = default;

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  std::size_t user_count() const { return users_.size(); }
  std::size_t item_count() const { return items_.size(); }
  std::size_t tag_count() const { return tags_.size(); }
  TimeGranularity granularity() const { return granularity_; }
  bool deduplicated() const { return deduplicated_; }

  std::span<const Record> records() const { return records_; }
  const Record& record(std::size_t position) const { return records_[position]; }
  Annotation annotation(std::size_t position) const;

  const std::string& name(UserId u) const { return users_[u.value]; }
  const std::string& name(ItemId i) const { return items_[i.value]; }
  const std::string& name(TagId t) const { return tags_[t.value]; }

  std::optional<UserId> find_user(std::string_view name) const;
  std::optional<ItemId> find_item(std::string_view name) const;
  std::optional<TagId> find_tag(std::string_view name) const;

  // Positions into records(), in record order.
  std::span<const std::uint32_t> positions(UserId u) const { return slice(by_user_, u.value); }
  std::span<const std::uint32_t> positions(ItemId i) const { return slice(by_item_, i.value); }
  std::span<const std::uint32_t> positions(TagId t) const { return slice(by_tag_, t.value); }

  std::uint32_t annotation_count(UserId u) const { return size_of(by_user_, u.value); }
  std::uint32_t annotation_count(ItemId i) const { return size_of(by_item_, i.value); }
  std::uint32_t annotation_count(TagId t) const { return size_of(by_tag_, t.value); }

  // Per-item tag table sorted by tag handle.
  std::span<const TagFrequency> item_tags(ItemId i) const;
  // Distinct users that tagged item i with t; 0 when the pair never occurs.
  std::uint32_t item_tag_freq(ItemId i, TagId t) const;
  // Distinct users that used tag t anywhere.
  std::uint32_t tag_user_count(TagId t) const { return tag_users_[t.value]; }

 private:
  friend class IndexBuilder;

  struct Csr {
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> values;
  };

  static std::span<const std::uint32_t> slice(const Csr& csr, std::uint32_t key) {
    return std::span(csr.values).subspan(csr.offsets[key], csr.offsets[key + 1] - csr.offsets[key]);
  }
  static std::uint32_t size_of(const Csr& csr, std::uint32_t key) {
    return csr.offsets[key + 1] - csr.offsets[key];
  }

  std::vector<std::string> users_;
  std::vector<std::string> items_;
  std::vector<std::string> tags_;
  std::vector<Record> records_;
  Csr by_user_;
  Csr by_item_;
  Csr by_tag_;
  std::vector<std::uint32_t> item_tag_offsets_;
  std::vector<TagFrequency> item_tag_table_;
  std::vector<std::uint32_t> tag_users_;
  TimeGranularity granularity_ = TimeGranularity::seconds;
  bool deduplicated_ = false;
};

// Single-writer accumulator. Strings are interned as they arrive, so memory
// grows with distinct entities plus one compact record per annotation.
class IndexBuilder {
 public:
  explicit IndexBuilder(TimeGranularity granularity = TimeGranularity::seconds)
      : granularity_(granularity) {}

  void add(std::string_view user, std::string_view item, std::string_view tag, std::int64_t time);
  void add(const Annotation& a) { add(a.user, a.item, a.tag, a.time); }

  // When dedupe is set, repeated (user, item, tag) triples collapse onto the
  // earliest-timestamped instance, which keeps its original position.
  FolksonomyIndex build(bool dedupe) &&;

 private:
  struct Interner {
    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<const std::string*> names;
    std::uint32_t intern(std::string_view s);
  };

  Interner users_;
  Interner items_;
  Interner tags_;
  std::vector<Record> records_;
  TimeGranularity granularity_;
};

struct IngestStats {
  std::size_t lines = 0;
  std::size_t malformed = 0;
};

// Streams well-formed lines straight into a builder; same malformed-line
// rules as parse_annotations.
IngestStats ingest(std::istream& in, const ParseOptions& options, IndexBuilder& builder);

FolksonomyIndex build_index(std::span<const Annotation> annotations, bool dedupe,
                            TimeGranularity granularity = TimeGranularity::seconds);

// The (user, item, tag) deduplicated view of an index.
FolksonomyIndex deduplicated(const FolksonomyIndex& index);

struct UserStats {
  std::uint32_t annotations = 0;
  std::uint32_t distinct_tags = 0;
  std::uint32_t distinct_items = 0;

  friend bool operator==(const UserStats&, const UserStats&) = default;
};

UserStats user_stats(const FolksonomyIndex& index, UserId user);
UserStats user_stats(const FolksonomyIndex& index, std::string_view user);

// Lower median and nearest-rank quartiles of a count distribution.
struct CountSummary {
  std::uint64_t median = 0;
  std::uint64_t q25 = 0;
  std::uint64_t q75 = 0;

  friend bool operator==(const CountSummary&, const CountSummary&) = default;
};

CountSummary summarize_counts(std::vector<std::uint64_t> counts);

struct DatasetSummary {
  std::size_t taggers = 0;
  std::size_t tags = 0;
  std::size_t items = 0;
  std::size_t annotations = 0;
  CountSummary per_user;
  CountSummary per_tag;
  CountSummary per_item;
};

DatasetSummary summary(const FolksonomyIndex& index);

struct SyntheticConfig {
  std::uint32_t n_users = 1000;
  double activity_exponent = 2.0;
  std::uint32_t n_items = 5000;
  std::uint32_t n_tags = 2000;
  double item_popularity_exponent = 1.0;
  double tag_popularity_exponent = 1.0;
  std::uint64_t seed = 1;
  // Upper truncation of the per-user activity power law.
  std::uint32_t max_user_annotations = 100000;
  // Timestamps are drawn uniformly from [0, time_span).
  std::int64_t time_span = 1'000'000;
};

void validate(const SyntheticConfig& config);

// Deterministic for a fixed config on every platform: uses its own
// integer-to-real conversion instead of the implementation-defined std
// distributions.
std::vector<Annotation> generate_synthetic(const SyntheticConfig& config);

}  // namespace folkmetrics
