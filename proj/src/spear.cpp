#include "folkmetrics/spear.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "folkmetrics/errors.hpp"
#include "folkmetrics/parallel.hpp"

namespace folkmetrics {

std::vector<TagId> eligible_tags(const FolksonomyIndex& index, std::size_t top_k, std::size_t min_users) {
  std::vector<TagId> tags(index.tag_count());
  for (std::uint32_t t = 0; t < tags.size(); ++t) tags[t] = TagId(t);
  std::stable_sort(tags.begin(), tags.end(),
                   [&](TagId a, TagId b) { return index.annotation_count(a) > index.annotation_count(b); });
  if (tags.size() > top_k) tags.resize(top_k);
  std::erase_if(tags, [&](TagId t) { return index.tag_user_count(t) < min_users; });
  std::sort(tags.begin(), tags.end());
  return tags;
}

double CreditMatrix::credit(UserId user, ItemId item) const {
  const auto row = std::lower_bound(users.begin(), users.end(), user);
  const auto col = std::lower_bound(items.begin(), items.end(), item);
  if (row == users.end() || *row != user || col == items.end() || *col != item) return 0.0;
  const auto r = static_cast<std::size_t>(row - users.begin());
  const auto c = static_cast<std::uint32_t>(col - items.begin());
  for (auto k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
    if (columns[k] == c) return credits[k];
  }
  return 0.0;
}

CreditMatrix credit_matrix(const FolksonomyIndex& index, TagId tag, double exponent) {
  if (tag.value >= index.tag_count()) throw NotFoundError("unknown tag handle");

  // Earliest time per (item, user).
  struct Entry {
    ItemId item;
    UserId user;
    std::int64_t time;
  };
  std::vector<Entry> entries;
  for (auto p : index.positions(tag)) {
    const auto& r = index.record(p);
    entries.push_back(Entry{r.item, r.user, r.time});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.item, a.user, a.time) < std::tie(b.item, b.user, b.time);
  });
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const Entry& a, const Entry& b) { return a.item == b.item && a.user == b.user; }),
                entries.end());

  CreditMatrix m;
  m.tag = tag;
  for (const auto& e : entries) {
    m.users.push_back(e.user);
    if (m.items.empty() || m.items.back() != e.item) m.items.push_back(e.item);
  }
  std::sort(m.users.begin(), m.users.end());
  m.users.erase(std::unique(m.users.begin(), m.users.end()), m.users.end());

  // Credit of each entry from the sorted times of its item's taggers.
  std::vector<double> credit(entries.size());
  std::vector<std::int64_t> times;
  for (std::size_t begin = 0; begin < entries.size();) {
    std::size_t end = begin;
    times.clear();
    while (end < entries.size() && entries[end].item == entries[begin].item) times.push_back(entries[end++].time);
    std::sort(times.begin(), times.end());
    for (std::size_t k = begin; k < end; ++k) {
      const auto later = times.end() - std::upper_bound(times.begin(), times.end(), entries[k].time);
      credit[k] = std::pow(1.0 + static_cast<double>(later), exponent);
    }
    begin = end;
  }

  // Scatter into user rows; entries are already in item order, so columns
  // within each row come out ascending.
  m.row_offsets.assign(m.users.size() + 1, 0);
  std::vector<std::uint32_t> row_of(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    row_of[k] = static_cast<std::uint32_t>(std::lower_bound(m.users.begin(), m.users.end(), entries[k].user) -
                                           m.users.begin());
    ++m.row_offsets[row_of[k] + 1];
  }
  for (std::size_t r = 0; r < m.users.size(); ++r) m.row_offsets[r + 1] += m.row_offsets[r];
  m.columns.resize(entries.size());
  m.credits.resize(entries.size());
  std::vector<std::uint32_t> cursor(m.row_offsets.begin(), m.row_offsets.end() - 1);
  std::uint32_t column = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0 && entries[k].item != entries[k - 1].item) ++column;
    const auto slot = cursor[row_of[k]]++;
    m.columns[slot] = column;
    m.credits[slot] = credit[k];
  }
  return m;
}

CreditMatrix credit_matrix(const FolksonomyIndex& index, std::string_view tag, double exponent) {
  const auto id = index.find_tag(tag);
  if (!id) throw NotFoundError("unknown tag: " + std::string(tag));
  return credit_matrix(index, *id, exponent);
}

double SpearResult::score(UserId user) const {
  const auto it = std::lower_bound(users.begin(), users.end(), user);
  if (it == users.end() || *it != user) throw NotFoundError("user has no score for this tag");
  return user_scores[static_cast<std::size_t>(it - users.begin())];
}

namespace {

void l1_normalize(std::vector<double>& v) {
  long double sum = 0;
  for (double x : v) sum += x;
  if (sum <= 0) return;
  for (double& x : v) x = static_cast<double>(x / sum);
}

}  // namespace

SpearResult spear_scores(const CreditMatrix& credit, double tolerance, std::size_t max_iter) {
  const std::size_t n_users = credit.users.size();
  const std::size_t n_items = credit.items.size();
  if (n_users == 0 || n_items == 0 || credit.entries() == 0) throw DomainError("empty credit matrix");

  SpearResult result;
  result.tag = credit.tag;
  result.users = credit.users;
  result.items = credit.items;
  std::vector<double> expertise(n_users, 1.0 / static_cast<double>(n_users));
  std::vector<double> quality(n_items, 1.0 / static_cast<double>(n_items));
  std::vector<double> next(n_users);
  std::vector<long double> accumulator(n_items);

  for (std::size_t it = 1; it <= max_iter; ++it) {
    for (std::size_t u = 0; u < n_users; ++u) {
      long double sum = 0;
      for (auto k = credit.row_offsets[u]; k < credit.row_offsets[u + 1]; ++k) {
        sum += credit.credits[k] * quality[credit.columns[k]];
      }
      next[u] = static_cast<double>(sum);
    }
    l1_normalize(next);

    std::fill(accumulator.begin(), accumulator.end(), 0.0L);
    for (std::size_t u = 0; u < n_users; ++u) {
      for (auto k = credit.row_offsets[u]; k < credit.row_offsets[u + 1]; ++k) {
        accumulator[credit.columns[k]] += credit.credits[k] * next[u];
      }
    }
    for (std::size_t i = 0; i < n_items; ++i) quality[i] = static_cast<double>(accumulator[i]);
    l1_normalize(quality);

    double delta = 0;
    for (std::size_t u = 0; u < n_users; ++u) delta = std::max(delta, std::abs(next[u] - expertise[u]));
    expertise.swap(next);
    result.iterations = it;
    if (delta < tolerance) {
      result.converged = true;
      break;
    }
  }
  result.user_scores = std::move(expertise);
  result.item_scores = std::move(quality);
  return result;
}

std::vector<UserScore> standardize_and_average(std::span<const SpearResult> results) {
  std::uint32_t universe = 0;
  for (const auto& r : results) {
    if (!r.users.empty()) universe = std::max(universe, r.users.back().value + 1);
  }
  std::vector<long double> sums(universe, 0);
  std::vector<std::uint32_t> counts(universe, 0);

  for (const auto& r : results) {
    const std::size_t n = r.user_scores.size();
    if (n == 0) continue;
    long double mean = 0;
    for (double s : r.user_scores) mean += s;
    mean /= n;
    long double ss = 0;
    for (double s : r.user_scores) ss += (s - mean) * (s - mean);
    const long double sd = std::sqrt(ss / n);
    // Scores are L1-normalized, so deviation is judged relative to the mean.
    const bool flat = !(sd > 1e-12L * mean);
    for (std::size_t k = 0; k < n; ++k) {
      const auto u = r.users[k].value;
      sums[u] += flat ? 0.0L : (r.user_scores[k] - mean) / sd;
      ++counts[u];
    }
  }

  std::vector<UserScore> out;
  for (std::uint32_t u = 0; u < universe; ++u) {
    if (counts[u] > 0) out.push_back(UserScore{UserId(u), static_cast<double>(sums[u] / counts[u])});
  }
  return out;
}

SpearRun run_spear(const FolksonomyIndex& index, const SpearOptions& options) {
  const auto tags = eligible_tags(index, options.top_k, options.min_users);
  if (tags.empty()) throw DomainError("no tag passes the SPEAR eligibility filter");

  SpearRun run;
  run.per_tag.resize(tags.size());
  parallel_for(tags.size(), [&](std::size_t k) {
    run.per_tag[k] = spear_scores(credit_matrix(index, tags[k], options.exponent), options.tolerance,
                                  options.max_iter);
  });
  for (const auto& r : run.per_tag) run.unconverged_tags += r.converged ? 0 : 1;
  run.user_means = standardize_and_average(run.per_tag);
  return run;
}

BinnedSeries spear_by_bin(const FolksonomyIndex& index, const SpearRun& run, const BinSpec& spec) {
  std::vector<KeyedValue> values;
  values.reserve(run.user_means.size());
  for (const auto& s : run.user_means) {
    values.push_back(KeyedValue{static_cast<double>(index.annotation_count(s.user)), s.score});
  }
  return binned_mean(values, spec);
}

BinnedSeries spear_by_bin(const FolksonomyIndex& index, const BinSpec& spec, const SpearOptions& options) {
  return spear_by_bin(index, run_spear(index, options), spec);
}

}  // namespace folkmetrics
