#pragma once

// Fixture builders and reference implementations used by the unit and
// acceptance tests. The oracles are written from the definitions and share no
// code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "folkmetrics/corpus.hpp"
#include "folkmetrics/partition.hpp"

namespace folkmetrics {

inline void PrintTo(const Annotation& a, std::ostream* os) {
  *os << "(" << a.user << ", " << a.item << ", " << a.tag << ", " << a.time << ")";
}

}  // namespace folkmetrics

namespace fmtest {

using folkmetrics::Annotation;
using folkmetrics::FolksonomyIndex;

inline FolksonomyIndex index_of(const std::vector<Annotation>& annotations, bool dedupe = false) {
  return folkmetrics::build_index(annotations, dedupe);
}

// Adds `count` annotations of tag on item by user at the given time.
inline void add(std::vector<Annotation>& out, const std::string& user, const std::string& item, const std::string& tag,
                std::int64_t time = 0, int count = 1) {
  for (int k = 0; k < count; ++k) out.push_back(Annotation{user, item, tag, time});
}

// Corpus where user "u<k>" has counts[k] annotations spread over distinct items.
inline std::vector<Annotation> corpus_with_counts(const std::vector<int>& counts) {
  std::vector<Annotation> out;
  for (std::size_t u = 0; u < counts.size(); ++u) {
    for (int k = 0; k < counts[u]; ++k) {
      add(out, "u" + std::to_string(u), "i" + std::to_string(k), "t" + std::to_string(k % 3), k);
    }
  }
  return out;
}

// Uniformly random small corpus with zero-padded names so that numeric and
// lexicographic order agree.
inline std::vector<Annotation> random_corpus(std::mt19937_64& rng, int users, int items, int tags, int n,
                                             int time_span = 50) {
  auto name = [](char prefix, int k) {
    std::string s = std::to_string(k);
    return std::string(1, prefix) + std::string(4 - s.size(), '0') + s;
  };
  std::uniform_int_distribution<int> du(0, users - 1), di(0, items - 1), dt(0, tags - 1), dtime(0, time_span);
  std::vector<Annotation> out;
  for (int k = 0; k < n; ++k) {
    out.push_back(Annotation{name('u', du(rng)), name('i', di(rng)), name('t', dt(rng)), dtime(rng)});
  }
  return out;
}

// Partition with an explicit supertagger set, independent of the threshold rule.
inline folkmetrics::Partition partition_of(const FolksonomyIndex& index, const std::set<std::string>& supertaggers) {
  folkmetrics::Partition p;
  p.membership.assign(index.user_count(), folkmetrics::Group::others);
  p.total_annotations = index.size();
  for (std::uint32_t u = 0; u < index.user_count(); ++u) {
    const folkmetrics::UserId id(u);
    if (supertaggers.count(index.name(id))) {
      p.membership[u] = folkmetrics::Group::supertaggers;
      p.supertaggers.push_back(id);
      p.supertagger_annotations += index.annotation_count(id);
    } else {
      p.others.push_back(id);
    }
  }
  return p;
}

namespace oracle {

// G = sum_ij |y_i - y_j| / (2 n^2 mean).
inline double gini_pairwise(const std::vector<double>& y) {
  const double n = static_cast<double>(y.size());
  double sum = 0, total = 0;
  for (double a : y) {
    total += a;
    for (double b : y) sum += std::fabs(a - b);
  }
  return sum / (2 * n * n * (total / n));
}

// Rank by counting: 1 + #smaller + (#equal others) / 2.
inline std::vector<double> count_ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double smaller = 0, equal = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j == i) continue;
      if (x[j] < x[i]) smaller += 1;
      if (x[j] == x[i]) equal += 1;
    }
    r[i] = 1 + smaller + equal / 2;
  }
  return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(count_ranks(x), count_ranks(y));
}

inline double cosine(const std::vector<double>& x, const std::vector<double>& y) {
  double dot = 0, nx = 0, ny = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  return dot / std::sqrt(nx * ny);
}

// Named frequency distribution: key name -> count.
using Dist = std::map<std::string, double>;

// Top-N keys by descending count, ties by name.
inline std::vector<std::string> top_keys(const Dist& d, std::size_t n) {
  std::vector<std::pair<std::string, double>> v(d.begin(), d.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> out;
  for (std::size_t k = 0; k < v.size() && k < n; ++k) out.push_back(v[k].first);
  return out;
}

// Rank of each key among the side's own top-N (average ranks on ties), N+1
// for keys outside it.
inline std::map<std::string, double> side_ranks(const Dist& d, const std::vector<std::string>& top,
                                                const std::set<std::string>& keys, std::size_t n) {
  std::map<std::string, double> out;
  for (const auto& k : keys) {
    if (std::find(top.begin(), top.end(), k) == top.end()) {
      out[k] = static_cast<double>(n) + 1;
      continue;
    }
    double higher = 0, equal = 0;
    for (const auto& other : top) {
      if (other == k) continue;
      if (d.at(other) > d.at(k)) higher += 1;
      if (d.at(other) == d.at(k)) equal += 1;
    }
    out[k] = 1 + higher + equal / 2;
  }
  return out;
}

inline double spearman_topn(const Dist& a, const Dist& b, std::size_t n) {
  const auto ta = top_keys(a, n), tb = top_keys(b, n);
  std::set<std::string> keys(ta.begin(), ta.end());
  keys.insert(tb.begin(), tb.end());
  const auto ra = side_ranks(a, ta, keys, n), rb = side_ranks(b, tb, keys, n);
  std::vector<double> x, y;
  for (const auto& k : keys) {
    x.push_back(ra.at(k));
    y.push_back(rb.at(k));
  }
  return pearson(x, y);
}

inline double cosine_topn(const Dist& a, const Dist& b, std::size_t n) {
  const auto ta = top_keys(a, n), tb = top_keys(b, n);
  std::set<std::string> keys(ta.begin(), ta.end());
  keys.insert(tb.begin(), tb.end());
  std::vector<double> x, y;
  for (const auto& k : keys) {
    const bool in_a = std::find(ta.begin(), ta.end(), k) != ta.end();
    const bool in_b = std::find(tb.begin(), tb.end(), k) != tb.end();
    x.push_back(in_a ? a.at(k) : 0.0);
    y.push_back(in_b ? b.at(k) : 0.0);
  }
  return cosine(x, y);
}

// Bin of a key by direct exponent comparison against base^(k*step).
inline int bin_of(double key, double base, double step, double max_exponent) {
  if (key < 1) return -1;
  const int edges = static_cast<int>(std::llround(max_exponent / step)) + 1;
  int bin = -1;
  for (int k = 0; k < edges; ++k) {
    if (key >= std::pow(base, k * step) * (1 - 1e-12)) bin = k;
  }
  return bin;
}

struct BinStat {
  double mean = 0;
  double stderr = 0;
  std::size_t n = 0;
};

// Sort-and-group reduction of (key, value) pairs.
inline std::map<int, BinStat> group_by_bin(std::vector<std::pair<double, double>> values, double base, double step,
                                           double max_exponent) {
  std::sort(values.begin(), values.end());
  std::map<int, std::vector<double>> groups;
  for (const auto& [k, v] : values) groups[bin_of(k, base, step, max_exponent)].push_back(v);
  std::map<int, BinStat> out;
  for (const auto& [b, vs] : groups) {
    BinStat s;
    s.n = vs.size();
    for (double v : vs) s.mean += v;
    s.mean /= static_cast<double>(s.n);
    if (s.n > 1) {
      double ss = 0;
      for (double v : vs) ss += (v - s.mean) * (v - s.mean);
      s.stderr = std::sqrt(ss / static_cast<double>(s.n - 1)) / std::sqrt(static_cast<double>(s.n));
    }
    out[b] = s;
  }
  return out;
}

// Plain HITS on a dense user x item matrix: e <- A q, q <- A^T e, each
// L1-normalized, for a fixed number of rounds.
inline std::vector<double> hits_users(const std::vector<std::vector<double>>& a, int rounds = 5000) {
  const std::size_t nu = a.size(), ni = a.empty() ? 0 : a[0].size();
  std::vector<double> e(nu, 1.0 / nu), q(ni, 1.0 / ni);
  for (int r = 0; r < rounds; ++r) {
    std::vector<double> ne(nu, 0.0), nq(ni, 0.0);
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t i = 0; i < ni; ++i) ne[u] += a[u][i] * q[i];
    double s = std::accumulate(ne.begin(), ne.end(), 0.0);
    for (auto& v : ne) v /= s;
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t i = 0; i < ni; ++i) nq[i] += a[u][i] * ne[u];
    s = std::accumulate(nq.begin(), nq.end(), 0.0);
    for (auto& v : nq) v /= s;
    e = ne;
    q = nq;
  }
  return e;
}

// Lower median and nearest-rank percentile of a count list.
inline std::uint64_t lower_median(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

inline std::uint64_t nearest_rank(std::vector<std::uint64_t> v, double p) {
  std::sort(v.begin(), v.end());
  std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(v.size())));
  if (rank < 1) rank = 1;
  return v[rank - 1];
}

}  // namespace oracle
}  // namespace fmtest
