// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "folkmetrics/consensus.hpp"
#include "folkmetrics/consensus_expertise.hpp"
#include "folkmetrics/errors.hpp"
#include "folkmetrics/motivation.hpp"
#include "folkmetrics/partition.hpp"
#include "folkmetrics/similarity.hpp"
#include "folkmetrics/spear.hpp"
#include "folkmetrics/taxonomy.hpp"
#include "support.hpp"

extern char** environ;

using namespace folkmetrics;
using fmtest::add;
using fmtest::index_of;
namespace oracle = fmtest::oracle;
namespace fs = std::filesystem;

namespace {

// Collects failed sub-checks of one criterion.
class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {}

  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }

  bool report() const {
    std::ostringstream line;
    line << (failures_.empty() ? "PASS " : "FAIL ") << name_;
    std::string sep = ": ";
    for (const auto& f : failures_) {
      line << sep << "failed [" << f << "]";
      sep = "; ";
    }
    for (const auto& n : notes_) {
      line << sep << n;
      sep = "; ";
    }
    std::cout << line.str() << std::endl;
    return failures_.empty();
  }

 private:
  std::string name_;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Runs a shell command line as a child and reports wall time and peak RSS.
struct ChildRun {
  int status = -1;
  double seconds = 0;
  double peak_mb = 0;
};

ChildRun run_child(const std::string& command) {
  ChildRun r;
  const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};
  pid_t pid;
  const auto start = std::chrono::steady_clock::now();
  if (posix_spawn(&pid, "/bin/sh", nullptr, nullptr, const_cast<char**>(argv), environ) != 0) return r;
  int status = 0;
  rusage usage{};
  wait4(pid, &status, 0, &usage);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.peak_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

// ---------------------------------------------------------------------------

bool gini_criterion() {
  Criterion c("Gini oracle");
  std::mt19937_64 rng(1);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<double> y(n);
    std::uniform_real_distribution<double> d(0, 1000);
    for (auto& v : y) v = d(rng);
    worst = std::max(worst, std::abs(gini(y) - oracle::gini_pairwise(y)));
  }
  c.check(worst <= 1e-9, "formula vs pairwise, max diff " + fmt_double(worst));
  const std::vector<double> flat(37, 5.0);
  c.check(gini(flat) == 0.0, "constant vector");
  const std::vector<double> small{1, 2, 3, 4};
  c.check(std::abs(gini(small) - 0.25) <= 1e-12, "gini([1,2,3,4])");
  c.note("100 random vectors, max diff " + fmt_double(worst));
  return c.report();
}

bool partition_criterion() {
  Criterion c("Partition properties");
  int bad_share = 0, bad_min = 0, bad_sum = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    SyntheticConfig cfg;
    cfg.n_users = 100 + static_cast<std::uint32_t>(seed * 17 % 400);
    cfg.seed = seed;
    const auto idx = index_of(generate_synthetic(cfg));
    const double fraction = 0.1 + 0.8 * static_cast<double>(seed % 9) / 8.0;
    const auto p = split_supertaggers(idx, fraction);
    std::uint64_t s = 0, o = 0;
    for (auto u : p.supertaggers) s += idx.annotation_count(u);
    for (auto u : p.others) o += idx.annotation_count(u);
    const double total = static_cast<double>(idx.size());
    if (static_cast<double>(s) < fraction * total) ++bad_share;
    const double without_last = static_cast<double>(s - idx.annotation_count(p.supertaggers.back()));
    if (without_last >= fraction * total) ++bad_min;
    if (s + o != idx.size() || s != p.supertagger_annotations) ++bad_sum;
  }
  c.check(bad_share == 0, std::to_string(bad_share) + " corpora below target share");
  c.check(bad_min == 0, std::to_string(bad_min) + " non-minimal splits");
  c.check(bad_sum == 0, std::to_string(bad_sum) + " totals mismatches");

  SyntheticConfig big;
  big.n_users = 10000;
  big.activity_exponent = 2.0;
  big.seed = 99;
  const auto idx = index_of(generate_synthetic(big));
  const auto p = split_supertaggers(idx, 0.5);
  const double share = static_cast<double>(p.supertaggers.size()) / static_cast<double>(idx.user_count());
  c.check(share < 0.2, "supertagger user fraction " + fmt_double(share));
  c.note("50 corpora; 10^4-user supertagger fraction " + fmt_double(share));
  return c.report();
}

FreqDist dist_from(const oracle::Dist& named, const std::vector<std::string>& universe) {
  FreqDist d;
  for (std::uint32_t k = 0; k < universe.size(); ++k) {
    const auto it = named.find(universe[k]);
    if (it != named.end()) d.counts.push_back(KeyCount{k, static_cast<std::uint64_t>(it->second)});
  }
  return d;
}

bool similarity_criterion() {
  Criterion c("Similarity");
  std::mt19937_64 rng(7);
  std::vector<std::string> universe;
  for (int k = 0; k < 60; ++k) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "k%03d", k);
    universe.push_back(buf);
  }
  double worst_rho = 0, worst_cos = 0;
  int compared = 0;
  for (int trial = 0; trial < 500; ++trial) {
    oracle::Dist a, b;
    for (const auto& k : universe) {
      if (rng() % 3) a[k] = static_cast<double>(1 + rng() % 9);
      if (rng() % 3) b[k] = static_cast<double>(1 + rng() % 9);
    }
    const std::size_t n = 1 + rng() % 50;
    const auto da = dist_from(a, universe), db = dist_from(b, universe);
    const double want = oracle::spearman_topn(a, b, n);
    try {
      worst_rho = std::max(worst_rho, std::abs(spearman_topn(da, db, n) - want));
      ++compared;
    } catch (const UndefinedCorrelation&) {
      c.check(std::isnan(want), "undefined rho where oracle is defined");
    }
    worst_cos = std::max(worst_cos, std::abs(cosine_topn(da, db, n) - oracle::cosine_topn(a, b, n)));
  }
  c.check(worst_rho <= 1e-9, "spearman_topn vs oracle " + fmt_double(worst_rho));
  c.check(worst_cos <= 1e-9, "cosine_topn vs oracle " + fmt_double(worst_cos));

  // Shared top-5 fixture.
  std::vector<Annotation> data;
  const std::vector<std::pair<std::string, int>> s_head{{"a", 100}, {"b", 100}, {"c", 80}, {"d", 70}, {"e", 60}};
  const std::vector<std::pair<std::string, int>> o_head{{"a", 90}, {"b", 100}, {"c", 80}, {"d", 70}, {"e", 60}};
  for (const auto& [t, n] : s_head) add(data, "super", "item-" + t, t, 0, n);
  for (const auto& [t, n] : o_head) add(data, "other", "item-" + t, t, 0, n);
  for (int i = 0; i < 10; ++i) {
    add(data, "super", "item-s", "s" + std::to_string(i), 0, 40 - 3 * i);
    add(data, "other", "item-n", "n" + std::to_string(i), 0, 40 - 3 * i);
  }
  const auto idx = index_of(data);
  std::vector<std::size_t> grid;
  for (std::size_t n = 1; n <= 20; ++n) grid.push_back(n);
  const auto curve = similarity_curve(idx, split_supertaggers(idx), Dimension::tag, grid);
  c.check(curve.core_size == 5, "shared-top-5 core_size " + std::to_string(curve.core_size));

  // Identical sub-folksonomies.
  std::vector<Annotation> same;
  for (const auto& u : {"x", "y"}) {
    add(same, u, "i1", "rock", 0, 5);
    add(same, u, "i2", "jazz", 0, 3);
    add(same, u, "i3", "pop", 0, 2);
    add(same, u, "i3", "folk", 0, 1);
  }
  const auto sidx = index_of(same);
  bool all_one = true;
  for (auto dim : {Dimension::tag, Dimension::item})
    for (const auto& pt : similarity_curve(sidx, split_supertaggers(sidx), dim, default_n_grid(1000)).points)
      all_one &= pt.rho == 1.0 && std::abs(pt.cosine - 1.0) < 1e-12;
  c.check(all_one, "identical groups rho = cosine = 1");
  c.note(std::to_string(compared) + " defined rho comparisons; core_size " + std::to_string(curve.core_size));
  return c.report();
}

bool consensus_criterion() {
  Criterion c("Consensus");
  std::vector<Annotation> data;
  for (const auto& u : {"s", "o"})
    for (int i = 0; i < 40; ++i)
      for (int t = 0; t <= i % 4; ++t) add(data, u, "i" + std::to_string(i), "t" + std::to_string(t), 0, 1 + i % 5);
  const auto idx = index_of(data);
  const auto p = fmtest::partition_of(idx, {"s"});
  const auto r = consensus_by_bin(idx, p, BinSpec{});
  bool ok = true;
  for (const auto& row : r.top_match.rows) ok &= row.mean == 1.0;
  for (const auto& row : r.cosine.rows) ok &= std::abs(row.mean - 1.0) < 1e-12;
  c.check(ok, "identical tagging gives 1.0 in every bin");

  const auto edges = log_bins({2.0, 1.0, 10.0});
  bool exact = edges.size() == 11;
  for (std::size_t k = 0; k < edges.size(); ++k) exact &= edges[k] == std::ldexp(1.0, static_cast<int>(k));
  const auto edges3 = log_bins({3.0, 1.0, 5.0});
  for (std::size_t k = 0; k < edges3.size(); ++k) exact &= edges3[k] == std::pow(3.0, static_cast<double>(k));
  c.check(exact, "step-1 edges are exact powers");

  std::mt19937_64 rng(3);
  const auto ridx = index_of(fmtest::random_corpus(rng, 60, 300, 30, 5000));
  const auto rs = consensus_by_bin(ridx, split_supertaggers(ridx), BinSpec{});
  c.check(rs.top_match.total_count() == rs.shared_items && rs.cosine.total_count() == rs.shared_items,
          "bin counts sum to shared items");
  c.note(std::to_string(rs.shared_items) + " shared items binned");
  return c.report();
}

bool motivation_criterion() {
  Criterion c("Motivation");
  {
    std::vector<Annotation> d;
    add(d, "u", "i1", "a");
    add(d, "u", "i1", "b");
    add(d, "u", "i2", "a");
    c.check(tpp(index_of(d), "u") == 1.5, "tpp 1.5");
  }
  {
    std::vector<Annotation> d{{"u", "i1", "a", 1}, {"u", "i1", "a", 9}};
    c.check(tpp(index_of(d), "u") == 1.0, "tpp repeated pair");
  }
  {
    std::vector<Annotation> d;
    add(d, "u", "i1", "a");
    add(d, "u", "i2", "b");
    c.check(trr(index_of(d), "u") == 1.0, "trr 1.0");
    std::vector<Annotation> e;
    for (int k = 0; k < 10; ++k) add(e, "u", "i" + std::to_string(k), "a");
    c.check(trr(index_of(e), "u") == 0.1, "trr 0.1");
  }
  {
    std::vector<Annotation> d;
    for (int k = 0; k < 5; ++k) add(d, "u", "i" + std::to_string(k), "t" + std::to_string(k));
    c.check(orphan_ratio(index_of(d), "u") == 1.0, "OR all singletons");
    std::vector<Annotation> e;
    for (int k = 0; k < 200; ++k) add(e, "u", "i" + std::to_string(k), "heavy");
    for (int k = 0; k < 9; ++k) add(e, "u", "i" + std::to_string(k), "light" + std::to_string(k));
    c.check(orphan_ratio(index_of(e), "u") == 0.9, "OR one heavy tag");
  }
  // OR = 1 whenever max per-tag usage <= divisor, probed with single-tag users.
  int violations = 0;
  std::string first;
  for (int m = 1; m <= 100; ++m) {
    std::vector<Annotation> d;
    for (int k = 0; k < m; ++k) add(d, "u", "i" + std::to_string(k), "only");
    const double v = orphan_ratio(index_of(d), "u", 100.0);
    if (v != 1.0) {
      if (violations++ == 0) first = "max usage " + std::to_string(m) + " gives OR " + fmt_double(v);
    }
  }
  c.check(violations == 0, "OR = 1 for max usage <= divisor: " + std::to_string(violations) +
                               " of 100 single-tag users violate it, e.g. " + first +
                               " since n* = ceil(m/100) = 1 < m");
  return c.report();
}

bool spear_criterion() {
  Criterion c("SPEAR");
  std::mt19937_64 rng(11);
  int unconverged = 0;
  double worst_hits = 0;
  std::size_t max_iter = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int users = 2 + static_cast<int>(rng() % 99);
    const auto data = fmtest::random_corpus(rng, users, 5 + static_cast<int>(rng() % 80), 1, users * 4, 30);
    const auto idx = index_of(data);
    for (double exponent : {0.0, 0.5}) {
      const auto credit = credit_matrix(idx, TagId(0), exponent);
      const auto r = spear_scores(credit, 1e-8, 250);
      if (!r.converged) ++unconverged;
      max_iter = std::max(max_iter, r.iterations);
      if (exponent != 0.0) continue;
      std::vector<std::vector<double>> a(credit.users.size(), std::vector<double>(credit.items.size(), 0.0));
      for (std::size_t u = 0; u < credit.users.size(); ++u)
        for (std::size_t i = 0; i < credit.items.size(); ++i) a[u][i] = credit.credit(credit.users[u], credit.items[i]);
      const auto hits = oracle::hits_users(a);
      for (std::size_t u = 0; u < hits.size(); ++u)
        worst_hits = std::max(worst_hits, std::abs(hits[u] - r.user_scores[u]));
    }
  }
  c.check(unconverged == 0, std::to_string(unconverged) + " runs did not converge in 250 iterations");
  c.check(worst_hits <= 1e-6, "exponent-0 vs HITS " + fmt_double(worst_hits));

  std::vector<Annotation> two{{"early", "i", "t", 1}, {"late", "i", "t", 2}};
  const auto tidx = index_of(two);
  const auto r = spear_scores(credit_matrix(tidx, "t"));
  c.check(r.score(*tidx.find_user("early")) > r.score(*tidx.find_user("late")), "earlier tagger ranks higher");

  std::mt19937_64 rng2(5);
  const auto idx = index_of(fmtest::random_corpus(rng2, 60, 40, 8, 3000));
  SpearOptions opts;
  opts.min_users = 2;
  const auto run = run_spear(idx, opts);
  double worst_mean = 0, worst_sd = 0;
  for (const auto& t : run.per_tag) {
    const double n = static_cast<double>(t.user_scores.size());
    double m = 0, v = 0;
    for (double x : t.user_scores) m += x / n;
    for (double x : t.user_scores) v += (x - m) * (x - m) / n;
    if (v <= 0) continue;
    double zm = 0, zv = 0;
    for (double x : t.user_scores) zm += (x - m) / std::sqrt(v) / n;
    for (double x : t.user_scores) zv += std::pow((x - m) / std::sqrt(v) - zm, 2) / n;
    worst_mean = std::max(worst_mean, std::abs(zm));
    worst_sd = std::max(worst_sd, std::abs(std::sqrt(zv) - 1));
  }
  c.check(worst_mean <= 1e-9 && worst_sd <= 1e-9, "z-score moments");
  c.note("max iterations " + std::to_string(max_iter) + "; HITS diff " + fmt_double(worst_hits));
  return c.report();
}

bool consensus_expertise_criterion() {
  Criterion c("Consensus expertise");
  std::mt19937_64 rng(17);
  const auto ridx = index_of(fmtest::random_corpus(rng, 80, 60, 12, 5000), true);
  bool bounded = true;
  for (const auto& s : all_consensus_expertise(ridx)) bounded &= s.score >= 0.0 && s.score <= 1.0;
  for (const auto& rec : ridx.records()) {
    const double e = annotation_score(ridx, rec.user, rec.item, rec.tag);
    bounded &= e >= 0.0 && e <= 1.0;
  }
  c.check(bounded, "scores within [0,1]");

  std::vector<Annotation> top;
  for (int i = 0; i < 5; ++i) {
    const std::string item = "i" + std::to_string(i);
    add(top, "me", item, "top");
    for (int k = 0; k < 20; ++k) add(top, "o" + std::to_string(k), item, "top");
    for (int k = 0; k < 3; ++k) add(top, "p" + std::to_string(k), item, "rare");
  }
  const auto tidx = index_of(top);
  const auto me = user_consensus_expertise(tidx, *tidx.find_user("me"));
  c.check(me && *me == 1.0, "always-top-tag user scores 1.0");

  std::vector<Annotation> rj;
  for (int k = 0; k < 5; ++k) add(rj, "r" + std::to_string(k), "x", "rock");
  for (int k = 0; k < 2; ++k) add(rj, "j" + std::to_string(k), "x", "jazz");
  const auto jidx = index_of(rj);
  c.check(annotation_score(jidx, "j0", "x", "jazz") == 0.2, "{rock:5,jazz:2} jazz user scores 0.2");

  std::vector<Annotation> edge;
  add(edge, "solo", "mine", "t");
  add(edge, "me", "x", "rock");
  add(edge, "me", "x", "jazz");
  add(edge, "o", "x", "rock");
  const auto eidx = index_of(edge);
  c.check(!annotation_weight(eidx, *eidx.find_user("solo"), *eidx.find_item("mine")).has_value(),
          "argument 0 excludes the item");
  const auto w1 = annotation_weight(eidx, *eidx.find_user("me"), *eidx.find_item("x"));
  c.check(w1 && *w1 == 0.0, "argument 1 weighs 0");
  return c.report();
}

bool taxonomy_criterion() {
  Criterion c("Taxonomy");
  auto tags_of = [](const FolksonomyIndex& idx) {
    std::vector<TagId> out;
    for (std::uint32_t t = 0; t < idx.tag_count(); ++t) out.push_back(TagId(t));
    return out;
  };
  {
    std::vector<Annotation> d;
    for (int i = 0; i < 100; ++i) add(d, "u" + std::to_string(i % 7), "i" + std::to_string(i), "rock");
    for (int i = 0; i < 10; ++i) add(d, "v" + std::to_string(i % 3), "i" + std::to_string(i), "classic rock");
    const auto idx = index_of(d);
    const auto tags = tags_of(idx);
    const auto f = induce_forest(conditional_table(idx, tags, 10), 0.8);
    const auto parent = f.parent[idx.find_tag("classic rock")->value];
    c.check(parent && idx.name(*parent) == "rock", "classic rock is a sub-class of rock");
  }
  {
    std::mt19937_64 rng(23);
    int cyclic = 0;
    std::size_t edges = 0;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Annotation> d;
      std::uniform_real_distribution<double> p(0, 1);
      std::vector<double> rate(12);
      std::vector<int> par(12, -1);
      for (int t = 0; t < 12; ++t) {
        rate[t] = p(rng);
        if (t > 0 && p(rng) < 0.7) par[t] = static_cast<int>(rng() % t);
      }
      for (int i = 0; i < 200; ++i) {
        std::vector<bool> has(12, false);
        for (int t = 0; t < 12; ++t) {
          if (par[t] >= 0 && !has[par[t]] && p(rng) < 0.9) continue;
          has[t] = p(rng) < rate[t];
          if (has[t]) add(d, "u" + std::to_string(rng() % 20), "i" + std::to_string(i), "t" + std::to_string(t));
        }
      }
      const auto idx = index_of(d);
      const auto tags = tags_of(idx);
      const auto f = induce_forest(conditional_table(idx, tags, 1 + rng() % 4), 0.7 + 0.2 * p(rng));
      edges += f.edges();
      for (auto t : tags) {
        std::size_t steps = 0;
        for (auto cur = t; f.parent[cur.value]; cur = *f.parent[cur.value])
          if (++steps > tags.size()) {
            ++cyclic;
            break;
          }
      }
    }
    c.check(cyclic == 0, std::to_string(cyclic) + " cycles");
    c.note("50 random tables with " + std::to_string(edges) + " edges");
  }
  {
    std::vector<Annotation> d;
    for (int i = 0; i < 100; ++i) add(d, "u", "i" + std::to_string(i), "a");
    for (int i = 64; i < 104; ++i) add(d, "u", "i" + std::to_string(i), "b");
    for (int i = 84; i < 104; ++i) add(d, "u", "i" + std::to_string(i), "c");
    const auto idx = index_of(d);
    const auto tags = tags_of(idx);
    const auto f = induce_forest(conditional_table(idx, tags, 1), 0.8);
    c.check(f.norm_depth[idx.find_tag("a")->value] == 0.0 && f.norm_depth[idx.find_tag("b")->value] == 0.5 &&
                f.norm_depth[idx.find_tag("c")->value] == 1.0,
            "chain norm depths {0, 0.5, 1}");
  }
  {
    std::vector<Annotation> d;
    for (int k : {1, 3, 9})
      for (int u = 0; u < 4; ++u) {
        const std::string user = "tier" + std::to_string(k) + "_" + std::to_string(u);
        for (int i = 0; i < 9 * k; ++i) add(d, user, user + "_i" + std::to_string(i), "a");
        for (int leaf = 1; leaf <= k; ++leaf)
          add(d, user, user + "_i" + std::to_string(leaf), "c" + std::to_string(leaf));
      }
    const auto idx = index_of(d);
    const auto tags = tags_of(idx);
    const auto f = induce_forest(conditional_table(idx, tags, 1), 0.8);
    const auto vocab = depth_by_bin(idx, f, {2.0, 1.0, 14.0}, DepthMode::vocabulary);
    const auto ann = depth_by_bin(idx, f, {2.0, 1.0, 14.0}, DepthMode::annotation);
    bool rising = vocab.rows.size() == 3, flat = ann.rows.size() == 3;
    for (std::size_t k = 1; k < vocab.rows.size(); ++k) rising &= vocab.rows[k].mean > vocab.rows[k - 1].mean;
    for (const auto& r : ann.rows) flat &= std::abs(r.mean - ann.rows[0].mean) < 1e-12;
    c.check(rising && flat, "vocabulary rises while annotation stays flat");
  }
  return c.report();
}

bool determinism_criterion(const fs::path& work) {
  Criterion c("End-to-end determinism");
  const std::string tool = FOLKMETRICS_TOOL;
  const auto corpus = work / "det.tsv";
  const auto gen = run_child("'" + tool + "' synth --users 2000 --seed 42 --out " + quoted(corpus));
  c.check(gen.status == 0, "synth exit " + std::to_string(gen.status));
  for (const char* name : {"a", "b"}) {
    const auto r = run_child("'" + tool + "' report " + quoted(corpus) + " --out-dir " + quoted(work / name) +
                             " 2>/dev/null");
    c.check(r.status == 0, std::string("report ") + name + " exit " + std::to_string(r.status));
  }
  std::size_t files = 0, differing = 0;
  if (fs::exists(work / "a")) {
    for (const auto& e : fs::directory_iterator(work / "a")) {
      ++files;
      if (slurp(e.path()) != slurp(work / "b" / e.path().filename())) ++differing;
    }
  }
  c.check(files > 0 && differing == 0, std::to_string(differing) + " of " + std::to_string(files) + " files differ");
  c.note(std::to_string(files) + " files byte-identical");
  return c.report();
}

bool performance_criterion(const fs::path& work) {
  Criterion c("Performance");
  const std::string tool = FOLKMETRICS_TOOL;
  const auto corpus = work / "perf.tsv";
  const auto gen = run_child("'" + tool + "' synth --users 250000 --items 200000 --tags 50000 --seed 5 --limit 1000000"
                             " --out " + quoted(corpus));
  c.check(gen.status == 0, "synth exit " + std::to_string(gen.status));
  std::size_t lines = 0;
  {
    std::ifstream f(corpus);
    std::string line;
    while (std::getline(f, line)) ++lines;
  }
  c.check(lines == 1000000, "corpus has " + std::to_string(lines) + " annotations");
  const auto r = run_child("exec '" + tool + "' report " + quoted(corpus) + " --out-dir " + quoted(work / "perf") +
                           " 2>/dev/null");
  c.check(r.status == 0, "report exit " + std::to_string(r.status));
  c.check(r.seconds < 60.0, "wall " + fmt_double(r.seconds) + " s");
  c.check(r.peak_mb < 2048.0, "peak " + fmt_double(r.peak_mb) + " MB");
  c.note("1M annotations in " + fmt_double(r.seconds) + " s, peak " + fmt_double(r.peak_mb) + " MB, " +
         std::to_string(std::thread::hardware_concurrency()) + " cores");
  return c.report();
}

}  // namespace

int main() {
  const auto work = fs::temp_directory_path() / ("folkmetrics-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::function<bool()>> criteria{
      gini_criterion,
      partition_criterion,
      similarity_criterion,
      consensus_criterion,
      motivation_criterion,
      spear_criterion,
      consensus_expertise_criterion,
      taxonomy_criterion,
      [&] { return determinism_criterion(work); },
      [&] { return performance_criterion(work); },
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    try {
      if (!criterion()) ++failed;
    } catch (const std::exception& e) {
      std::cout << "FAIL (exception: " << e.what() << ")" << std::endl;
      ++failed;
    }
  }
  fs::remove_all(work);
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
