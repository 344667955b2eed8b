#include "output.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "folkmetrics/errors.hpp"

namespace folkmetrics::cli {

using Json = nlohmann::ordered_json;

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);
}

Sink::Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
  if (path.empty() || path == "-") return;
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  file_ = std::make_unique<std::ofstream>(p, std::ios::binary);
  if (!*file_) throw IoError("cannot write " + path);
  stream_ = file_.get();
}

namespace {

std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json count_summary(const CountSummary& s) { return Json{{"median", s.median}, {"q25", s.q25}, {"q75", s.q75}}; }

}  // namespace

void write_binned_csv(std::ostream& out, const BinnedSeries& series) {
  out << "bin_low,bin_high,mean,stderr,n\n";
  for (const auto& r : series.rows) {
    out << fmt::format("{},{},{},{},{}\n", format_number(r.low), format_number(r.high), format_number(r.mean),
                       format_number(r.stderr), r.n);
  }
}

void write_exo_csv(std::ostream& out, const BinnedSeries& series) {
  out << "bin_low,bin_high,mean_diff,stderr,n\n";
  for (const auto& r : series.rows) {
    out << fmt::format("{},{},{},{},{}\n", format_number(r.low), format_number(r.high), format_number(r.mean),
                       format_number(r.stderr), r.n);
  }
}

void write_consensus_csv(std::ostream& out, const ConsensusSeries& series) {
  out << "bin_low,bin_high,top_match_rate,top_match_stderr,cosine_mean,cosine_stderr,n\n";
  // Both series bin the same items, so rows line up.
  for (std::size_t k = 0; k < series.top_match.rows.size(); ++k) {
    const auto& m = series.top_match.rows[k];
    const auto& c = series.cosine.rows[k];
    out << fmt::format("{},{},{},{},{},{},{}\n", format_number(m.low), format_number(m.high), format_number(m.mean),
                       format_number(m.stderr), format_number(c.mean), format_number(c.stderr), m.n);
  }
}

void write_motivation_binned_csv(std::ostream& out, const MotivationSeries& series) {
  out << "bin_low,bin_high,tpp_mean,tpp_stderr,trr_mean,trr_stderr,orphan_ratio_mean,orphan_ratio_stderr,n\n";
  for (std::size_t k = 0; k < series.tpp.rows.size(); ++k) {
    const auto& a = series.tpp.rows[k];
    const auto& b = series.trr.rows[k];
    const auto& c = series.orphan_ratio.rows[k];
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", format_number(a.low), format_number(a.high),
                       format_number(a.mean), format_number(a.stderr), format_number(b.mean),
                       format_number(b.stderr), format_number(c.mean), format_number(c.stderr), a.n);
  }
}

void write_motivation_per_user_csv(std::ostream& out, const FolksonomyIndex& index,
                                   std::span<const MotivationScores> scores) {
  out << "user,annotations,tpp,trr,orphan_ratio\n";
  for (const auto& s : scores) {
    out << fmt::format("{},{},{},{},{}\n", quote_csv(index.name(s.user)), index.annotation_count(s.user),
                       format_number(s.tpp), format_number(s.trr), format_number(s.orphan_ratio));
  }
}

void write_user_scores_csv(std::ostream& out, const FolksonomyIndex& index, std::span<const UserScore> scores) {
  out << "user,annotations,score\n";
  for (const auto& s : scores) {
    out << fmt::format("{},{},{}\n", quote_csv(index.name(s.user)), index.annotation_count(s.user),
                       format_number(s.score));
  }
}

void write_similarity_csv(std::ostream& out, const SimilarityCurve& curve) {
  out << "N,rho,cosine,coverage\n";
  for (const auto& p : curve.points) {
    out << fmt::format("{},{},{},{}\n", p.n, format_number(p.rho), format_number(p.cosine),
                       format_number(p.coverage));
  }
}

void write_usage_csv(std::ostream& out, std::span<const UsagePoint> supertaggers, std::span<const UsagePoint> others) {
  out << "group,N,proportion\n";
  for (const auto& p : supertaggers) out << fmt::format("supertaggers,{},{}\n", p.popularity, format_number(p.proportion));
  for (const auto& p : others) out << fmt::format("others,{},{}\n", p.popularity, format_number(p.proportion));
}

void write_pareto_csv(std::ostream& out, std::span<const ParetoPoint> curve) {
  out << "user_fraction,annotation_fraction\n";
  for (const auto& p : curve) out << fmt::format("{},{}\n", format_number(p.users), format_number(p.annotations));
}

void write_partition_summary_csv(std::ostream& out, const PartitionSummary& s) {
  out << "group,users,annotations,total_tags,unique_tags,shared_tags,total_items,unique_items,shared_items,"
         "annotations_median,annotations_q25,annotations_q75,tags_median,tags_q25,tags_q75,"
         "items_median,items_q25,items_q75\n";
  auto row = [&](std::string_view name, const GroupSummary& g) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", name, g.users, g.annotations,
                       g.total_tags, g.unique_tags, s.shared_tags, g.total_items, g.unique_items, s.shared_items,
                       g.per_user_annotations.median, g.per_user_annotations.q25, g.per_user_annotations.q75,
                       g.per_user_tags.median, g.per_user_tags.q25, g.per_user_tags.q75, g.per_user_items.median,
                       g.per_user_items.q25, g.per_user_items.q75);
  };
  row("supertaggers", s.supertaggers);
  row("others", s.others);
}

void write_partition_json(std::ostream& out, const FolksonomyIndex& index, const Partition& p, double gini_value,
                          const std::filesystem::path& users_dir) {
  Json j;
  j["target_fraction"] = p.target_fraction;
  j["annotation_threshold"] = p.annotation_threshold;
  j["total_annotations"] = p.total_annotations;
  j["supertagger_annotations"] = p.supertagger_annotations;
  j["supertagger_count"] = p.supertaggers.size();
  j["other_count"] = p.others.size();
  j["supertagger_user_fraction"] =
      static_cast<double>(p.supertaggers.size()) / static_cast<double>(index.user_count());
  j["gini"] = gini_value;

  auto names = [&](const std::vector<UserId>& users) {
    std::vector<std::string> out;
    out.reserve(users.size());
    for (auto u : users) out.push_back(index.name(u));
    return out;
  };
  if (users_dir.empty()) {
    j["supertaggers"] = names(p.supertaggers);
    j["others"] = names(p.others);
  } else {
    std::filesystem::create_directories(users_dir);
    auto dump = [&](const std::string& file, const std::vector<UserId>& users) {
      std::ofstream f(users_dir / file, std::ios::binary);
      if (!f) throw IoError("cannot write " + (users_dir / file).string());
      for (auto u : users) f << index.name(u) << '\n';
    };
    dump("supertaggers.txt", p.supertaggers);
    dump("others.txt", p.others);
    j["supertaggers_file"] = (users_dir / "supertaggers.txt").string();
    j["others_file"] = (users_dir / "others.txt").string();
  }
  out << j.dump(2) << '\n';
}

void write_summary_json(std::ostream& out, const DatasetSummary& s, const IngestStats& ingest, double gini_value) {
  Json j;
  j["lines"] = ingest.lines;
  j["malformed_lines"] = ingest.malformed;
  j["taggers"] = s.taggers;
  j["tags"] = s.tags;
  j["items"] = s.items;
  j["annotations"] = s.annotations;
  j["annotations_per_user"] = count_summary(s.per_user);
  j["annotations_per_tag"] = count_summary(s.per_tag);
  j["annotations_per_item"] = count_summary(s.per_item);
  j["user_gini"] = gini_value;
  out << j.dump(2) << '\n';
}

void write_forest_json(std::ostream& out, const FolksonomyIndex& index, const TaxonomyForest& forest, double threshold,
                       std::uint32_t min_support, double coverage) {
  Json j;
  j["threshold"] = threshold;
  j["min_support"] = min_support;
  j["considered_tags"] = forest.nodes.size();
  j["connected_tags"] = forest.nodes.size() - forest.disconnected.size();
  j["edges"] = forest.edges();
  j["max_raw_depth"] = forest.max_raw_depth();
  j["connected_annotation_coverage"] = coverage;
  Json nodes = Json::array();
  for (auto t : forest.nodes) {
    if (!forest.connected[t.value]) continue;
    Json node;
    node["tag"] = index.name(t);
    const auto& parent = forest.parent[t.value];
    node["parent"] = parent ? Json(index.name(*parent)) : Json(nullptr);
    node["raw_depth"] = forest.raw_depth[t.value];
    node["norm_depth"] = forest.norm_depth[t.value];
    nodes.push_back(std::move(node));
  }
  j["nodes"] = std::move(nodes);
  Json disconnected = Json::array();
  for (auto t : forest.disconnected) disconnected.push_back(index.name(t));
  j["disconnected"] = std::move(disconnected);
  out << j.dump(2) << '\n';
}

}  // namespace folkmetrics::cli
