#include "report.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "folkmetrics/consensus.hpp"
#include "folkmetrics/consensus_expertise.hpp"
#include "folkmetrics/errors.hpp"
#include "folkmetrics/motivation.hpp"
#include "folkmetrics/partition.hpp"
#include "folkmetrics/similarity.hpp"
#include "folkmetrics/taxonomy.hpp"
#include "output.hpp"

namespace folkmetrics::cli {
namespace {

class Bundle {
 public:
  Bundle(std::filesystem::path dir, std::ostream& err) : dir_(std::move(dir)), err_(err) {
    std::filesystem::create_directories(dir_);
  }

  // Writes one file. When compute throws DomainError, the fallback writer
  // produces the header-only form instead.
  void write(const std::string& name, const std::function<void(std::ostream&)>& body,
             const std::function<void(std::ostream&)>& fallback) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir_ / name).string());
    std::ostringstream buffer;
    try {
      body(buffer);
    } catch (const DomainError& e) {
      err_ << "warning: " << name << ": " << e.what() << '\n';
      buffer.str({});
      fallback(buffer);
    }
    out << buffer.str();
    if (!out) throw IoError("cannot write " + (dir_ / name).string());
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    write(name, body, [](std::ostream&) {});
  }

 private:
  std::filesystem::path dir_;
  std::ostream& err_;
};

void empty_binned(std::ostream& out) { write_binned_csv(out, {}); }

}  // namespace

void run_report(const FolksonomyIndex& raw, const IngestStats& ingest, const ReportOptions& o, std::ostream& err) {
  if (raw.empty()) throw DomainError("no annotations to analyse");
  Bundle bundle(o.out_dir, err);

  const double gini_value = user_gini(raw);
  const Partition partition = split_supertaggers(raw, o.fraction);

  bundle.write("summary.json", [&](std::ostream& out) { write_summary_json(out, summary(raw), ingest, gini_value); });
  bundle.write("partition.json", [&](std::ostream& out) {
    write_partition_json(out, raw, partition, gini_value);
  });
  bundle.write("partition_summary.csv",
               [&](std::ostream& out) { write_partition_summary_csv(out, partition_summary(raw, partition)); });
  bundle.write("pareto.csv", [&](std::ostream& out) { write_pareto_csv(out, pareto_curve(raw, o.pareto_resolution)); });

  const auto grid = default_n_grid(o.max_n);
  for (const auto dim : {Dimension::tag, Dimension::item}) {
    const std::string suffix = dim == Dimension::tag ? "tags" : "items";
    const bool cumulative = dim == Dimension::item;
    bundle.write("usage_" + suffix + ".csv", [&](std::ostream& out) {
      const auto s = usage_distribution(freq_dist(raw, partition.supertaggers, dim), cumulative);
      const auto n = usage_distribution(freq_dist(raw, partition.others, dim), cumulative);
      write_usage_csv(out, s, n);
    });
    bundle.write(
        "similarity_" + suffix + ".csv",
        [&](std::ostream& out) { write_similarity_csv(out, similarity_curve(raw, partition, dim, grid)); },
        [](std::ostream& out) { write_similarity_csv(out, {}); });
  }

  if (!o.popularity_path.empty()) {
    std::ifstream in(o.popularity_path, std::ios::binary);
    if (!in) throw IoError("cannot read " + o.popularity_path);
    const auto popularity = parse_popularity(in, raw, o.popularity_delimiter);
    bundle.write(
        "exo_diff.csv",
        [&](std::ostream& out) { write_exo_csv(out, exogenous_popularity_diff(raw, partition, popularity, o.bins)); },
        [](std::ostream& out) { write_exo_csv(out, {}); });
  }

  bundle.write(
      "consensus.csv", [&](std::ostream& out) { write_consensus_csv(out, consensus_by_bin(raw, partition, o.bins)); },
      [](std::ostream& out) { write_consensus_csv(out, {}); });

  const FolksonomyIndex dedup = deduplicated(raw);

  const auto motivation = all_motivation_scores(dedup, o.orphan_divisor);
  bundle.write("motivation_per_user.csv",
               [&](std::ostream& out) { write_motivation_per_user_csv(out, dedup, motivation); });
  bundle.write(
      "motivation_binned.csv",
      [&](std::ostream& out) { write_motivation_binned_csv(out, motivation_by_bin(dedup, o.bins, o.orphan_divisor)); },
      [](std::ostream& out) { write_motivation_binned_csv(out, {}); });

  SpearRun spear;
  bool spear_ok = true;
  try {
    spear = run_spear(dedup, o.spear);
    if (spear.unconverged_tags > 0) {
      err << "warning: SPEAR did not converge on " << spear.unconverged_tags << " of " << spear.per_tag.size()
          << " tags\n";
    }
  } catch (const DomainError& e) {
    err << "warning: spear: " << e.what() << '\n';
    spear_ok = false;
  }
  bundle.write("spear_per_user.csv", [&](std::ostream& out) { write_user_scores_csv(out, dedup, spear.user_means); });
  bundle.write(
      "spear_binned.csv",
      [&](std::ostream& out) {
        if (!spear_ok) throw DomainError("no eligible tags");
        write_binned_csv(out, spear_by_bin(dedup, spear, o.bins));
      },
      empty_binned);

  const auto consensus_scores = all_consensus_expertise(dedup);
  bundle.write("consensus_expertise_per_user.csv",
               [&](std::ostream& out) { write_user_scores_csv(out, dedup, consensus_scores); });
  bundle.write("consensus_expertise_binned.csv", [&](std::ostream& out) {
    std::vector<KeyedValue> values;
    for (const auto& s : consensus_scores) {
      values.push_back(KeyedValue{static_cast<double>(dedup.annotation_count(s.user)), s.score});
    }
    write_binned_csv(out, binned_mean(values, o.bins));
  });

  // The taxonomy considers the tags SPEAR scored.
  const auto tags = eligible_tags(dedup, o.spear.top_k, o.spear.min_users);
  const auto forest = induce_forest(conditional_table(dedup, tags, o.min_support), o.threshold);
  bundle.write("forest.json", [&](std::ostream& out) {
    write_forest_json(out, dedup, forest, o.threshold, o.min_support, connected_coverage(dedup, forest));
  });
  for (const auto mode : {DepthMode::vocabulary, DepthMode::annotation}) {
    bundle.write("depth_" + std::string(to_string(mode)) + ".csv",
                 [&](std::ostream& out) { write_binned_csv(out, depth_by_bin(dedup, forest, o.bins, mode)); });
  }
}

}  // namespace folkmetrics::cli
