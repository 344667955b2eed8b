#include "folkmetrics/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <limits>

#include "folkmetrics/consensus.hpp"
#include "folkmetrics/consensus_expertise.hpp"
#include "folkmetrics/errors.hpp"
#include "folkmetrics/motivation.hpp"
#include "folkmetrics/parallel.hpp"
#include "folkmetrics/partition.hpp"
#include "folkmetrics/similarity.hpp"
#include "folkmetrics/spear.hpp"
#include "folkmetrics/taxonomy.hpp"
#include "output.hpp"
#include "report.hpp"

namespace folkmetrics::cli {
namespace {

char parse_delimiter(const std::string& text) {
  if (text == "tab" || text == "\\t" || text == "\t") return '\t';
  if (text == "comma") return ',';
  if (text == "space") return ' ';
  if (text.size() == 1) return text[0];
  throw CLI::ValidationError("--delimiter", "expected one character, 'tab', 'comma' or 'space'");
}

struct InputArgs {
  std::string path = "-";
  std::string delimiter = "tab";
  std::string granularity = "seconds";
  std::string dedupe = "auto";
  bool header = false;
};

void add_input(CLI::App* cmd, InputArgs& a) {
  cmd->add_option("input", a.path, "Annotation file, or - for stdin")->capture_default_str();
  cmd->add_option("--delimiter", a.delimiter, "Column delimiter: one character, tab, comma or space")
      ->capture_default_str();
  cmd->add_option("--granularity", a.granularity, "Timestamp unit")
      ->check(CLI::IsMember({"seconds", "months"}))
      ->capture_default_str();
  cmd->add_option("--dedupe", a.dedupe, "Collapse repeated (user, item, tag) triples")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->capture_default_str();
  cmd->add_flag("--header", a.header, "Skip the first line");
}

struct Loaded {
  FolksonomyIndex index;
  IngestStats stats;
};

Loaded load(const InputArgs& a, bool dedupe_by_default, std::istream& in) {
  ParseOptions opts;
  opts.delimiter = parse_delimiter(a.delimiter);
  opts.header = a.header;
  opts.granularity = *parse_granularity(a.granularity);
  const bool dedupe = a.dedupe == "auto" ? dedupe_by_default : a.dedupe == "on";

  IndexBuilder builder(opts.granularity);
  Loaded out;
  if (a.path == "-") {
    out.stats = ingest(in, opts, builder);
  } else {
    std::ifstream file(a.path, std::ios::binary);
    if (!file) throw IoError("cannot read " + a.path);
    out.stats = ingest(file, opts, builder);
  }
  out.index = std::move(builder).build(dedupe);
  return out;
}

BinSpec bins_from(const std::string& text) {
  try {
    return parse_bin_spec(text);
  } catch (const Error& e) {
    throw CLI::ValidationError("--bins", e.what());
  }
}

Dimension dimension_from(const std::string& text) { return text == "item" ? Dimension::item : Dimension::tag; }

void add_bins(CLI::App* cmd, std::string& bins) {
  cmd->add_option("--bins", bins, "Log bins as base=B,step=S,max=M")->capture_default_str();
}

void add_fraction(CLI::App* cmd, double& fraction) {
  cmd->add_option("--fraction", fraction, "Annotation share held by supertaggers")
      ->check(CLI::Range(0.0, 1.0).description("in (0, 1]"))
      ->capture_default_str();
}

Partition partition_of(const FolksonomyIndex& index, double fraction) {
  if (index.empty()) throw DomainError("no annotations to analyse");
  return split_supertaggers(index, fraction);
}

void add_spear_options(CLI::App* cmd, SpearOptions& s) {
  cmd->add_option("--top-k", s.top_k, "Most annotated tags considered")->capture_default_str();
  cmd->add_option("--min-users", s.min_users, "Distinct users a tag needs")->capture_default_str();
  cmd->add_option("--exponent", s.exponent, "Credit exponent")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--tolerance", s.tolerance, "Convergence tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iter", s.max_iter, "Iteration cap per tag")->capture_default_str();
}

struct TaxonomyArgs {
  double threshold = 0.8;
  std::uint32_t min_support = 10;
  std::size_t top_k = 10000;
  std::size_t min_users = 10;
};

void add_taxonomy_options(CLI::App* cmd, TaxonomyArgs& a) {
  cmd->add_option("--threshold", a.threshold, "Subsumption probability threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--min-support", a.min_support, "Items two tags must share")->capture_default_str();
  cmd->add_option("--top-k", a.top_k, "Most annotated tags considered")->capture_default_str();
  cmd->add_option("--min-users", a.min_users, "Distinct users a tag needs")->capture_default_str();
}

TaxonomyForest forest_of(const FolksonomyIndex& index, const TaxonomyArgs& a) {
  const auto tags = eligible_tags(index, a.top_k, a.min_users);
  return induce_forest(conditional_table(index, tags, a.min_support), a.threshold);
}

BinnedSeries bin_scores(const FolksonomyIndex& index, std::span<const UserScore> scores, const BinSpec& spec) {
  std::vector<KeyedValue> values;
  values.reserve(scores.size());
  for (const auto& s : scores) values.push_back(KeyedValue{static_cast<double>(index.annotation_count(s.user)), s.score});
  return binned_mean(values, spec);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Folksonomy analytics: supertaggers, vocabulary similarity, consensus, motivation and expertise",
               "folkmetrics"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

  std::function<void()> action;

  // ingest
  InputArgs ingest_in;
  std::string ingest_out = "-", ingest_normalized;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a dataset and print its summary");
  add_input(ingest_cmd, ingest_in);
  ingest_cmd->add_option("--out", ingest_out, "Summary JSON destination")->capture_default_str();
  ingest_cmd->add_option("--normalized", ingest_normalized, "Also write the normalized annotations here");
  ingest_cmd->callback([&] {
    action = [&] {
      const auto data = load(ingest_in, false, in);
      const double g = data.index.empty() ? std::numeric_limits<double>::quiet_NaN() : user_gini(data.index);
      Sink sink(ingest_out, out);
      write_summary_json(sink.stream(), summary(data.index), data.stats, g);
      if (!ingest_normalized.empty()) {
        Sink normalized(ingest_normalized, out);
        std::vector<Annotation> annotations;
        annotations.reserve(data.index.size());
        for (std::size_t p = 0; p < data.index.size(); ++p) annotations.push_back(data.index.annotation(p));
        write_annotations(normalized.stream(), annotations, parse_delimiter(ingest_in.delimiter));
      }
    };
  });

  // synth
  SyntheticConfig synth;
  std::string synth_out = "-";
  std::size_t synth_limit = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic power-law corpus");
  synth_cmd->add_option("--users", synth.n_users)->check(CLI::PositiveNumber)->capture_default_str();
  synth_cmd->add_option("--items", synth.n_items)->check(CLI::PositiveNumber)->capture_default_str();
  synth_cmd->add_option("--tags", synth.n_tags)->check(CLI::PositiveNumber)->capture_default_str();
  synth_cmd->add_option("--activity-exponent", synth.activity_exponent)->capture_default_str();
  synth_cmd->add_option("--item-exponent", synth.item_popularity_exponent)->capture_default_str();
  synth_cmd->add_option("--tag-exponent", synth.tag_popularity_exponent)->capture_default_str();
  synth_cmd->add_option("--max-user-annotations", synth.max_user_annotations)->capture_default_str();
  synth_cmd->add_option("--time-span", synth.time_span)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Seed; FOLKMETRICS_SEED applies when omitted")
      ->envname("FOLKMETRICS_SEED")
      ->capture_default_str();
  synth_cmd->add_option("--limit", synth_limit, "Keep only the first N annotations (0 = all)");
  synth_cmd->add_option("--out", synth_out, "Destination TSV")->capture_default_str();
  synth_cmd->callback([&] {
    action = [&] {
      auto annotations = generate_synthetic(synth);
      if (synth_limit > 0 && annotations.size() > synth_limit) annotations.resize(synth_limit);
      Sink sink(synth_out, out);
      write_annotations(sink.stream(), annotations);
    };
  });

  // partition
  InputArgs part_in;
  double part_fraction = 0.5;
  std::string part_out = "-", part_users_dir, part_summary, part_pareto;
  std::size_t part_resolution = 101;
  auto* part_cmd = app.add_subcommand("partition", "Split users into supertaggers and others");
  add_input(part_cmd, part_in);
  add_fraction(part_cmd, part_fraction);
  part_cmd->add_option("--out", part_out, "Partition JSON destination")->capture_default_str();
  part_cmd->add_option("--users-dir", part_users_dir, "Write the user lists to files in this directory");
  part_cmd->add_option("--summary", part_summary, "Per-group summary CSV destination");
  part_cmd->add_option("--pareto", part_pareto, "Pareto curve CSV destination");
  part_cmd->add_option("--pareto-points", part_resolution, "Pareto curve resolution")->capture_default_str();
  part_cmd->callback([&] {
    action = [&] {
      const auto data = load(part_in, false, in);
      const auto p = partition_of(data.index, part_fraction);
      {
        Sink sink(part_out, out);
        write_partition_json(sink.stream(), data.index, p, user_gini(data.index), part_users_dir);
      }
      if (!part_summary.empty()) {
        Sink sink(part_summary, out);
        write_partition_summary_csv(sink.stream(), partition_summary(data.index, p));
      }
      if (!part_pareto.empty()) {
        Sink sink(part_pareto, out);
        write_pareto_csv(sink.stream(), pareto_curve(data.index, part_resolution));
      }
    };
  });

  // similarity
  InputArgs sim_in;
  double sim_fraction = 0.5;
  std::string sim_dimension = "tag", sim_out = "-";
  std::size_t sim_max_n = 100000;
  auto* sim_cmd = app.add_subcommand("similarity", "Top-N rank correlation and cosine between the two groups");
  add_input(sim_cmd, sim_in);
  add_fraction(sim_cmd, sim_fraction);
  sim_cmd->add_option("--dimension", sim_dimension)->check(CLI::IsMember({"tag", "item"}))->capture_default_str();
  sim_cmd->add_option("--max-n", sim_max_n, "Largest N on the grid")->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--out", sim_out)->capture_default_str();
  sim_cmd->callback([&] {
    action = [&] {
      const auto data = load(sim_in, false, in);
      const auto p = partition_of(data.index, sim_fraction);
      const auto curve = similarity_curve(data.index, p, dimension_from(sim_dimension), default_n_grid(sim_max_n));
      Sink sink(sim_out, out);
      write_similarity_csv(sink.stream(), curve);
      err << "core size: " << curve.core_size << '\n';
    };
  });

  // usage-dist
  InputArgs usage_in;
  double usage_fraction = 0.5;
  std::string usage_dimension = "tag", usage_out = "-";
  bool usage_cumulative = false;
  auto* usage_cmd = app.add_subcommand("usage-dist", "Annotation share by key popularity for each group");
  add_input(usage_cmd, usage_in);
  add_fraction(usage_cmd, usage_fraction);
  usage_cmd->add_option("--dimension", usage_dimension)->check(CLI::IsMember({"tag", "item"}))->capture_default_str();
  usage_cmd->add_flag("--cumulative", usage_cumulative, "Share on keys used at least N times");
  usage_cmd->add_option("--out", usage_out)->capture_default_str();
  usage_cmd->callback([&] {
    action = [&] {
      const auto data = load(usage_in, false, in);
      const auto p = partition_of(data.index, usage_fraction);
      const auto dim = dimension_from(usage_dimension);
      const auto s = usage_distribution(freq_dist(data.index, p.supertaggers, dim), usage_cumulative);
      const auto n = usage_distribution(freq_dist(data.index, p.others, dim), usage_cumulative);
      Sink sink(usage_out, out);
      write_usage_csv(sink.stream(), s, n);
    };
  });

  // exo-diff
  InputArgs exo_in;
  double exo_fraction = 0.5;
  std::string exo_popularity, exo_pop_delimiter = "tab", exo_bins = "base=2,step=0.1,max=14", exo_out = "-";
  auto* exo_cmd = app.add_subcommand("exo-diff", "Group annotation difference by exogenous item popularity");
  add_input(exo_cmd, exo_in);
  add_fraction(exo_cmd, exo_fraction);
  exo_cmd->add_option("--popularity", exo_popularity, "Item popularity file: item<delimiter>count")->required();
  exo_cmd->add_option("--popularity-delimiter", exo_pop_delimiter)->capture_default_str();
  add_bins(exo_cmd, exo_bins);
  exo_cmd->add_option("--out", exo_out)->capture_default_str();
  exo_cmd->callback([&] {
    action = [&] {
      const auto spec = bins_from(exo_bins);
      const auto data = load(exo_in, false, in);
      const auto p = partition_of(data.index, exo_fraction);
      std::ifstream file(exo_popularity, std::ios::binary);
      if (!file) throw IoError("cannot read " + exo_popularity);
      const auto popularity = parse_popularity(file, data.index, parse_delimiter(exo_pop_delimiter));
      Sink sink(exo_out, out);
      write_exo_csv(sink.stream(), exogenous_popularity_diff(data.index, p, popularity, spec));
    };
  });

  // consensus
  InputArgs cons_in;
  double cons_fraction = 0.5;
  std::string cons_bins = "base=2,step=0.1,max=14", cons_out = "-";
  auto* cons_cmd = app.add_subcommand("consensus", "Per-item agreement between the two groups");
  add_input(cons_cmd, cons_in);
  add_fraction(cons_cmd, cons_fraction);
  add_bins(cons_cmd, cons_bins);
  cons_cmd->add_option("--out", cons_out)->capture_default_str();
  cons_cmd->callback([&] {
    action = [&] {
      const auto spec = bins_from(cons_bins);
      const auto data = load(cons_in, false, in);
      const auto p = partition_of(data.index, cons_fraction);
      const auto series = consensus_by_bin(data.index, p, spec);
      Sink sink(cons_out, out);
      write_consensus_csv(sink.stream(), series);
    };
  });

  // motivation
  InputArgs mot_in;
  std::string mot_bins = "base=2,step=0.1,max=14", mot_per_user, mot_binned;
  double mot_divisor = 100.0;
  auto* mot_cmd = app.add_subcommand("motivation", "Tags per post, tag/resource ratio and orphan ratio");
  add_input(mot_cmd, mot_in);
  add_bins(mot_cmd, mot_bins);
  mot_cmd->add_option("--orphan-divisor", mot_divisor)->check(CLI::PositiveNumber)->capture_default_str();
  mot_cmd->add_option("--per-user", mot_per_user, "Per-user CSV destination");
  mot_cmd->add_option("--binned", mot_binned, "Binned CSV destination (stdout when neither is given)");
  mot_cmd->callback([&] {
    action = [&] {
      const auto spec = bins_from(mot_bins);
      const auto data = load(mot_in, true, in);
      if (!mot_per_user.empty()) {
        Sink sink(mot_per_user, out);
        write_motivation_per_user_csv(sink.stream(), data.index, all_motivation_scores(data.index, mot_divisor));
      }
      if (!mot_binned.empty() || mot_per_user.empty()) {
        Sink sink(mot_binned, out);
        write_motivation_binned_csv(sink.stream(), motivation_by_bin(data.index, spec, mot_divisor));
      }
    };
  });

  // spear
  InputArgs spear_in;
  SpearOptions spear_opts;
  std::string spear_bins = "base=2,step=0.1,max=14", spear_out, spear_binned;
  auto* spear_cmd = app.add_subcommand("spear", "SPEAR discoverer expertise averaged over tags");
  add_input(spear_cmd, spear_in);
  add_spear_options(spear_cmd, spear_opts);
  add_bins(spear_cmd, spear_bins);
  spear_cmd->add_option("--out", spear_out, "Per-user CSV destination (stdout by default)");
  spear_cmd->add_option("--binned", spear_binned, "Binned CSV destination");
  spear_cmd->callback([&] {
    action = [&] {
      const auto spec = bins_from(spear_bins);
      const auto data = load(spear_in, true, in);
      const auto run = run_spear(data.index, spear_opts);
      if (run.unconverged_tags > 0) {
        err << "warning: SPEAR did not converge on " << run.unconverged_tags << " of " << run.per_tag.size()
            << " tags\n";
      }
      if (!spear_out.empty() || spear_binned.empty()) {
        Sink sink(spear_out, out);
        write_user_scores_csv(sink.stream(), data.index, run.user_means);
      }
      if (!spear_binned.empty()) {
        Sink sink(spear_binned, out);
        write_binned_csv(sink.stream(), spear_by_bin(data.index, run, spec));
      }
    };
  });

  // expertise
  auto* exp_cmd = app.add_subcommand("expertise", "Consensus-based or taxonomy-depth expertise");
  exp_cmd->require_subcommand(1);

  InputArgs ce_in;
  std::string ce_bins = "base=2,step=0.1,max=14", ce_per_user, ce_binned, ce_frequency = "users";
  auto* ce_cmd = exp_cmd->add_subcommand("consensus", "Agreement of a user's tags with each item's consensus");
  add_input(ce_cmd, ce_in);
  add_bins(ce_cmd, ce_bins);
  ce_cmd->add_option("--frequency", ce_frequency, "Count tag frequency by distinct users or raw annotations")
      ->check(CLI::IsMember({"users", "annotations"}))
      ->capture_default_str();
  ce_cmd->add_option("--per-user", ce_per_user, "Per-user CSV destination");
  ce_cmd->add_option("--binned", ce_binned, "Binned CSV destination (stdout when neither is given)");
  ce_cmd->callback([&] {
    action = [&] {
      const auto spec = bins_from(ce_bins);
      const auto data = load(ce_in, true, in);
      const auto mode = ce_frequency == "users" ? FrequencyMode::distinct_users : FrequencyMode::raw_annotations;
      const auto scores = all_consensus_expertise(data.index, mode);
      if (!ce_per_user.empty()) {
        Sink sink(ce_per_user, out);
        write_user_scores_csv(sink.stream(), data.index, scores);
      }
      if (!ce_binned.empty() || ce_per_user.empty()) {
        Sink sink(ce_binned, out);
        write_binned_csv(sink.stream(), bin_scores(data.index, scores, spec));
      }
    };
  });

  InputArgs depth_in;
  std::string depth_bins = "base=2,step=0.1,max=14", depth_per_user, depth_binned, depth_mode = "annotation";
  TaxonomyArgs depth_tax;
  auto* depth_cmd = exp_cmd->add_subcommand("depth", "Mean normalized taxonomy depth of a user's tags");
  add_input(depth_cmd, depth_in);
  add_bins(depth_cmd, depth_bins);
  add_taxonomy_options(depth_cmd, depth_tax);
  depth_cmd->add_option("--mode", depth_mode)->check(CLI::IsMember({"annotation", "vocabulary"}))->capture_default_str();
  depth_cmd->add_option("--per-user", depth_per_user, "Per-user CSV destination");
  depth_cmd->add_option("--binned", depth_binned, "Binned CSV destination (stdout when neither is given)");
  depth_cmd->callback([&] {
    action = [&] {
      const auto spec = bins_from(depth_bins);
      const auto data = load(depth_in, true, in);
      const auto forest = forest_of(data.index, depth_tax);
      const auto mode = depth_mode == "vocabulary" ? DepthMode::vocabulary : DepthMode::annotation;
      const auto scores = all_depth_expertise(data.index, forest, mode);
      if (!depth_per_user.empty()) {
        Sink sink(depth_per_user, out);
        write_user_scores_csv(sink.stream(), data.index, scores);
      }
      if (!depth_binned.empty() || depth_per_user.empty()) {
        Sink sink(depth_binned, out);
        write_binned_csv(sink.stream(), bin_scores(data.index, scores, spec));
      }
    };
  });

  // taxonomy
  InputArgs tax_in;
  TaxonomyArgs tax;
  std::string tax_out = "-";
  auto* tax_cmd = app.add_subcommand("taxonomy", "Induce a tag forest from co-occurrence");
  add_input(tax_cmd, tax_in);
  add_taxonomy_options(tax_cmd, tax);
  tax_cmd->add_option("--out", tax_out)->capture_default_str();
  tax_cmd->callback([&] {
    action = [&] {
      const auto data = load(tax_in, true, in);
      const auto forest = forest_of(data.index, tax);
      Sink sink(tax_out, out);
      write_forest_json(sink.stream(), data.index, forest, tax.threshold, tax.min_support,
                        connected_coverage(data.index, forest));
    };
  });

  // report
  InputArgs rep_in;
  ReportOptions rep;
  std::string rep_out_dir = rep.out_dir.string(), rep_bins = "base=2,step=0.1,max=14", rep_pop_delimiter = "tab";
  auto* rep_cmd = app.add_subcommand("report", "Run every analysis and write the full bundle");
  add_input(rep_cmd, rep_in);
  rep_cmd->add_option("--out-dir", rep_out_dir, "Bundle directory")->capture_default_str();
  add_fraction(rep_cmd, rep.fraction);
  add_bins(rep_cmd, rep_bins);
  rep_cmd->add_option("--popularity", rep.popularity_path, "Item popularity file for exo_diff.csv");
  rep_cmd->add_option("--popularity-delimiter", rep_pop_delimiter)->capture_default_str();
  rep_cmd->add_option("--max-n", rep.max_n, "Largest N on the similarity grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rep_cmd->add_option("--orphan-divisor", rep.orphan_divisor)->check(CLI::PositiveNumber)->capture_default_str();
  add_spear_options(rep_cmd, rep.spear);
  rep_cmd->add_option("--threshold", rep.threshold, "Subsumption probability threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  rep_cmd->add_option("--min-support", rep.min_support, "Items two tags must share")->capture_default_str();
  rep_cmd->callback([&] {
    action = [&] {
      rep.bins = bins_from(rep_bins);
      rep.out_dir = rep_out_dir;
      rep.popularity_delimiter = parse_delimiter(rep_pop_delimiter);
      const auto data = load(rep_in, false, in);
      run_report(data.index, data.stats, rep, err);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "Run with --help for usage.\n";
    return 2;
  }

  try {
    set_thread_count(threads);
    if (action) action();
    return 0;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace folkmetrics::cli
