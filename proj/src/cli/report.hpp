#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "folkmetrics/binning.hpp"
#include "folkmetrics/corpus.hpp"
#include "folkmetrics/spear.hpp"

namespace folkmetrics::cli {

struct ReportOptions {
  std::filesystem::path out_dir = "folkmetrics-report";
  double fraction = 0.5;
  BinSpec bins;
  std::string popularity_path;  // exo_diff.csv is written only when set
  char popularity_delimiter = '\t';
  std::size_t max_n = 100000;
  double orphan_divisor = 100.0;
  SpearOptions spear;
  double threshold = 0.8;
  std::uint32_t min_support = 10;
  std::size_t pareto_resolution = 101;
};

// Runs every analysis and writes the bundle. Raw analyses use `raw`; the
// expertise and motivation analyses use its deduplicated view. An analysis
// whose input is out of its domain leaves a header-only file and a warning.
void run_report(const FolksonomyIndex& raw, const IngestStats& ingest, const ReportOptions& options, std::ostream& err);

}  // namespace folkmetrics::cli
