#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace folkmetrics {

// Bins cut at base^i for i = 0, step, 2*step, ..., max_exponent.
struct BinSpec {
  double base = 2.0;
  double exponent_step = 0.1;
  double max_exponent = 14.0;
};

void validate(const BinSpec& spec);

// Parses "base=2,step=0.1,max=14"; keys may be given in any order or omitted.
BinSpec parse_bin_spec(std::string_view text);

// Edges base^(k*step). Exponents are snapped to 1e-9 so integer exponents
// give exact powers.
std::vector<double> log_bins(const BinSpec& spec);

struct BinRow {
  double low = 0.0;
  double high = 0.0;
  double mean = 0.0;
  double stderr = 0.0;
  std::size_t n = 0;
};

// Contiguous bins in ascending order; empty bins are omitted.
struct BinnedSeries {
  std::vector<BinRow> rows;

  std::size_t total_count() const;
};

// Locates keys against a fixed edge list. Keys below the first edge fall into
// [0, edge_0); keys at or beyond the last edge fall into [edge_last, inf).
class LogBinner {
 public:
  explicit LogBinner(const BinSpec& spec);

  // Bin ordinal: 0 is the underflow bin, k >= 1 is [edge_{k-1}, edge_k).
  std::size_t locate(double key) const;
  std::size_t bin_count() const { return edges_.size() + 1; }
  double low(std::size_t bin) const;
  double high(std::size_t bin) const;
  const std::vector<double>& edges() const { return edges_; }

 private:
  std::vector<double> edges_;
};

struct KeyedValue {
  double key = 0.0;
  double value = 0.0;
};

// Per-bin mean and standard error of the values, grouped by key.
BinnedSeries binned_mean(std::span<const KeyedValue> values, const BinSpec& spec);

}  // namespace folkmetrics
