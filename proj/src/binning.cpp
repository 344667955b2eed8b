#include "folkmetrics/binning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "folkmetrics/errors.hpp"
#include "folkmetrics/stats.hpp"

namespace folkmetrics {

void validate(const BinSpec& spec) {
  if (!(spec.base > 1.0)) throw DomainError("bin base must be > 1");
  if (!(spec.exponent_step > 0.0) || spec.exponent_step > spec.max_exponent)
    throw DomainError("bin step must satisfy 0 < step <= max");
}

BinSpec parse_bin_spec(std::string_view text) {
  BinSpec spec;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto part = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw DomainError("bad bin spec term: " + std::string(part));
    const auto key = part.substr(0, eq);
    const std::string value(part.substr(eq + 1));
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw DomainError("bad bin spec value: " + value);
    }
    if (key == "base") {
      spec.base = v;
    } else if (key == "step") {
      spec.exponent_step = v;
    } else if (key == "max") {
      spec.max_exponent = v;
    } else {
      throw DomainError("unknown bin spec key: " + std::string(key));
    }
  }
  validate(spec);
  return spec;
}

std::vector<double> log_bins(const BinSpec& spec) {
  validate(spec);
  const auto steps = static_cast<std::size_t>(std::floor(spec.max_exponent / spec.exponent_step + 1e-9));
  std::vector<double> edges;
  edges.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double exponent = std::round(static_cast<double>(k) * spec.exponent_step * 1e9) / 1e9;
    edges.push_back(std::pow(spec.base, exponent));
  }
  return edges;
}

std::size_t BinnedSeries::total_count() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.n;
  return n;
}

LogBinner::LogBinner(const BinSpec& spec) : edges_(log_bins(spec)) {}

std::size_t LogBinner::locate(double key) const {
  if (key < 0 || std::isnan(key)) throw DomainError("bin keys must be non-negative");
  return static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), key) - edges_.begin());
}

double LogBinner::low(std::size_t bin) const { return bin == 0 ? 0.0 : edges_[bin - 1]; }

double LogBinner::high(std::size_t bin) const {
  return bin < edges_.size() ? edges_[bin] : std::numeric_limits<double>::infinity();
}

BinnedSeries binned_mean(std::span<const KeyedValue> values, const BinSpec& spec) {
  const LogBinner binner(spec);
  std::vector<std::size_t> bins(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) bins[i] = binner.locate(values[i].key);

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return bins[a] < bins[b]; });

  BinnedSeries series;
  std::vector<double> group;
  for (std::size_t k = 0; k < order.size();) {
    const std::size_t bin = bins[order[k]];
    group.clear();
    for (; k < order.size() && bins[order[k]] == bin; ++k) group.push_back(values[order[k]].value);
    const auto ms = mean_stderr(group);
    series.rows.push_back(BinRow{binner.low(bin), binner.high(bin), ms.mean, ms.stderr, ms.n});
  }
  return series;
}

}  // namespace folkmetrics
