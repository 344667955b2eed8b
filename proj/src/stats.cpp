#include "folkmetrics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "folkmetrics/errors.hpp"

namespace folkmetrics {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) hold ranks i+1..j+1.
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw UndefinedCorrelation("correlation needs at least two points");

  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = x[i] - mx;
    const long double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw UndefinedCorrelation("correlation of a constant vector");
  const long double r = sxy / std::sqrt(sxx * syy);
  return static_cast<double>(std::clamp<long double>(r, -1.0L, 1.0L));
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("spearman: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double cosine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("cosine: length mismatch");
  long double dot = 0, nx = 0, ny = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += static_cast<long double>(x[i]) * y[i];
    nx += static_cast<long double>(x[i]) * x[i];
    ny += static_cast<long double>(y[i]) * y[i];
  }
  if (nx == 0 || ny == 0) throw DomainError("cosine of a zero vector");
  const long double c = dot / (std::sqrt(nx) * std::sqrt(ny));
  return static_cast<double>(std::clamp<long double>(c, -1.0L, 1.0L));
}

MeanStderr mean_stderr(std::span<const double> values) {
  MeanStderr out;
  out.n = values.size();
  if (values.empty()) return out;
  long double sum = 0;
  double lo = values[0], hi = values[0];
  for (double v : values) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const long double mean = sum / values.size();
  out.mean = std::clamp(static_cast<double>(mean), lo, hi);
  if (values.size() > 1) {
    long double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const long double sd = std::sqrt(ss / (values.size() - 1));
    out.stderr = static_cast<double>(sd / std::sqrt(static_cast<long double>(values.size())));
  }
  return out;
}

}  // namespace folkmetrics
