#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace folkmetrics {

// Ascending ranks starting at 1; tied values share the average of the ranks
// they span.
std::vector<double> average_ranks(std::span<const double> values);

// Throws UndefinedCorrelation for length < 2 or a constant side, and
// DomainError for mismatched lengths.
double pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of average-tie ranks.
double spearman(std::span<const double> x, std::span<const double> y);

// dot(x, y) / (|x| |y|). Throws DomainError for a zero vector or mismatched lengths.
double cosine(std::span<const double> x, std::span<const double> y);

struct MeanStderr {
  double mean = 0.0;
  double stderr = 0.0;  // sample standard deviation / sqrt(n); 0 when n == 1
  std::size_t n = 0;
};

MeanStderr mean_stderr(std::span<const double> values);

}  // namespace folkmetrics
