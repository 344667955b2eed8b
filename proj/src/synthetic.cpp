#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "folkmetrics/corpus.hpp"
#include "folkmetrics/errors.hpp"

namespace folkmetrics {
namespace {

// Uniform double in (0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

// P(k) proportional to k^-exponent on 1..size, sampled by inverse CDF.
class ZipfTable {
 public:
  ZipfTable(std::uint32_t size, double exponent) : cdf_(size) {
    double total = 0.0;
    for (std::uint32_t k = 0; k < size; ++k) {
      total += std::pow(static_cast<double>(k + 1), -exponent);
      cdf_[k] = total;
    }
    for (auto& c : cdf_) c /= total;
  }

  // Returns a rank in [1, size].
  std::uint32_t operator()(std::mt19937_64& rng) const {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto k = static_cast<std::uint32_t>(it - cdf_.begin());
    return std::min<std::uint32_t>(k, static_cast<std::uint32_t>(cdf_.size()) - 1) + 1;
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

void validate(const SyntheticConfig& c) {
  if (c.n_users < 1 || c.n_items < 1 || c.n_tags < 1 || c.max_user_annotations < 1)
    throw DomainError("synthetic config counts must be >= 1");
  if (!(c.activity_exponent > 0) || !(c.item_popularity_exponent > 0) || !(c.tag_popularity_exponent > 0))
    throw DomainError("synthetic config exponents must be > 0");
  if (c.time_span < 1) throw DomainError("synthetic config time span must be >= 1");
}

std::vector<Annotation> generate_synthetic(const SyntheticConfig& config) {
  validate(config);
  std::mt19937_64 rng(config.seed);
  const ZipfTable activity(config.max_user_annotations, config.activity_exponent);
  const ZipfTable items(config.n_items, config.item_popularity_exponent);
  const ZipfTable tags(config.n_tags, config.tag_popularity_exponent);
  const auto span = static_cast<std::uint64_t>(config.time_span);

  std::vector<std::uint32_t> volume(config.n_users);
  for (auto& v : volume) v = activity(rng);

  std::vector<Annotation> out;
  std::size_t total = 0;
  for (auto v : volume) total += v;
  out.reserve(total);
  for (std::uint32_t u = 0; u < config.n_users; ++u) {
    const std::string user = "u" + std::to_string(u);
    for (std::uint32_t k = 0; k < volume[u]; ++k) {
      std::string item = "i" + std::to_string(items(rng));
      std::string tag = "t" + std::to_string(tags(rng));
      const auto time = static_cast<std::int64_t>(rng() % span);
      out.push_back(Annotation{user, std::move(item), std::move(tag), time});
    }
  }
  return out;
}

}  // namespace folkmetrics
