#include <algorithm>
#include <cstdlib>

#include "p3/error.hpp"
#include "p3/metrics/metrics.hpp"

namespace p3::metrics {

std::vector<std::uint64_t> abs_ac_histogram(const jpeg::QuantizedImage& img) {
  std::vector<std::uint64_t> hist(2049, 0);
  for (const auto& grid : img.blocks)
    for (const auto& block : grid.blocks)
      for (int i = 1; i < jpeg::kBlockLen; ++i) ++hist[std::min(std::abs(static_cast<int>(block[i])), 2048)];
  return hist;
}

int guess_threshold(const jpeg::QuantizedImage& public_part) {
  const auto hist = abs_ac_histogram(public_part);
  int best = 0;
  for (int v = 1; v < static_cast<int>(hist.size()); ++v)
    if (hist[v] > 0 && (best == 0 || hist[v] >= hist[best])) best = v;
  if (best == 0) fail(Errc::NoNonzeroCoefficients, "public part has no nonzero AC coefficient");
  return best;
}

std::int64_t sign_guess_mse(std::int64_t m, std::int64_t g) {
  const std::int64_t minus = m - g;
  const std::int64_t plus = m + g;
  return (minus * minus + plus * plus) / 2;
}

}  // namespace p3::metrics
