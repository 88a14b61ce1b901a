#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "p3/jpeg/types.hpp"
#include "p3/pixel/pixel_image.hpp"
#include "p3/psp/pipeline.hpp"
#include "p3/split/split.hpp"

namespace p3::metrics {

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// 10 log10(255^2 / MSE) over every sample of every plane; +inf when equal.
/// Throws Errc::DimensionMismatch.
double psnr(const pixel::PixelImage& a, const pixel::PixelImage& b);
double psnr(const pixel::Plane& a, const pixel::Plane& b);

struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> edges;  // 0 or 1, row-major

  std::uint8_t at(int x, int y) const { return edges[static_cast<std::size_t>(y) * width + x]; }
  std::size_t count() const;
};

struct CannyParams {
  double low = 0.1;   // fraction of the maximum gradient magnitude
  double high = 0.3;
  double sigma = 1.4;
};

/// Gaussian blur, Sobel, non-maximum suppression, hysteresis (8-connected).
EdgeMap canny(const pixel::Plane& luma, const CannyParams& params = {});
/// Runs on plane 0.
EdgeMap canny(const pixel::PixelImage& img, const CannyParams& params = {});

/// Fraction of the original's edge pixels that are also edges in `candidate`
/// (recall). 0 when the original has no edges. Throws Errc::DimensionMismatch.
double edge_match(const EdgeMap& original, const EdgeMap& candidate);
double edge_match(const pixel::PixelImage& original, const pixel::PixelImage& candidate,
                  const CannyParams& params = {});

/// Counts of |AC| values over all components; index = magnitude, capped at 2048.
std::vector<std::uint64_t> abs_ac_histogram(const jpeg::QuantizedImage& img);

/// Most frequent nonzero |AC|, ties to the larger value.
/// Throws Errc::NoNonzeroCoefficients.
int guess_threshold(const jpeg::QuantizedImage& public_part);

/// Expected squared error of guessing `g` for a coefficient of magnitude `m`
/// with an equiprobable sign: ((m-g)^2 + (m+g)^2) / 2.
std::int64_t sign_guess_mse(std::int64_t m, std::int64_t g);

struct NamedImage {
  std::string name;
  std::vector<std::uint8_t> bytes;
};

struct SweepRow {
  std::string image;
  int threshold = 0;
  std::size_t original_bytes = 0;
  std::size_t public_bytes = 0;
  std::size_t secret_bytes = 0;
  double size_public = 0;  // fractions of original_bytes
  double size_secret = 0;
  double size_total = 0;
  double psnr_public = 0;  // NaN when quality metrics are off
  double edge_match = 0;
};

struct Summary {
  double mean = 0;
  double stdev = 0;  // population
};

struct ThresholdSummary {
  int threshold = 0;
  std::size_t images = 0;
  Summary size_public, size_secret, size_total, psnr_public, edge_match;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<ThresholdSummary> summary;  // ascending T
  /// Threshold of maximum distance below the chord of the mean secret curve.
  int knee = 0;
};

struct SweepOptions {
  bool quality_metrics = true;  // psnr_public and edge_match
  unsigned threads = 0;         // 0 = hardware concurrency
};

SweepReport storage_sweep(const std::vector<NamedImage>& images, const std::vector<int>& thresholds,
                          const SweepOptions& options = {});

/// Knee of a decreasing curve: the x farthest below the straight line
/// joining its end points.
int find_knee(const std::vector<int>& xs, const std::vector<double>& ys);

void write_csv(const SweepReport& report, std::ostream& out);
void write_json_summary(const SweepReport& report, std::ostream& out);

struct BandwidthCost {
  std::size_t public_variant_bytes = 0;
  std::size_t container_bytes = 0;
  std::size_t original_variant_bytes = 0;
  std::int64_t cost = 0;  // public + container - original
};

/// Extra download for viewing a `variant_width`-wide rendition through the
/// mock provider versus viewing the plain original's rendition.
BandwidthCost bandwidth_cost(const jpeg::QuantizedImage& original, Threshold t, int variant_width,
                             const psp::PipelineConfig& cfg = {});

}  // namespace p3::metrics
