#include <cmath>

#include "p3/error.hpp"
#include "p3/metrics/metrics.hpp"

namespace p3::metrics {

namespace {

double from_sums(double sq, std::size_t n) {
  if (sq == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(255.0 * 255.0 / (sq / static_cast<double>(n)));
}

double squared_error(const pixel::Plane& a, const pixel::Plane& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double d = static_cast<double>(a.samples[i]) - b.samples[i];
    s += d * d;
  }
  return s;
}

}  // namespace

double psnr(const pixel::Plane& a, const pixel::Plane& b) {
  if (a.width != b.width || a.height != b.height) fail(Errc::DimensionMismatch, "planes differ in size");
  return from_sums(squared_error(a, b), a.samples.size());
}

double psnr(const pixel::PixelImage& a, const pixel::PixelImage& b) {
  if (!a.same_geometry(b)) fail(Errc::DimensionMismatch, "images differ in geometry");
  if (a.mode != pixel::SampleMode::Conventional || b.mode != pixel::SampleMode::Conventional)
    fail(Errc::Validation, "psnr needs conventional samples");
  double sq = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.planes.size(); ++i) {
    sq += squared_error(a.planes[i], b.planes[i]);
    n += a.planes[i].samples.size();
  }
  return from_sums(sq, n);
}

}  // namespace p3::metrics
