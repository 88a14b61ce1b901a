#include "p3/pixel/pixel_image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "p3/error.hpp"

namespace p3::pixel {

bool PixelImage::same_geometry(const PixelImage& other) const {
  if (width != other.width || height != other.height || planes.size() != other.planes.size()) return false;
  for (std::size_t i = 0; i < planes.size(); ++i)
    if (planes[i].width != other.planes[i].width || planes[i].height != other.planes[i].height) return false;
  return true;
}

void PixelImage::validate() const {
  if (planes.size() != 1 && planes.size() != 3) fail(Errc::GeometryError, "image must have 1 or 3 planes");
  if (width < 1 || height < 1) fail(Errc::GeometryError, "empty image");
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const auto& p = planes[i];
    if (max_h % p.h_sampling || max_v % p.v_sampling)
      fail(Errc::GeometryError, "plane sampling does not divide the maximum sampling factor");
    if (p.width != plane_width_for(p.h_sampling) || p.height != plane_height_for(p.v_sampling))
      fail(Errc::GeometryError, "plane " + std::to_string(i) + " dimensions inconsistent with sampling");
    if (p.samples.size() != static_cast<std::size_t>(p.width) * p.height)
      fail(Errc::GeometryError, "plane storage size mismatch");
    if (mode == SampleMode::Conventional) {
      const auto [lo, hi] = std::minmax_element(p.samples.begin(), p.samples.end());
      if (lo != p.samples.end() && (*lo < 0 || *hi > 255))
        fail(Errc::GeometryError, "conventional sample outside [0,255]");
    }
  }
}

PixelImage make_image(int width, int height, int planes, SampleMode mode, std::int16_t fill) {
  PixelImage img;
  img.width = width;
  img.height = height;
  img.mode = mode;
  for (int i = 0; i < planes; ++i) img.planes.emplace_back(width, height, 1, 1, fill);
  return img;
}

PlaneF to_float(const Plane& p) {
  PlaneF f(p.width, p.height);
  std::transform(p.samples.begin(), p.samples.end(), f.samples.begin(), [](std::int16_t v) { return static_cast<double>(v); });
  return f;
}

Plane to_int(const PlaneF& p, bool conventional, int h_sampling, int v_sampling) {
  Plane out(p.width, p.height, h_sampling, v_sampling);
  const double lo = conventional ? 0.0 : -32768.0;
  const double hi = conventional ? 255.0 : 32767.0;
  std::transform(p.samples.begin(), p.samples.end(), out.samples.begin(),
                 [&](double v) { return static_cast<std::int16_t>(std::clamp(std::round(v), lo, hi)); });
  return out;
}

}  // namespace p3::pixel
