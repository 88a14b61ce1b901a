#pragma once

#include <cstdint>
#include <vector>

namespace p3::pixel {

enum class SampleMode {
  Conventional,  // samples in [0, 255]
  Residual,      // signed, unclamped, no level shift
};

enum class ColorSpace { YCbCr, RGB };

/// One raster. h_sampling/v_sampling are the JPEG sampling factors of the
/// plane, relative to PixelImage::max_h / max_v.
struct Plane {
  int width = 0;
  int height = 0;
  int h_sampling = 1;
  int v_sampling = 1;
  std::vector<std::int16_t> samples;

  Plane() = default;
  Plane(int w, int h, int hs = 1, int vs = 1, std::int16_t fill = 0)
      : width(w), height(h), h_sampling(hs), v_sampling(vs), samples(static_cast<std::size_t>(w) * h, fill) {}

  std::int16_t& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
  std::int16_t at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }

  bool operator==(const Plane&) const = default;
};

/// 1 (gray) or 3 planes. Chroma planes may be subsampled; plane i has
/// dimensions ceil(width * h_i / max_h) x ceil(height * v_i / max_v).
struct PixelImage {
  int width = 0;
  int height = 0;
  int max_h = 1;
  int max_v = 1;
  SampleMode mode = SampleMode::Conventional;
  ColorSpace colorspace = ColorSpace::YCbCr;
  std::vector<Plane> planes;

  /// Expected dimensions of a plane with the given sampling factors.
  int plane_width_for(int h_sampling) const { return (width * h_sampling + max_h - 1) / max_h; }
  int plane_height_for(int v_sampling) const { return (height * v_sampling + max_v - 1) / max_v; }

  bool same_geometry(const PixelImage& other) const;

  /// Throws Errc::GeometryError on inconsistent plane sizes or
  /// out-of-range conventional samples.
  void validate() const;

  bool operator==(const PixelImage&) const = default;
};

/// Single-plane or three-plane image at full resolution.
PixelImage make_image(int width, int height, int planes, SampleMode mode = SampleMode::Conventional,
                      std::int16_t fill = 0);

/// Floating-point raster used internally by linear operators so intermediate
/// results are not rounded.
struct PlaneF {
  int width = 0;
  int height = 0;
  std::vector<double> samples;

  PlaneF() = default;
  PlaneF(int w, int h, double fill = 0.0) : width(w), height(h), samples(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
};

PlaneF to_float(const Plane& p);
/// Rounds to nearest; clamps to [0,255] when `conventional`, else saturates to int16.
Plane to_int(const PlaneF& p, bool conventional, int h_sampling = 1, int v_sampling = 1);

}  // namespace p3::pixel
