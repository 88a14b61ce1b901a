#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "p3/pixel/pixel_image.hpp"

namespace p3::pixel {

enum class Filter { Nearest, Bilinear, Box };

std::string_view to_string(Filter f);
Filter parse_filter(std::string_view name);

struct Identity {
  bool operator==(const Identity&) const = default;
};

/// Rectangle in full-resolution pixel coordinates.
struct Crop {
  int x = 0, y = 0, w = 0, h = 0;
  bool operator==(const Crop&) const = default;
};

struct Resize {
  int w = 0, h = 0;
  Filter filter = Filter::Bilinear;
  /// Unsharp amount applied after resampling: x + s * (x - blur(x)).
  std::optional<double> sharpen;
  bool operator==(const Resize&) const = default;
};

using Step = std::variant<Identity, Crop, Resize>;

/// The provider operator A as an ordered list of linear steps.
/// Text form: steps joined by '+', each one of
///   identity | crop:x,y,w,h | resize:WxH:filter[:sharpen]
struct TransformSpec {
  std::vector<Step> steps;

  static TransformSpec identity() { return {}; }
  static TransformSpec parse(std::string_view text);
  std::string to_string() const;

  /// Full-resolution output size for a given input size; throws GeometryError
  /// when a step does not fit.
  std::pair<int, int> output_size(int width, int height) const;

  bool operator==(const TransformSpec&) const = default;
};

/// Snaps a crop rectangle to a block grid (nearest boundary, 8x8 by default)
/// and clips it to the image. A rectangle that reaches the right or bottom
/// edge keeps the edge.
Crop snap_crop(const Crop& c, int width, int height, int grid_w = 8, int grid_h = 8);

/// Real-valued image with per-plane sampling, used so chained linear steps
/// and sums of decoded parts are rounded only once.
struct FloatImage {
  int width = 0;
  int height = 0;
  int max_h = 1;
  int max_v = 1;
  std::vector<PlaneF> planes;
  std::vector<std::pair<int, int>> sampling;  // (h, v) per plane
};

FloatImage to_float(const PixelImage& img);
/// Rounds to nearest; conventional mode clamps to [0,255].
PixelImage to_pixels(const FloatImage& img, SampleMode mode, ColorSpace cs = ColorSpace::YCbCr);

/// Each step is applied to every plane at the plane's own resolution. No
/// clamping happens between steps.
FloatImage apply_transform(FloatImage img, const TransformSpec& spec);
PixelImage apply_transform(const PixelImage& img, const TransformSpec& spec);

}  // namespace p3::pixel
