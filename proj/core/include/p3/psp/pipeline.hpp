#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "p3/jpeg/types.hpp"
#include "p3/pixel/transform.hpp"

namespace p3::psp {

/// A static size the provider materializes at upload time.
struct VariantSpec {
  std::string name;
  int max_w = 0;
  int max_h = 0;
};

/// small 130x130, big 720x720, thumb 75x75.
const std::vector<VariantSpec>& default_variants();
const VariantSpec* find_variant(std::string_view name);

/// Largest size with the source aspect ratio that fits the box. Images
/// already inside the box keep their size.
std::pair<int, int> fit_within(int w, int h, int max_w, int max_h);

/// How the provider renders static variants. Clients are not told this;
/// they recover it with calibrate_transform.
struct PipelineConfig {
  int quality = 85;
  pixel::Filter filter = pixel::Filter::Bilinear;
  std::optional<double> sharpen;
};

/// The exact operator the provider applies for a static variant.
pixel::TransformSpec variant_transform(int src_w, int src_h, const VariantSpec& v, const PipelineConfig& cfg);

/// decode -> resize -> re-encode at cfg.quality with standard tables.
std::vector<std::uint8_t> render_variant(const jpeg::QuantizedImage& original, const VariantSpec& v,
                                         const PipelineConfig& cfg);

/// Parameters of an on-demand request (?w=&h=&crop=x,y,w,h).
struct DynamicRequest {
  std::optional<int> w;
  std::optional<int> h;
  std::optional<pixel::Crop> crop;

  bool empty() const { return !w && !h && !crop; }
  /// Query string without the leading '?'.
  std::string query() const;
};

/// Crop then resize. The crop must lie inside the source and is snapped to
/// the (mcu_w x mcu_h) grid, i.e. to 8x8 block boundaries in every
/// component. A missing w or h follows the aspect ratio of the cropped
/// region. Throws Errc::GeometryError.
pixel::TransformSpec dynamic_transform(const DynamicRequest& r, int src_w, int src_h, int mcu_w = 8, int mcu_h = 8);
/// Same, taking the grid from the image's sampling factors.
pixel::TransformSpec dynamic_transform(const DynamicRequest& r, const jpeg::QuantizedImage& src);

/// A crop on the MCU grid is done losslessly on the coefficients. Anything
/// else is applied in the pixel domain and re-encoded with the source's own
/// quantization tables, as a transcoding proxy would.
std::vector<std::uint8_t> render_dynamic(const jpeg::QuantizedImage& original, const pixel::TransformSpec& a);

/// Re-encodes after `a` with quality-scaled standard tables.
std::vector<std::uint8_t> render_with_quality(const jpeg::QuantizedImage& original, const pixel::TransformSpec& a,
                                              int quality);

}  // namespace p3::psp
