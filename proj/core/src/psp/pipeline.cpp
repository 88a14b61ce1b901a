#include "p3/psp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <variant>

#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"
#include "p3/pixel/codec.hpp"

namespace p3::psp {

const std::vector<VariantSpec>& default_variants() {
  static const std::vector<VariantSpec> v{{"small", 130, 130}, {"big", 720, 720}, {"thumb", 75, 75}};
  return v;
}

const VariantSpec* find_variant(std::string_view name) {
  for (const auto& v : default_variants())
    if (v.name == name) return &v;
  return nullptr;
}

std::pair<int, int> fit_within(int w, int h, int max_w, int max_h) {
  if (w <= max_w && h <= max_h) return {w, h};
  const double s = std::min(static_cast<double>(max_w) / w, static_cast<double>(max_h) / h);
  return {std::max(1, static_cast<int>(std::lround(w * s))), std::max(1, static_cast<int>(std::lround(h * s)))};
}

pixel::TransformSpec variant_transform(int src_w, int src_h, const VariantSpec& v, const PipelineConfig& cfg) {
  const auto [w, h] = fit_within(src_w, src_h, v.max_w, v.max_h);
  if (w == src_w && h == src_h && !cfg.sharpen) return pixel::TransformSpec::identity();
  return pixel::TransformSpec{{pixel::Resize{w, h, cfg.filter, cfg.sharpen}}};
}

namespace {

std::vector<std::uint8_t> transcode(const jpeg::QuantizedImage& original, const pixel::TransformSpec& a,
                                    const std::vector<jpeg::QuantTable>& tables, const std::vector<int>& table_ids) {
  const auto pixels = pixel::decode_to_pixels(original, pixel::SampleMode::Conventional);
  const auto out = pixel::apply_transform(pixels, a);
  return jpeg::encode_jpeg(pixel::quantize_pixels(out, tables, table_ids));
}

}  // namespace

std::vector<std::uint8_t> render_with_quality(const jpeg::QuantizedImage& original, const pixel::TransformSpec& a,
                                              int quality) {
  return transcode(original, a, pixel::standard_quant_tables(quality), {});
}

std::vector<std::uint8_t> render_variant(const jpeg::QuantizedImage& original, const VariantSpec& v,
                                         const PipelineConfig& cfg) {
  return render_with_quality(original, variant_transform(original.width, original.height, v, cfg), cfg.quality);
}

std::string DynamicRequest::query() const {
  std::string q;
  auto add = [&](const std::string& kv) { q += (q.empty() ? "" : "&") + kv; };
  if (w) add("w=" + std::to_string(*w));
  if (h) add("h=" + std::to_string(*h));
  if (crop)
    add("crop=" + std::to_string(crop->x) + "," + std::to_string(crop->y) + "," + std::to_string(crop->w) + "," +
        std::to_string(crop->h));
  return q;
}

pixel::TransformSpec dynamic_transform(const DynamicRequest& r, int src_w, int src_h, int mcu_w, int mcu_h) {
  pixel::TransformSpec spec;
  int w = src_w;
  int h = src_h;
  if (r.crop) {
    const auto& c = *r.crop;
    if (c.w < 1 || c.h < 1 || c.x < 0 || c.y < 0 || c.x > src_w - c.w || c.y > src_h - c.h)
      fail(Errc::GeometryError, "crop rectangle outside the image");
    const auto snapped = pixel::snap_crop(c, src_w, src_h, mcu_w, mcu_h);
    if (snapped != pixel::Crop{0, 0, src_w, src_h}) spec.steps.push_back(snapped);
    w = snapped.w;
    h = snapped.h;
  }
  if (r.w || r.h) {
    if ((r.w && *r.w < 1) || (r.h && *r.h < 1)) fail(Errc::GeometryError, "resize target must be positive");
    const int tw = r.w ? *r.w : std::max(1, static_cast<int>(std::lround(static_cast<double>(*r.h) * w / h)));
    const int th = r.h ? *r.h : std::max(1, static_cast<int>(std::lround(static_cast<double>(*r.w) * h / w)));
    if (tw > 65535 || th > 65535) fail(Errc::GeometryError, "resize target too large");
    if (tw != w || th != h) spec.steps.push_back(pixel::Resize{tw, th, pixel::Filter::Bilinear, std::nullopt});
  }
  return spec;
}

pixel::TransformSpec dynamic_transform(const DynamicRequest& r, const jpeg::QuantizedImage& src) {
  return dynamic_transform(r, src.width, src.height, 8 * src.max_h_sampling(), 8 * src.max_v_sampling());
}

namespace {

std::optional<jpeg::QuantizedImage> coefficient_crop(const jpeg::QuantizedImage& img, const pixel::TransformSpec& a) {
  if (a.steps.size() != 1) return std::nullopt;
  const auto* c = std::get_if<pixel::Crop>(&a.steps.front());
  const int mw = 8 * img.max_h_sampling();
  const int mh = 8 * img.max_v_sampling();
  if (!c || c->x % mw || c->y % mh || c->w < 1 || c->h < 1 || c->x + c->w > img.width || c->y + c->h > img.height)
    return std::nullopt;
  jpeg::QuantizedImage out = img;
  out.width = c->w;
  out.height = c->h;
  out.restart_interval.reset();
  out.metadata.clear();
  for (std::size_t k = 0; k < img.components.size(); ++k) {
    const int bx0 = c->x / mw * img.components[k].h_sampling;
    const int by0 = c->y / mh * img.components[k].v_sampling;
    jpeg::BlockGrid g(out.component_blocks_wide(k), out.component_blocks_high(k));
    for (int by = 0; by < g.blocks_high; ++by)
      for (int bx = 0; bx < g.blocks_wide; ++bx) g.at(bx, by) = img.blocks[k].at(bx0 + bx, by0 + by);
    out.blocks[k] = std::move(g);
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> render_dynamic(const jpeg::QuantizedImage& original, const pixel::TransformSpec& a) {
  if (auto cropped = coefficient_crop(original, a)) return jpeg::encode_jpeg(*cropped);
  std::vector<int> ids;
  for (const auto& c : original.components) ids.push_back(c.quant_table_id);
  return transcode(original, a, original.quant_tables, ids);
}

}  // namespace p3::psp
