#include "p3/pixel/color.hpp"

#include <algorithm>
#include <cmath>

#include "p3/error.hpp"

namespace p3::pixel {

namespace {

std::int16_t clamp_round(double v) { return static_cast<std::int16_t>(std::clamp(std::round(v), 0.0, 255.0)); }

}  // namespace

PixelImage upsample_chroma(const PixelImage& img) {
  img.validate();
  PixelImage out = img;
  out.max_h = 1;
  out.max_v = 1;
  for (std::size_t i = 0; i < img.planes.size(); ++i) {
    const auto& p = img.planes[i];
    if (p.width == img.width && p.height == img.height) {
      out.planes[i].h_sampling = out.planes[i].v_sampling = 1;
      continue;
    }
    const int fx = img.max_h / p.h_sampling;
    const int fy = img.max_v / p.v_sampling;
    Plane up(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) up.at(x, y) = p.at(std::min(x / fx, p.width - 1), std::min(y / fy, p.height - 1));
    out.planes[i] = std::move(up);
  }
  return out;
}

PixelImage ycbcr_to_rgb(const PixelImage& img) {
  if (img.colorspace != ColorSpace::YCbCr) fail(Errc::Validation, "image is not YCbCr");
  if (img.mode != SampleMode::Conventional) fail(Errc::Validation, "color conversion needs conventional samples");
  PixelImage out = upsample_chroma(img);
  out.colorspace = ColorSpace::RGB;
  if (out.planes.size() == 1) return out;
  auto& p0 = out.planes[0];
  auto& p1 = out.planes[1];
  auto& p2 = out.planes[2];
  for (std::size_t i = 0; i < p0.samples.size(); ++i) {
    const double y = p0.samples[i];
    const double cb = p1.samples[i] - 128.0;
    const double cr = p2.samples[i] - 128.0;
    p0.samples[i] = clamp_round(y + 1.402 * cr);
    p1.samples[i] = clamp_round(y - 0.344136 * cb - 0.714136 * cr);
    p2.samples[i] = clamp_round(y + 1.772 * cb);
  }
  return out;
}

PixelImage rgb_to_ycbcr(const PixelImage& img) {
  if (img.colorspace != ColorSpace::RGB) fail(Errc::Validation, "image is not RGB");
  if (img.mode != SampleMode::Conventional) fail(Errc::Validation, "color conversion needs conventional samples");
  PixelImage out = upsample_chroma(img);
  out.colorspace = ColorSpace::YCbCr;
  if (out.planes.size() == 1) return out;
  auto& p0 = out.planes[0];
  auto& p1 = out.planes[1];
  auto& p2 = out.planes[2];
  for (std::size_t i = 0; i < p0.samples.size(); ++i) {
    const double r = p0.samples[i];
    const double g = p1.samples[i];
    const double b = p2.samples[i];
    p0.samples[i] = clamp_round(0.299 * r + 0.587 * g + 0.114 * b);
    p1.samples[i] = clamp_round(-0.168736 * r - 0.331264 * g + 0.5 * b + 128.0);
    p2.samples[i] = clamp_round(0.5 * r - 0.418688 * g - 0.081312 * b + 128.0);
  }
  return out;
}

}  // namespace p3::pixel
