#include <algorithm>
#include <cmath>

#include "p3/pixel/codec.hpp"
#include "p3/pixel/dct.hpp"

namespace p3::pixel {

namespace {

template <typename Sink>
void for_each_pixel_block(const jpeg::QuantizedImage& img, std::size_t c, Sink&& sink) {
  const auto& table = img.table_for(c);
  const auto& grid = img.blocks[c];
  std::array<double, 64> q{};
  for (int n = 0; n < 64; ++n) q[n] = table.at_natural(n);
  BlockF coeffs{};
  for (int by = 0; by < grid.blocks_high; ++by)
    for (int bx = 0; bx < grid.blocks_wide; ++bx) {
      const auto& block = grid.at(bx, by);
      for (int n = 0; n < 64; ++n) coeffs[n] = block[n] * q[n];
      sink(bx, by, idct_block(coeffs));
    }
}

}  // namespace

std::vector<PlaneF> decode_residual_planes(const jpeg::QuantizedImage& img) {
  std::vector<PlaneF> planes;
  for (std::size_t c = 0; c < img.components.size(); ++c) {
    PlaneF plane(img.component_width(c), img.component_height(c));
    for_each_pixel_block(img, c, [&](int bx, int by, const BlockF& s) {
      const int x0 = bx * 8;
      const int y0 = by * 8;
      const int xn = std::min(8, plane.width - x0);
      const int yn = std::min(8, plane.height - y0);
      for (int y = 0; y < yn; ++y)
        for (int x = 0; x < xn; ++x) plane.at(x0 + x, y0 + y) = s[y * 8 + x];
    });
    planes.push_back(std::move(plane));
  }
  return planes;
}

PixelImage decode_to_pixels(const jpeg::QuantizedImage& img, SampleMode mode) {
  PixelImage out;
  out.width = img.width;
  out.height = img.height;
  out.max_h = img.max_h_sampling();
  out.max_v = img.max_v_sampling();
  out.mode = mode;
  out.colorspace = ColorSpace::YCbCr;
  const bool conventional = mode == SampleMode::Conventional;
  auto planes = decode_residual_planes(img);
  for (std::size_t c = 0; c < planes.size(); ++c) {
    if (conventional)
      for (auto& v : planes[c].samples) v += 128.0;
    out.planes.push_back(
        to_int(planes[c], conventional, img.components[c].h_sampling, img.components[c].v_sampling));
  }
  return out;
}

}  // namespace p3::pixel
