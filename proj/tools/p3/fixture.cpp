#include "fixture.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "p3/error.hpp"
#include "p3/pixel/codec.hpp"
#include "p3/pixel/color.hpp"

namespace p3::tool {

// A handful of soft gradients and hard-edged discs over mild noise, so the
// output has both smooth regions and edges like a photograph.
jpeg::QuantizedImage synthetic_photo(int width, int height, std::uint64_t seed, int quality) {
  if (width < 1 || height < 1 || width > 16384 || height > 16384) fail(Errc::Validation, "fixture size out of range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 4.0);

  struct Disc {
    double cx, cy, r;
    double rgb[3];
  };
  std::vector<Disc> discs(12);
  for (auto& d : discs) {
    d.cx = u(rng) * width;
    d.cy = u(rng) * height;
    d.r = (0.04 + 0.18 * u(rng)) * std::min(width, height);
    for (auto& c : d.rgb) c = 30 + 200 * u(rng);
  }
  double base[3][3];
  for (auto& b : base)
    for (auto& v : b) v = u(rng);

  auto img = pixel::make_image(width, height, 3);
  img.colorspace = pixel::ColorSpace::RGB;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double fx = static_cast<double>(x) / width, fy = static_cast<double>(y) / height;
      double rgb[3];
      for (int c = 0; c < 3; ++c)
        rgb[c] = 60 + 120 * (base[c][0] * fx + base[c][1] * fy + base[c][2] * std::sin(6 * fx + 4 * fy * base[c][0]));
      for (const auto& d : discs)
        if ((x - d.cx) * (x - d.cx) + (y - d.cy) * (y - d.cy) < d.r * d.r)
          for (int c = 0; c < 3; ++c) rgb[c] = d.rgb[c];
      const double n = noise(rng);
      for (int c = 0; c < 3; ++c)
        img.planes[c].at(x, y) = static_cast<std::int16_t>(std::clamp(static_cast<int>(std::lround(rgb[c] + n)), 0, 255));
    }

  // 4:2:0 by box-averaging the chroma planes.
  auto ycc = pixel::rgb_to_ycbcr(img);
  ycc.max_h = ycc.max_v = 2;
  ycc.planes[0].h_sampling = ycc.planes[0].v_sampling = 2;
  for (int c = 1; c < 3; ++c) {
    pixel::Plane sub(ycc.plane_width_for(1), ycc.plane_height_for(1));
    for (int y = 0; y < sub.height; ++y)
      for (int x = 0; x < sub.width; ++x) {
        int sum = 0, n = 0;
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx) {
            const int sx = 2 * x + dx, sy = 2 * y + dy;
            if (sx < width && sy < height) {
              sum += ycc.planes[c].at(sx, sy);
              ++n;
            }
          }
        sub.at(x, y) = static_cast<std::int16_t>((sum + n / 2) / n);
      }
    ycc.planes[c] = std::move(sub);
  }
  return pixel::quantize_pixels(ycc, pixel::standard_quant_tables(quality));
}

}  // namespace p3::tool
