#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "p3/error.hpp"
#include "p3/metrics/metrics.hpp"

namespace p3::metrics {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * r + 1);
  for (int i = -r; i <= r; ++i) k[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (auto& v : k) v /= sum;
  return k;
}

// Separable convolution with replicated borders.
pixel::PlaneF blur(const pixel::PlaneF& in, const std::vector<double>& k) {
  const int r = static_cast<int>(k.size() / 2);
  pixel::PlaneF tmp(in.width, in.height), out(in.width, in.height);
  for (int y = 0; y < in.height; ++y)
    for (int x = 0; x < in.width; ++x) {
      double s = 0;
      for (int i = -r; i <= r; ++i) s += k[i + r] * in.at(std::clamp(x + i, 0, in.width - 1), y);
      tmp.at(x, y) = s;
    }
  for (int y = 0; y < in.height; ++y)
    for (int x = 0; x < in.width; ++x) {
      double s = 0;
      for (int i = -r; i <= r; ++i) s += k[i + r] * tmp.at(x, std::clamp(y + i, 0, in.height - 1));
      out.at(x, y) = s;
    }
  return out;
}

}  // namespace

std::size_t EdgeMap::count() const { return static_cast<std::size_t>(std::count(edges.begin(), edges.end(), 1)); }

EdgeMap canny(const pixel::Plane& luma, const CannyParams& params) {
  const int w = luma.width;
  const int h = luma.height;
  EdgeMap out{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0)};
  if (w < 3 || h < 3) return out;

  const auto g = params.sigma > 0 ? blur(pixel::to_float(luma), gaussian_kernel(params.sigma)) : pixel::to_float(luma);
  auto px = [&](int x, int y) { return g.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)); };

  pixel::PlaneF gx(w, h), gy(w, h), mag(w, h);
  double max_mag = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
      const double dy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
      gx.at(x, y) = dx;
      gy.at(x, y) = dy;
      mag.at(x, y) = std::hypot(dx, dy);
      max_mag = std::max(max_mag, mag.at(x, y));
    }
  if (max_mag <= 1e-9) return out;

  // Non-maximum suppression along the gradient direction, quantized to
  // 0/45/90/135 degrees. Ties keep the first pixel so a symmetric step
  // yields a one-pixel line.
  std::vector<std::uint8_t> cls(static_cast<std::size_t>(w) * h, 0);  // 0 none, 1 weak, 2 strong
  const double lo = params.low * max_mag;
  const double hi = params.high * max_mag;
  for (int y = 1; y < h - 1; ++y)
    for (int x = 1; x < w - 1; ++x) {
      const double m = mag.at(x, y);
      if (m < lo || m == 0) continue;
      double angle = std::atan2(gy.at(x, y), gx.at(x, y)) * 180.0 / std::numbers::pi;
      if (angle < 0) angle += 180.0;
      int ox, oy;
      if (angle < 22.5 || angle >= 157.5) {
        ox = 1, oy = 0;
      } else if (angle < 67.5) {
        ox = 1, oy = 1;
      } else if (angle < 112.5) {
        ox = 0, oy = 1;
      } else {
        ox = -1, oy = 1;
      }
      const double prev = mag.at(x - ox, y - oy);
      const double next = mag.at(x + ox, y + oy);
      if (m > prev && m >= next) cls[static_cast<std::size_t>(y) * w + x] = m >= hi ? 2 : 1;
    }

  std::vector<int> stack;
  for (int i = 0; i < w * h; ++i)
    if (cls[i] == 2) {
      out.edges[i] = 1;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const int x = i % w;
    const int y = i / w;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const int j = ny * w + nx;
        if (cls[j] == 1 && !out.edges[j]) {
          out.edges[j] = 1;
          stack.push_back(j);
        }
      }
  }
  return out;
}

EdgeMap canny(const pixel::PixelImage& img, const CannyParams& params) {
  if (img.planes.empty()) fail(Errc::Validation, "image has no planes");
  return canny(img.planes[0], params);
}

double edge_match(const EdgeMap& original, const EdgeMap& candidate) {
  if (original.width != candidate.width || original.height != candidate.height)
    fail(Errc::DimensionMismatch, "edge maps differ in size");
  std::size_t total = 0, hit = 0;
  for (std::size_t i = 0; i < original.edges.size(); ++i)
    if (original.edges[i]) {
      ++total;
      hit += candidate.edges[i];
    }
  return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

double edge_match(const pixel::PixelImage& original, const pixel::PixelImage& candidate, const CannyParams& params) {
  if (original.planes.empty() || candidate.planes.empty()) fail(Errc::Validation, "image has no planes");
  const auto& a = original.planes[0];
  const auto& b = candidate.planes[0];
  if (a.width != b.width || a.height != b.height) fail(Errc::DimensionMismatch, "luma planes differ in size");
  return edge_match(canny(a, params), canny(b, params));
}

}  // namespace p3::metrics
