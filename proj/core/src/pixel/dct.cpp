#include "p3/pixel/dct.hpp"

#include <cmath>
#include <numbers>

namespace p3::pixel {

namespace {

// basis[x][u] = C(u)/2 * cos((2x+1) u pi / 16), C(0) = 1/sqrt(2)
struct Basis {
  double m[8][8];
  Basis() {
    for (int x = 0; x < 8; ++x)
      for (int u = 0; u < 8; ++u) {
        const double cu = u == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
        m[x][u] = 0.5 * cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
  }
};

const Basis& basis() {
  static const Basis b;
  return b;
}

}  // namespace

BlockF idct_block(const BlockF& in) {
  const auto& b = basis().m;
  BlockF tmp{};
  // rows: for each coefficient row v, transform along u -> x
  for (int v = 0; v < 8; ++v)
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += b[x][u] * in[v * 8 + u];
      tmp[v * 8 + x] = s;
    }
  BlockF out{};
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += b[y][v] * tmp[v * 8 + x];
      out[y * 8 + x] = s;
    }
  return out;
}

BlockF fdct_block(const BlockF& in) {
  const auto& b = basis().m;
  BlockF tmp{};
  for (int y = 0; y < 8; ++y)
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += b[x][u] * in[y * 8 + x];
      tmp[y * 8 + u] = s;
    }
  BlockF out{};
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += b[y][v] * tmp[y * 8 + u];
      out[v * 8 + u] = s;
    }
  return out;
}

}  // namespace p3::pixel
