#pragma once

#include <array>

namespace p3::pixel {

/// 8x8 block of real values, row-major (index = y * 8 + x for samples,
/// v * 8 + u for coefficients).
using BlockF = std::array<double, 64>;

/// Orthonormal 2-D DCT-II pair (the JPEG FDCT/IDCT scaling):
/// a DC-only coefficient c yields the constant block c / 8.
BlockF idct_block(const BlockF& coefficients);
BlockF fdct_block(const BlockF& samples);

}  // namespace p3::pixel
