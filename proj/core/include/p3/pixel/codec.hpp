#pragma once

#include <vector>

#include "p3/jpeg/types.hpp"
#include "p3/pixel/pixel_image.hpp"

namespace p3::pixel {

/// Dequantize, IDCT each block and assemble one plane per component at its
/// native resolution. Conventional mode adds 128 and clamps to [0,255];
/// residual mode keeps signed, unclamped values.
PixelImage decode_to_pixels(const jpeg::QuantizedImage& img, SampleMode mode);

/// Residual decode without rounding: one real-valued plane per component.
std::vector<PlaneF> decode_residual_planes(const jpeg::QuantizedImage& img);

/// IJG-style quality scaling of the Annex K tables (quality 1..100).
/// Table 0 is luma, table 1 chroma.
std::vector<jpeg::QuantTable> standard_quant_tables(int quality);

/// Forward path: FDCT and quantize a conventional YCbCr image with the given
/// tables. Plane sampling factors become component sampling factors; plane i
/// uses table `table_ids[i]` (default: 0 for the first plane, 1 otherwise).
/// Partial edge blocks are padded by edge replication.
jpeg::QuantizedImage quantize_pixels(const PixelImage& img, const std::vector<jpeg::QuantTable>& tables,
                                     const std::vector<int>& table_ids = {});

}  // namespace p3::pixel
