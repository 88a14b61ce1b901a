#pragma once

#include "p3/pixel/pixel_image.hpp"

namespace p3::pixel {

/// Replicates subsampled planes up to full resolution (nearest neighbour).
PixelImage upsample_chroma(const PixelImage& img);

/// JFIF full-range conversion. Inputs are upsampled first when needed;
/// a single-plane image passes through with only its tag changed.
PixelImage ycbcr_to_rgb(const PixelImage& img);
PixelImage rgb_to_ycbcr(const PixelImage& img);

}  // namespace p3::pixel
