#pragma once

#include <vector>

#include "p3/pixel/pixel_image.hpp"
#include "p3/pixel/transform.hpp"

namespace p3::pixel {

struct Calibration {
  TransformSpec best;
  double psnr = 0.0;  // dB; +inf when the match is exact
  double mse = 0.0;
};

/// Picks the candidate whose output, applied to `original`, is closest in MSE
/// to `provider_output`. Candidates with the wrong output geometry are
/// skipped; ties go to the earlier candidate. Throws Errc::NoCandidateFits.
Calibration calibrate_transform(const PixelImage& original, const PixelImage& provider_output,
                                const std::vector<TransformSpec>& candidates);

/// Resize candidates mapping (src_w, src_h) onto (dst_w, dst_h): every filter,
/// each with no sharpening and with a few unsharp amounts.
std::vector<TransformSpec> candidate_grid(int src_w, int src_h, int dst_w, int dst_h);

}  // namespace p3::pixel
