#include "p3/pixel/calibrate.hpp"

#include <cmath>
#include <limits>

#include "p3/error.hpp"

namespace p3::pixel {

namespace {

bool geometry_matches(const PixelImage& a, const PixelImage& b) { return a.same_geometry(b); }

double mse(const PixelImage& a, const PixelImage& b) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.planes.size(); ++i) {
    const auto& pa = a.planes[i].samples;
    const auto& pb = b.planes[i].samples;
    for (std::size_t k = 0; k < pa.size(); ++k) {
      const double d = static_cast<double>(pa[k]) - pb[k];
      sum += d * d;
    }
    n += pa.size();
  }
  return n ? sum / n : 0.0;
}

}  // namespace

Calibration calibrate_transform(const PixelImage& original, const PixelImage& provider_output,
                                const std::vector<TransformSpec>& candidates) {
  if (candidates.empty()) fail(Errc::NoCandidateFits, "empty candidate list");
  std::optional<Calibration> best;
  for (const auto& c : candidates) {
    try {
      const auto [w, h] = c.output_size(original.width, original.height);
      if (w != provider_output.width || h != provider_output.height) continue;
    } catch (const Error&) {
      continue;
    }
    const PixelImage out = apply_transform(original, c);
    if (!geometry_matches(out, provider_output)) continue;
    const double m = mse(out, provider_output);
    if (!best || m < best->mse) best = Calibration{c, 0.0, m};
  }
  if (!best) fail(Errc::NoCandidateFits, "no candidate produces the provider's geometry");
  best->psnr = best->mse == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(255.0 * 255.0 / best->mse);
  return *best;
}

std::vector<TransformSpec> candidate_grid(int src_w, int src_h, int dst_w, int dst_h) {
  std::vector<TransformSpec> out;
  if (src_w == dst_w && src_h == dst_h) out.push_back(TransformSpec::identity());
  for (Filter f : {Filter::Bilinear, Filter::Box, Filter::Nearest})
    for (double s : {0.0, 0.25, 0.5, 1.0}) {
      Resize r{dst_w, dst_h, f, std::nullopt};
      if (s > 0) r.sharpen = s;
      out.push_back(TransformSpec{{r}});
    }
  return out;
}

}  // namespace p3::pixel
