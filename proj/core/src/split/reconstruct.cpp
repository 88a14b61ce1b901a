#include "p3/error.hpp"
#include "p3/pixel/codec.hpp"
#include "p3/split/split.hpp"

namespace p3 {

pixel::PixelImage reconstruct_transformed(const pixel::PixelImage& public_pixels, const jpeg::QuantizedImage& secret,
                                          Threshold t, const pixel::TransformSpec& a) {
  public_pixels.validate();
  const auto term = correction_term(secret, t);

  // Both residual parts go through A together: A is linear, so one pass over
  // their sum equals the sum of two passes.
  pixel::FloatImage residual;
  residual.width = secret.width;
  residual.height = secret.height;
  residual.max_h = secret.max_h_sampling();
  residual.max_v = secret.max_v_sampling();
  residual.planes = pixel::decode_residual_planes(secret);
  const auto corr = pixel::decode_residual_planes(term.coefficients);
  for (std::size_t c = 0; c < residual.planes.size(); ++c) {
    for (std::size_t i = 0; i < corr[c].samples.size(); ++i) residual.planes[c].samples[i] += corr[c].samples[i];
    residual.sampling.emplace_back(secret.components[c].h_sampling, secret.components[c].v_sampling);
  }

  pixel::FloatImage out;
  try {
    out = pixel::apply_transform(std::move(residual), a);
  } catch (const Error& e) {
    fail(Errc::DimensionMismatch, std::string("transform does not fit the secret part: ") + e.what());
  }
  if (out.width != public_pixels.width || out.height != public_pixels.height ||
      out.planes.size() != public_pixels.planes.size())
    fail(Errc::DimensionMismatch, "transformed secret is " + std::to_string(out.width) + "x" +
                                      std::to_string(out.height) + ", public part is " +
                                      std::to_string(public_pixels.width) + "x" + std::to_string(public_pixels.height));
  for (std::size_t c = 0; c < out.planes.size(); ++c) {
    const auto& pp = public_pixels.planes[c];
    auto& op = out.planes[c];
    if (pp.width != op.width || pp.height != op.height)
      fail(Errc::DimensionMismatch, "plane " + std::to_string(c) + " geometry differs");
    for (std::size_t i = 0; i < op.samples.size(); ++i) op.samples[i] += pp.samples[i];
    out.sampling[c] = {pp.h_sampling, pp.v_sampling};
  }
  out.max_h = public_pixels.max_h;
  out.max_v = public_pixels.max_v;
  return pixel::to_pixels(out, pixel::SampleMode::Conventional);
}

}  // namespace p3
