#pragma once

#include <utility>

#include "p3/jpeg/types.hpp"
#include "p3/pixel/pixel_image.hpp"
#include "p3/pixel/transform.hpp"

namespace p3 {

/// Clipping level in quantized-coefficient units, 1..100.
class Threshold {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 100;

  /// Throws Errc::InvalidThreshold outside [kMin, kMax].
  explicit Threshold(int value);

  int value() const noexcept { return value_; }
  bool operator==(const Threshold&) const = default;

 private:
  int value_;
};

struct SplitPair {
  jpeg::QuantizedImage public_part;
  jpeg::QuantizedImage secret_part;
  Threshold threshold;
};

struct SplitOptions {
  /// Copy APPn/COM segments of the source into the public part as well.
  /// The secret part always carries them so a merge restores them.
  bool public_metadata = false;
};

/// DC goes to the secret block. AC with |y| <= T stays public; above T the
/// public block holds +T and the secret block sign(y) * (|y| - T).
std::pair<jpeg::Block, jpeg::Block> split_block(const jpeg::Block& block, Threshold t);

SplitPair split_image(const jpeg::QuantizedImage& img, Threshold t, const SplitOptions& options = {});

/// Inverse of split_block. Throws Errc::InconsistentPair when a secret AC is
/// nonzero where the public AC is not T.
jpeg::Block merge_block(const jpeg::Block& pub, const jpeg::Block& sec, Threshold t);

/// Throws Errc::DimensionMismatch when the parts do not share geometry and
/// tables, Errc::InconsistentPair as merge_block.
jpeg::QuantizedImage merge_image(const jpeg::QuantizedImage& pub, const jpeg::QuantizedImage& sec, Threshold t);
jpeg::QuantizedImage merge_image(const SplitPair& pair);

/// -2T at every negative secret AC position, 0 elsewhere. Derived from the
/// secret part alone.
struct CorrectionTerm {
  jpeg::QuantizedImage coefficients;
};

CorrectionTerm correction_term(const jpeg::QuantizedImage& secret, Threshold t);

/// Pixel-domain reconstruction after the provider applied `a` to the public
/// part: public_pixels + A(residual(secret)) + A(residual(correction)),
/// summed per plane, then clamped. Throws Errc::DimensionMismatch when A's
/// output does not line up with `public_pixels`.
pixel::PixelImage reconstruct_transformed(const pixel::PixelImage& public_pixels, const jpeg::QuantizedImage& secret,
                                          Threshold t, const pixel::TransformSpec& a);

}  // namespace p3
