#include <cstdlib>
#include <tuple>
#include <string>

#include "p3/error.hpp"
#include "p3/split/split.hpp"

namespace p3 {

using jpeg::Block;
using jpeg::QuantizedImage;

std::pair<Block, Block> split_block(const Block& block, Threshold t) {
  const int T = t.value();
  Block pub{};
  Block sec{};
  sec[0] = block[0];
  for (int i = 1; i < jpeg::kBlockLen; ++i) {
    const int y = block[i];
    if (std::abs(y) <= T) {
      pub[i] = static_cast<std::int16_t>(y);
    } else {
      pub[i] = static_cast<std::int16_t>(T);
      sec[i] = static_cast<std::int16_t>(y > 0 ? y - T : y + T);
    }
  }
  return {pub, sec};
}

SplitPair split_image(const QuantizedImage& img, Threshold t, const SplitOptions& options) {
  img.validate();
  SplitPair pair{jpeg::zeros_like(img), jpeg::zeros_like(img), t};
  pair.secret_part.metadata = img.metadata;
  pair.public_part.metadata = options.public_metadata ? img.metadata : std::vector<jpeg::Segment>{};
  for (std::size_t c = 0; c < img.blocks.size(); ++c) {
    const auto& src = img.blocks[c].blocks;
    auto& pub = pair.public_part.blocks[c].blocks;
    auto& sec = pair.secret_part.blocks[c].blocks;
    for (std::size_t b = 0; b < src.size(); ++b) std::tie(pub[b], sec[b]) = split_block(src[b], t);
  }
  return pair;
}

Block merge_block(const Block& pub, const Block& sec, Threshold t) {
  const int T = t.value();
  Block out{};
  out[0] = sec[0];
  for (int i = 1; i < jpeg::kBlockLen; ++i) {
    const int p = pub[i];
    const int s = sec[i];
    if (s != 0 && p != T)
      fail(Errc::InconsistentPair, "secret coefficient " + std::to_string(i) + " set where public is " +
                                       std::to_string(p) + ", expected " + std::to_string(T));
    out[i] = static_cast<std::int16_t>(s >= 0 ? p + s : s + p - 2 * T);
  }
  return out;
}

QuantizedImage merge_image(const QuantizedImage& pub, const QuantizedImage& sec, Threshold t) {
  if (!pub.same_geometry(sec)) fail(Errc::DimensionMismatch, "public and secret parts differ in geometry or tables");
  QuantizedImage out = jpeg::zeros_like(sec);
  out.metadata = sec.metadata;
  for (std::size_t c = 0; c < sec.blocks.size(); ++c) {
    const auto& pb = pub.blocks[c].blocks;
    const auto& sb = sec.blocks[c].blocks;
    if (pb.size() != sb.size()) fail(Errc::DimensionMismatch, "block grid size mismatch");
    auto& ob = out.blocks[c].blocks;
    for (std::size_t b = 0; b < sb.size(); ++b) ob[b] = merge_block(pb[b], sb[b], t);
  }
  return out;
}

QuantizedImage merge_image(const SplitPair& pair) {
  return merge_image(pair.public_part, pair.secret_part, pair.threshold);
}

CorrectionTerm correction_term(const QuantizedImage& secret, Threshold t) {
  const auto neg = static_cast<std::int16_t>(-2 * t.value());
  CorrectionTerm term{jpeg::zeros_like(secret)};
  for (std::size_t c = 0; c < secret.blocks.size(); ++c) {
    const auto& sb = secret.blocks[c].blocks;
    auto& ob = term.coefficients.blocks[c].blocks;
    for (std::size_t b = 0; b < sb.size(); ++b)
      for (int i = 1; i < jpeg::kBlockLen; ++i)
        if (sb[b][i] < 0) ob[b][i] = neg;
  }
  return term;
}

}  // namespace p3
