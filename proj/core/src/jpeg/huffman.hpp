#pragma once

#include <array>
#include <cstdint>

#include "bitstream.hpp"
#include "tables.hpp"

namespace p3::jpeg::detail {

class HuffmanDecoder {
 public:
  HuffmanDecoder() = default;
  /// Throws CorruptStream for an over-subscribed or oversized table.
  explicit HuffmanDecoder(const HuffmanSpec& spec);

  bool defined() const { return defined_; }
  int decode(BitReader& in) const;

 private:
  static constexpr int kFastBits = 9;
  struct Fast {
    std::uint8_t len = 0;
    std::uint8_t symbol = 0;
  };
  std::array<Fast, 1 << kFastBits> fast_{};
  std::array<std::int32_t, 18> maxcode_{};
  std::array<std::int32_t, 17> mincode_{};
  std::array<std::int32_t, 17> valptr_{};
  std::array<std::uint8_t, 256> symbols_{};
  bool defined_ = false;
};

struct HuffmanEncoder {
  std::array<std::uint16_t, 256> code{};
  std::array<std::uint8_t, 256> size{};

  HuffmanEncoder() = default;
  explicit HuffmanEncoder(const HuffmanSpec& spec);

  void emit(BitWriter& out, int symbol) const { out.put(code[symbol], size[symbol]); }
};

/// Code lengths limited to 16 bits from symbol frequencies (Annex K.2).
HuffmanSpec optimal_spec(const std::array<std::uint32_t, 256>& freq);

/// Number of magnitude bits ("SSSS" category) for a coefficient value.
inline int magnitude_category(int v) {
  unsigned a = static_cast<unsigned>(v < 0 ? -v : v);
  int n = 0;
  while (a) {
    ++n;
    a >>= 1;
  }
  return n;
}

/// Inverse of the category/extra-bits encoding (F.2.2.1 EXTEND).
inline int extend(std::uint32_t bits, int category) {
  if (category == 0) return 0;
  const auto half = 1u << (category - 1);
  return bits < half ? static_cast<int>(bits) - static_cast<int>((1u << category) - 1u) : static_cast<int>(bits);
}

}  // namespace p3::jpeg::detail
