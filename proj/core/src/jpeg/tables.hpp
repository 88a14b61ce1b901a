#pragma once

#include <array>
#include <cstdint>

#include "p3/jpeg/types.hpp"

namespace p3::jpeg::detail {

/// Huffman table in DHT form: counts of codes per length 1..16, then symbols.
struct HuffmanSpec {
  std::array<std::uint8_t, 16> counts{};
  std::vector<std::uint8_t> symbols;
};

// Annex K.3 typical tables.
const HuffmanSpec& std_dc_luma();
const HuffmanSpec& std_ac_luma();
const HuffmanSpec& std_dc_chroma();
const HuffmanSpec& std_ac_chroma();

// Annex K.1 quantization tables, natural order.
extern const std::array<std::uint16_t, kBlockLen> kStdLumaQuant;
extern const std::array<std::uint16_t, kBlockLen> kStdChromaQuant;

}  // namespace p3::jpeg::detail
