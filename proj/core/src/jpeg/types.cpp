#include "p3/jpeg/types.hpp"

#include <algorithm>
#include <string>

#include "p3/error.hpp"

namespace p3::jpeg {

const std::array<std::uint8_t, kBlockLen> kZigZagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

const std::array<std::uint8_t, kBlockLen> kNaturalToZigZag = [] {
  std::array<std::uint8_t, kBlockLen> inv{};
  for (int k = 0; k < kBlockLen; ++k) inv[kZigZagToNatural[k]] = static_cast<std::uint8_t>(k);
  return inv;
}();

int QuantizedImage::max_h_sampling() const {
  int m = 1;
  for (const auto& c : components) m = std::max(m, int{c.h_sampling});
  return m;
}

int QuantizedImage::max_v_sampling() const {
  int m = 1;
  for (const auto& c : components) m = std::max(m, int{c.v_sampling});
  return m;
}

int QuantizedImage::component_width(std::size_t c) const {
  const int hmax = max_h_sampling();
  return (width * components[c].h_sampling + hmax - 1) / hmax;
}

int QuantizedImage::component_height(std::size_t c) const {
  const int vmax = max_v_sampling();
  return (height * components[c].v_sampling + vmax - 1) / vmax;
}

const QuantTable& QuantizedImage::table_for(std::size_t c) const {
  const auto id = components.at(c).quant_table_id;
  for (const auto& t : quant_tables)
    if (t.id == id) return t;
  fail(Errc::InvalidImage, "component " + std::to_string(c) + " references missing quant table " +
                               std::to_string(id));
}

bool QuantizedImage::same_geometry(const QuantizedImage& other) const {
  if (width != other.width || height != other.height) return false;
  if (components != other.components || quant_tables != other.quant_tables) return false;
  if (restart_interval != other.restart_interval || blocks.size() != other.blocks.size()) return false;
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    if (blocks[c].blocks_wide != other.blocks[c].blocks_wide ||
        blocks[c].blocks_high != other.blocks[c].blocks_high)
      return false;
  }
  return true;
}

void QuantizedImage::validate() const {
  if (width < 1 || height < 1 || width > 65535 || height > 65535)
    fail(Errc::InvalidImage, "dimensions out of range");
  if (components.size() != 1 && components.size() != 3)
    fail(Errc::InvalidImage, "only 1 or 3 components are supported");
  if (blocks.size() != components.size()) fail(Errc::InvalidImage, "one block grid per component required");
  if (restart_interval && *restart_interval == 0)
    fail(Errc::InvalidImage, "restart interval must be positive (use no value to disable)");
  if (quant_tables.empty() || quant_tables.size() > 4) fail(Errc::InvalidImage, "1..4 quant tables required");

  for (std::size_t i = 0; i < quant_tables.size(); ++i) {
    const auto& t = quant_tables[i];
    if (t.id > 3) fail(Errc::InvalidImage, "quant table id out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (quant_tables[j].id == t.id) fail(Errc::InvalidImage, "duplicate quant table id");
    for (auto v : t.values)
      if (v == 0) fail(Errc::InvalidImage, "quant table entries must be >= 1");
  }

  const int hmax = max_h_sampling();
  const int vmax = max_v_sampling();
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& comp = components[c];
    if (comp.h_sampling < 1 || comp.h_sampling > 4 || comp.v_sampling < 1 || comp.v_sampling > 4)
      fail(Errc::InvalidImage, "sampling factors must be 1..4");
    if (hmax % comp.h_sampling != 0 || vmax % comp.v_sampling != 0)
      fail(Errc::InvalidImage, "sampling factors must divide the maximum sampling factor");
    for (std::size_t j = 0; j < c; ++j)
      if (components[j].id == comp.id) fail(Errc::InvalidImage, "duplicate component id");
    (void)table_for(c);
    const auto& grid = blocks[c];
    if (grid.blocks_wide != component_blocks_wide(c) || grid.blocks_high != component_blocks_high(c))
      fail(Errc::InvalidImage, "block grid of component " + std::to_string(c) + " has wrong dimensions");
    if (grid.blocks.size() != static_cast<std::size_t>(grid.blocks_wide) * grid.blocks_high)
      fail(Errc::InvalidImage, "block grid storage size mismatch");
  }
  if (components.size() == 1 && (components[0].h_sampling != 1 || components[0].v_sampling != 1))
    fail(Errc::InvalidImage, "a single component must use 1x1 sampling");
  // Baseline blocks-per-MCU limit.
  if (components.size() > 1) {
    int per_mcu = 0;
    for (const auto& comp : components) per_mcu += comp.h_sampling * comp.v_sampling;
    if (per_mcu > 10) fail(Errc::InvalidImage, "more than 10 blocks per MCU");
  }
}

QuantizedImage zeros_like(const QuantizedImage& like) {
  QuantizedImage out;
  out.width = like.width;
  out.height = like.height;
  out.components = like.components;
  out.quant_tables = like.quant_tables;
  out.restart_interval = like.restart_interval;
  out.blocks.reserve(like.blocks.size());
  for (const auto& g : like.blocks) out.blocks.emplace_back(g.blocks_wide, g.blocks_high);
  return out;
}

}  // namespace p3::jpeg
