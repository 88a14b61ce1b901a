#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace p3::jpeg {

inline constexpr int kBlockLen = 64;

/// Quantized DCT coefficients of one 8x8 block, natural (row-major) order.
/// Index 0 is the DC coefficient.
using Block = std::array<std::int16_t, kBlockLen>;

/// natural index of the k-th coefficient in zig-zag scan order
extern const std::array<std::uint8_t, kBlockLen> kZigZagToNatural;
/// zig-zag position of natural index n
extern const std::array<std::uint8_t, kBlockLen> kNaturalToZigZag;

struct QuantTable {
  std::uint8_t id = 0;                        // 0..3
  std::array<std::uint16_t, kBlockLen> values{};  // zig-zag order, each >= 1

  std::uint16_t at_natural(int n) const { return values[kNaturalToZigZag[n]]; }
  bool operator==(const QuantTable&) const = default;
};

struct ComponentSpec {
  std::uint8_t id = 1;
  std::uint8_t h_sampling = 1;  // 1..4
  std::uint8_t v_sampling = 1;  // 1..4
  std::uint8_t quant_table_id = 0;

  bool operator==(const ComponentSpec&) const = default;
};

/// Row-major grid of coefficient blocks for one component.
struct BlockGrid {
  int blocks_wide = 0;
  int blocks_high = 0;
  std::vector<Block> blocks;

  BlockGrid() = default;
  BlockGrid(int wide, int high) : blocks_wide(wide), blocks_high(high), blocks(static_cast<std::size_t>(wide) * high) {
    for (auto& b : blocks) b.fill(0);
  }

  Block& at(int bx, int by) { return blocks[static_cast<std::size_t>(by) * blocks_wide + bx]; }
  const Block& at(int bx, int by) const { return blocks[static_cast<std::size_t>(by) * blocks_wide + bx]; }

  bool operator==(const BlockGrid&) const = default;
};

/// An APPn or COM segment carried through only when explicitly requested.
struct Segment {
  std::uint8_t marker = 0;  // second marker byte, e.g. 0xE1 for APP1
  std::vector<std::uint8_t> payload;

  bool operator==(const Segment&) const = default;
};

/// A baseline JPEG at the quantized-coefficient level.
struct QuantizedImage {
  int width = 0;
  int height = 0;
  std::vector<ComponentSpec> components;
  std::vector<QuantTable> quant_tables;
  std::vector<BlockGrid> blocks;  // one grid per component, same order
  std::optional<std::uint16_t> restart_interval;
  std::vector<Segment> metadata;

  int max_h_sampling() const;
  int max_v_sampling() const;
  /// Sample dimensions of component c: ceil(width * h / hmax) and likewise.
  int component_width(std::size_t c) const;
  int component_height(std::size_t c) const;
  int component_blocks_wide(std::size_t c) const { return (component_width(c) + 7) / 8; }
  int component_blocks_high(std::size_t c) const { return (component_height(c) + 7) / 8; }

  const QuantTable& table_for(std::size_t c) const;

  /// Same dimensions, components, tables and restart interval.
  bool same_geometry(const QuantizedImage& other) const;

  /// Throws Errc::InvalidImage when any structural invariant is violated.
  void validate() const;

  bool operator==(const QuantizedImage&) const = default;
};

/// An image with the geometry and tables of `like` and every coefficient zero.
QuantizedImage zeros_like(const QuantizedImage& like);

}  // namespace p3::jpeg
