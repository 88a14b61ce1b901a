#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "p3/jpeg/types.hpp"

namespace p3::jpeg {

struct DecodeOptions {
  /// Keep APPn (other than the JFIF APP0) and COM segments in
  /// QuantizedImage::metadata. Off by default: metadata can leak.
  bool keep_metadata = false;
};

/// Parses a baseline sequential Huffman JPEG (SOF0, or SOF1 with 8-bit
/// samples) into its quantized coefficients. No dequantization or IDCT.
/// Throws Errc::UnsupportedFormat or Errc::CorruptStream.
QuantizedImage decode_jpeg(std::span<const std::uint8_t> bytes, const DecodeOptions& options = {});

enum class HuffmanMode {
  Optimized,  // per-image tables from symbol statistics
  Standard,   // Annex K typical tables
};

struct EncodeOptions {
  HuffmanMode huffman = HuffmanMode::Optimized;
};

/// Emits SOI, APP0(JFIF), metadata segments, DQT, SOF0 (SOF1 if a table
/// needs 16-bit entries), DHT, [DRI], SOS, entropy data, EOI.
/// Throws Errc::InvalidImage when `img` violates its invariants or holds
/// values outside the baseline coefficient range.
std::vector<std::uint8_t> encode_jpeg(const QuantizedImage& img, const EncodeOptions& options = {});

struct ComponentInfo {
  int id = 0;
  int h_sampling = 1;
  int v_sampling = 1;
  int quant_table_id = 0;
};

struct QuantTableInfo {
  int id = 0;
  int precision_bits = 8;
  int min = 0;
  int max = 0;
  double mean = 0.0;
};

struct HuffmanTableInfo {
  int table_class = 0;  // 0 = DC, 1 = AC
  int id = 0;
  int symbol_count = 0;
};

struct MarkerInfo {
  std::uint8_t code = 0;
  std::string name;
  std::size_t offset = 0;
  std::size_t length = 0;  // payload length including the 2 length bytes; 0 for standalone markers
};

struct JpegInfo {
  std::string kind;  // baseline, extended, progressive, lossless, hierarchical, arithmetic, unknown
  bool decodable = false;
  int precision = 0;
  int width = 0;
  int height = 0;
  std::vector<ComponentInfo> components;
  std::vector<QuantTableInfo> quant_tables;
  std::vector<HuffmanTableInfo> huffman_tables;
  int restart_interval = 0;
  std::vector<MarkerInfo> markers;  // in order of appearance
  int scans = 0;
};

/// Read-only header report. Throws Errc::CorruptStream when the stream is
/// not syntactically valid up to the first SOS.
JpegInfo inspect(std::span<const std::uint8_t> bytes);

std::string marker_name(std::uint8_t code);

}  // namespace p3::jpeg
