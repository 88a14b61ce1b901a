#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace p3::jpeg::detail {

/// Reads entropy-coded segment bits, undoing 0xFF00 byte stuffing. Stops
/// feeding real data at the first marker (or end of input) and pads with
/// zero bits afterwards; consuming padding is reported via overrun().
class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> data, std::size_t pos);

  std::uint32_t peek16() {
    if (bits_ < 16) fill();
    return static_cast<std::uint32_t>(acc_ >> (bits_ - 16)) & 0xFFFFu;
  }

  void skip(int n) {
    bits_ -= n;
    consumed_ += static_cast<std::uint64_t>(n);
  }

  std::uint32_t get_bits(int n) {
    if (n == 0) return 0;
    if (bits_ < n) fill();
    const auto v = static_cast<std::uint32_t>(acc_ >> (bits_ - n)) & ((1u << n) - 1u);
    skip(n);
    return v;
  }

  /// True once more bits were consumed than the segment actually holds.
  bool overrun() const { return consumed_ > loaded_; }

  /// Drops buffered bits and locates the marker that ends the current
  /// segment. Returns the marker code (second byte) or nullopt at end of input.
  /// position() then points at the 0xFF of that marker.
  std::optional<std::uint8_t> finish_segment();

  /// Steps over the marker found by finish_segment() and resets bit state.
  void resume_after_marker();

  std::size_t position() const { return pos_; }

 private:
  void fill();

  std::span<const std::uint8_t> data_;
  std::size_t pos_;
  std::uint64_t acc_ = 0;
  int bits_ = 0;
  bool at_marker_ = false;
  std::uint64_t loaded_ = 0;
  std::uint64_t consumed_ = 0;
};

/// Appends entropy-coded bits with byte stuffing.
class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint32_t code, int len) {
    acc_ = (acc_ << len) | (code & ((1u << len) - 1u));
    bits_ += len;
    while (bits_ >= 8) {
      const auto byte = static_cast<std::uint8_t>(acc_ >> (bits_ - 8));
      out_.push_back(byte);
      if (byte == 0xFF) out_.push_back(0x00);
      bits_ -= 8;
    }
    acc_ &= (1ull << bits_) - 1ull;
  }

  /// Pads the last partial byte with 1-bits.
  void flush() {
    if (bits_ > 0) put((1u << (8 - bits_)) - 1u, 8 - bits_);
  }

  void marker(std::uint8_t code) {
    flush();
    out_.push_back(0xFF);
    out_.push_back(code);
  }

 private:
  std::vector<std::uint8_t>& out_;
  std::uint64_t acc_ = 0;
  int bits_ = 0;
};

}  // namespace p3::jpeg::detail
