#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "p3/error.hpp"

namespace p3::jpeg::detail {

inline constexpr std::uint8_t kSOI = 0xD8;
inline constexpr std::uint8_t kEOI = 0xD9;
inline constexpr std::uint8_t kSOS = 0xDA;
inline constexpr std::uint8_t kDQT = 0xDB;
inline constexpr std::uint8_t kDNL = 0xDC;
inline constexpr std::uint8_t kDRI = 0xDD;
inline constexpr std::uint8_t kDHT = 0xC4;
inline constexpr std::uint8_t kDAC = 0xCC;
inline constexpr std::uint8_t kSOF0 = 0xC0;
inline constexpr std::uint8_t kSOF1 = 0xC1;
inline constexpr std::uint8_t kAPP0 = 0xE0;
inline constexpr std::uint8_t kCOM = 0xFE;
inline constexpr std::uint8_t kRST0 = 0xD0;

inline bool is_sof(std::uint8_t m) { return m >= 0xC0 && m <= 0xCF && m != kDHT && m != kDAC && m != 0xC8; }
inline bool is_rst(std::uint8_t m) { return m >= 0xD0 && m <= 0xD7; }
inline bool is_app(std::uint8_t m) { return m >= 0xE0 && m <= 0xEF; }
inline bool is_standalone(std::uint8_t m) { return m == kSOI || m == kEOI || is_rst(m) || m == 0x01; }

/// Frame kind implied by an SOFn marker.
inline const char* sof_kind(std::uint8_t m) {
  switch (m) {
    case 0xC0: return "baseline";
    case 0xC1: return "extended";
    case 0xC2: return "progressive";
    case 0xC3: return "lossless";
    case 0xC5:
    case 0xC6:
    case 0xC7: return "hierarchical";
    default: return "arithmetic";  // C9..CF
  }
}

/// Bounds-checked big-endian reader over a marker segment payload.
class SegmentReader {
 public:
  SegmentReader(std::span<const std::uint8_t> payload, const char* what) : p_(payload), what_(what) {}

  std::uint8_t u8() {
    need(1);
    return p_[i_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>((p_[i_] << 8) | p_[i_ + 1]);
    i_ += 2;
    return v;
  }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = p_.subspan(i_, n);
    i_ += n;
    return s;
  }
  std::size_t remaining() const { return p_.size() - i_; }

 private:
  void need(std::size_t n) const {
    if (i_ + n > p_.size()) fail(Errc::CorruptStream, std::string("truncated ") + what_ + " segment");
  }

  std::span<const std::uint8_t> p_;
  std::size_t i_ = 0;
  const char* what_;
};

/// Returns the payload (after the 2 length bytes) of the segment whose
/// marker ends at `pos`, advancing `pos` past it.
inline std::span<const std::uint8_t> take_segment(std::span<const std::uint8_t> data, std::size_t& pos) {
  if (pos + 2 > data.size()) fail(Errc::CorruptStream, "truncated segment length");
  const std::size_t len = (static_cast<std::size_t>(data[pos]) << 8) | data[pos + 1];
  if (len < 2 || pos + len > data.size()) fail(Errc::CorruptStream, "segment length out of range");
  auto payload = data.subspan(pos + 2, len - 2);
  pos += len;
  return payload;
}

/// Reads the next marker code starting at `pos` (skipping 0xFF fill bytes).
inline std::uint8_t next_marker(std::span<const std::uint8_t> data, std::size_t& pos) {
  if (pos >= data.size()) fail(Errc::CorruptStream, "unexpected end of stream (missing EOI)");
  if (data[pos] != 0xFF) fail(Errc::CorruptStream, "expected marker at offset " + std::to_string(pos));
  while (pos < data.size() && data[pos] == 0xFF) ++pos;
  if (pos >= data.size()) fail(Errc::CorruptStream, "truncated marker");
  const auto code = data[pos++];
  if (code == 0x00) fail(Errc::CorruptStream, "stuffed byte outside entropy data");
  return code;
}

}  // namespace p3::jpeg::detail
