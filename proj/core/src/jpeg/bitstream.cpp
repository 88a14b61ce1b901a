#include "bitstream.hpp"

namespace p3::jpeg::detail {

BitReader::BitReader(std::span<const std::uint8_t> data, std::size_t pos) : data_(data), pos_(pos) {}

void BitReader::fill() {
  while (bits_ <= 56) {
    std::uint8_t byte = 0;
    if (!at_marker_) {
      if (pos_ >= data_.size()) {
        at_marker_ = true;
      } else if (data_[pos_] != 0xFF) {
        byte = data_[pos_++];
        loaded_ += 8;
      } else {
        std::size_t next = pos_ + 1;
        while (next < data_.size() && data_[next] == 0xFF) ++next;  // fill bytes
        if (next < data_.size() && data_[next] == 0x00) {
          byte = 0xFF;
          pos_ = next + 1;
          loaded_ += 8;
        } else {
          at_marker_ = true;
        }
      }
    }
    acc_ = (acc_ << 8) | byte;
    bits_ += 8;
  }
}

std::optional<std::uint8_t> BitReader::finish_segment() {
  acc_ = 0;
  bits_ = 0;
  // Skip any trailing entropy bytes up to the marker.
  while (pos_ < data_.size()) {
    if (data_[pos_] != 0xFF) {
      ++pos_;
      continue;
    }
    std::size_t next = pos_ + 1;
    while (next < data_.size() && data_[next] == 0xFF) ++next;
    if (next >= data_.size()) {
      pos_ = data_.size();
      return std::nullopt;
    }
    if (data_[next] == 0x00) {
      pos_ = next + 1;
      continue;
    }
    pos_ = next - 1;
    return data_[next];
  }
  return std::nullopt;
}

void BitReader::resume_after_marker() {
  pos_ += 2;
  acc_ = 0;
  bits_ = 0;
  at_marker_ = false;
  loaded_ = 0;
  consumed_ = 0;
}

}  // namespace p3::jpeg::detail
