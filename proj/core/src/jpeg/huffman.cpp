#include "huffman.hpp"

#include <algorithm>

#include "p3/error.hpp"

namespace p3::jpeg::detail {

namespace {

int total_symbols(const HuffmanSpec& spec) {
  int n = 0;
  for (auto c : spec.counts) n += c;
  return n;
}

}  // namespace

HuffmanDecoder::HuffmanDecoder(const HuffmanSpec& spec) {
  const int n = total_symbols(spec);
  if (n > 256 || static_cast<std::size_t>(n) > spec.symbols.size())
    fail(Errc::CorruptStream, "Huffman table has too many symbols");
  std::copy_n(spec.symbols.begin(), n, symbols_.begin());

  std::int32_t code = 0;
  int k = 0;
  maxcode_.fill(-1);
  for (int len = 1; len <= 16; ++len) {
    const int count = spec.counts[len - 1];
    valptr_[len] = k;
    mincode_[len] = code;
    if (count > 0) {
      code += count;
      if (code > (1 << len)) fail(Errc::CorruptStream, "over-subscribed Huffman table");
      maxcode_[len] = code - 1;
      for (int i = 0; i < count; ++i, ++k) {
        if (len <= kFastBits) {
          const int c = mincode_[len] + i;
          const int shift = kFastBits - len;
          for (int fill = 0; fill < (1 << shift); ++fill) {
            auto& e = fast_[(c << shift) | fill];
            e.len = static_cast<std::uint8_t>(len);
            e.symbol = symbols_[k];
          }
        }
      }
    }
    code <<= 1;
  }
  maxcode_[17] = 0x7FFFFFFF;
  defined_ = true;
}

int HuffmanDecoder::decode(BitReader& in) const {
  const std::uint32_t look = in.peek16();
  const Fast& f = fast_[look >> (16 - kFastBits)];
  if (f.len) {
    in.skip(f.len);
    return f.symbol;
  }
  for (int len = kFastBits + 1; len <= 16; ++len) {
    const auto code = static_cast<std::int32_t>(look >> (16 - len));
    if (maxcode_[len] >= 0 && code <= maxcode_[len] && code >= mincode_[len]) {
      in.skip(len);
      return symbols_[valptr_[len] + code - mincode_[len]];
    }
  }
  fail(Errc::CorruptStream, "invalid Huffman code");
}

HuffmanEncoder::HuffmanEncoder(const HuffmanSpec& spec) {
  std::uint32_t c = 0;
  int k = 0;
  for (int len = 1; len <= 16; ++len) {
    for (int i = 0; i < spec.counts[len - 1]; ++i, ++k) {
      const auto sym = spec.symbols[k];
      code[sym] = static_cast<std::uint16_t>(c++);
      size[sym] = static_cast<std::uint8_t>(len);
    }
    c <<= 1;
  }
}

HuffmanSpec optimal_spec(const std::array<std::uint32_t, 256>& counts) {
  std::array<long, 257> freq{};
  std::copy(counts.begin(), counts.end(), freq.begin());
  freq[256] = 1;  // reserves the all-ones codeword
  std::array<int, 257> codesize{};
  std::array<int, 257> others;
  others.fill(-1);

  for (;;) {
    int c1 = -1;
    long v = 1000000000L;
    for (int i = 0; i <= 256; ++i)
      if (freq[i] && freq[i] <= v) {
        v = freq[i];
        c1 = i;
      }
    int c2 = -1;
    v = 1000000000L;
    for (int i = 0; i <= 256; ++i)
      if (freq[i] && freq[i] <= v && i != c1) {
        v = freq[i];
        c2 = i;
      }
    if (c2 < 0) break;

    freq[c1] += freq[c2];
    freq[c2] = 0;
    ++codesize[c1];
    while (others[c1] >= 0) {
      c1 = others[c1];
      ++codesize[c1];
    }
    others[c1] = c2;
    ++codesize[c2];
    while (others[c2] >= 0) {
      c2 = others[c2];
      ++codesize[c2];
    }
  }

  std::array<int, 33> bits{};
  for (int i = 0; i <= 256; ++i)
    if (codesize[i]) ++bits[std::min(codesize[i], 32)];

  for (int i = 32; i > 16; --i) {
    while (bits[i] > 0) {
      int j = i - 2;
      while (bits[j] == 0) --j;
      bits[i] -= 2;
      bits[i - 1] += 1;
      bits[j + 1] += 2;
      bits[j] -= 1;
    }
  }
  int i = 16;
  while (i > 0 && bits[i] == 0) --i;
  if (i > 0) --bits[i];

  HuffmanSpec spec;
  for (int len = 1; len <= 16; ++len) spec.counts[len - 1] = static_cast<std::uint8_t>(bits[len]);
  for (int len = 1; len <= 32; ++len)
    for (int s = 0; s < 256; ++s)
      if (codesize[s] == len) spec.symbols.push_back(static_cast<std::uint8_t>(s));
  return spec;
}

}  // namespace p3::jpeg::detail
