#include <algorithm>
#include <array>
#include <string>

#include "bitstream.hpp"
#include "huffman.hpp"
#include "markers.hpp"
#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"

namespace p3::jpeg {

namespace {

using namespace detail;

constexpr int kMaxAc = 1023;   // category 10
constexpr int kMaxDcDiff = 2047;  // category 11

void put_u16(std::vector<std::uint8_t>& out, unsigned v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_marker(std::vector<std::uint8_t>& out, std::uint8_t code) {
  out.push_back(0xFF);
  out.push_back(code);
}

/// Receives the symbol stream of a scan; implemented once for statistics
/// gathering and once for emission so both passes see identical symbols.
struct SymbolSink {
  virtual ~SymbolSink() = default;
  virtual void dc(std::size_t comp, int category, int diff) = 0;
  virtual void ac(std::size_t comp, int run_size, int value, int size) = 0;
  virtual void restart(int n) = 0;
};

void check_ac(int v) {
  if (v < -kMaxAc || v > kMaxAc)
    fail(Errc::InvalidImage, "AC coefficient " + std::to_string(v) + " outside baseline range");
}

void walk_block(const Block& b, std::size_t comp, int& pred, SymbolSink& sink) {
  const int diff = b[0] - pred;
  if (diff < -kMaxDcDiff || diff > kMaxDcDiff)
    fail(Errc::InvalidImage, "DC difference " + std::to_string(diff) + " outside baseline range");
  pred = b[0];
  sink.dc(comp, magnitude_category(diff), diff);
  int run = 0;
  for (int k = 1; k < kBlockLen; ++k) {
    const int v = b[kZigZagToNatural[k]];
    if (v == 0) {
      ++run;
      continue;
    }
    check_ac(v);
    while (run > 15) {
      sink.ac(comp, 0xF0, 0, 0);
      run -= 16;
    }
    const int size = magnitude_category(v);
    sink.ac(comp, (run << 4) | size, v, size);
    run = 0;
  }
  if (run > 0) sink.ac(comp, 0x00, 0, 0);
}

void walk_scan(const QuantizedImage& img, SymbolSink& sink) {
  const std::size_t n = img.components.size();
  std::vector<int> pred(n, 0);
  const int interval = img.restart_interval.value_or(0);
  long mcus_wide = 0;
  long mcus_high = 0;
  if (n == 1) {
    mcus_wide = img.blocks[0].blocks_wide;
    mcus_high = img.blocks[0].blocks_high;
  } else {
    mcus_wide = (img.width + 8 * img.max_h_sampling() - 1) / (8 * img.max_h_sampling());
    mcus_high = (img.height + 8 * img.max_v_sampling() - 1) / (8 * img.max_v_sampling());
  }
  const long total = mcus_wide * mcus_high;
  int next_rst = 0;
  Block padding{};
  for (long mcu = 0; mcu < total; ++mcu) {
    if (interval && mcu > 0 && mcu % interval == 0) {
      sink.restart(next_rst);
      next_rst = (next_rst + 1) & 7;
      std::fill(pred.begin(), pred.end(), 0);
    }
    const long mx = mcu % mcus_wide;
    const long my = mcu / mcus_wide;
    for (std::size_t c = 0; c < n; ++c) {
      const auto& grid = img.blocks[c];
      if (n == 1) {
        walk_block(grid.at(static_cast<int>(mx), static_cast<int>(my)), c, pred[c], sink);
        continue;
      }
      const auto& spec = img.components[c];
      for (int v = 0; v < spec.v_sampling; ++v) {
        for (int h = 0; h < spec.h_sampling; ++h) {
          const long bx = mx * spec.h_sampling + h;
          const long by = my * spec.v_sampling + v;
          if (bx < grid.blocks_wide && by < grid.blocks_high) {
            walk_block(grid.at(static_cast<int>(bx), static_cast<int>(by)), c, pred[c], sink);
          } else {
            // Blocks past the image edge are discarded by decoders: repeat
            // the running DC so they cost a single zero-difference symbol.
            padding.fill(0);
            padding[0] = static_cast<std::int16_t>(pred[c]);
            walk_block(padding, c, pred[c], sink);
          }
        }
      }
    }
  }
}

/// DC/AC tables 0 serve the first component, tables 1 the chroma components.
int table_slot(std::size_t comp) { return comp == 0 ? 0 : 1; }

struct Statistics : SymbolSink {
  std::array<std::array<std::uint32_t, 256>, 2> dc_freq{};
  std::array<std::array<std::uint32_t, 256>, 2> ac_freq{};
  void dc(std::size_t comp, int category, int) override { ++dc_freq[table_slot(comp)][category]; }
  void ac(std::size_t comp, int rs, int, int) override { ++ac_freq[table_slot(comp)][rs]; }
  void restart(int) override {}
};

struct Emitter : SymbolSink {
  BitWriter& out;
  std::array<HuffmanEncoder, 2> dc_tab;
  std::array<HuffmanEncoder, 2> ac_tab;

  explicit Emitter(BitWriter& w) : out(w) {}

  static std::uint32_t low_bits(int v, int size) {
    // Negative values are sent as v - 1 in `size` bits (one's complement).
    const int adj = v < 0 ? v - 1 : v;
    return static_cast<std::uint32_t>(adj) & ((1u << size) - 1u);
  }
  void dc(std::size_t comp, int category, int diff) override {
    const auto& t = dc_tab[table_slot(comp)];
    if (t.size[category] == 0) fail(Errc::InvalidImage, "DC symbol missing from Huffman table");
    t.emit(out, category);
    if (category) out.put(low_bits(diff, category), category);
  }
  void ac(std::size_t comp, int rs, int value, int size) override {
    const auto& t = ac_tab[table_slot(comp)];
    if (t.size[rs] == 0) fail(Errc::InvalidImage, "AC symbol missing from Huffman table");
    t.emit(out, rs);
    if (size) out.put(low_bits(value, size), size);
  }
  void restart(int n) override { out.marker(static_cast<std::uint8_t>(kRST0 + n)); }
};

void write_dht(std::vector<std::uint8_t>& out, int tc, int th, const HuffmanSpec& spec) {
  put_marker(out, kDHT);
  put_u16(out, static_cast<unsigned>(2 + 1 + 16 + spec.symbols.size()));
  out.push_back(static_cast<std::uint8_t>((tc << 4) | th));
  out.insert(out.end(), spec.counts.begin(), spec.counts.end());
  out.insert(out.end(), spec.symbols.begin(), spec.symbols.end());
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const QuantizedImage& img, const EncodeOptions& options) {
  img.validate();
  const std::size_t ncomp = img.components.size();
  const int slots = ncomp > 1 ? 2 : 1;

  std::array<HuffmanSpec, 2> dc_spec;
  std::array<HuffmanSpec, 2> ac_spec;
  if (options.huffman == HuffmanMode::Optimized) {
    Statistics stats;
    walk_scan(img, stats);
    for (int s = 0; s < slots; ++s) {
      dc_spec[s] = optimal_spec(stats.dc_freq[s]);
      ac_spec[s] = optimal_spec(stats.ac_freq[s]);
    }
  } else {
    dc_spec = {std_dc_luma(), std_dc_chroma()};
    ac_spec = {std_ac_luma(), std_ac_chroma()};
  }

  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(img.width) * img.height / 2 + 1024);
  put_marker(out, kSOI);

  // APP0 JFIF 1.01, no density, no thumbnail.
  put_marker(out, kAPP0);
  put_u16(out, 16);
  for (char ch : {'J', 'F', 'I', 'F', '\0'}) out.push_back(static_cast<std::uint8_t>(ch));
  out.insert(out.end(), {1, 1, 0, 0, 1, 0, 1, 0, 0});

  for (const auto& seg : img.metadata) {
    if (seg.payload.size() > 65533) fail(Errc::InvalidImage, "metadata segment too large");
    put_marker(out, seg.marker);
    put_u16(out, static_cast<unsigned>(seg.payload.size() + 2));
    out.insert(out.end(), seg.payload.begin(), seg.payload.end());
  }

  bool wide_tables = false;
  for (const auto& t : img.quant_tables) {
    const bool wide = std::any_of(t.values.begin(), t.values.end(), [](auto v) { return v > 255; });
    wide_tables = wide_tables || wide;
    put_marker(out, kDQT);
    put_u16(out, wide ? 2 + 1 + 128 : 2 + 1 + 64);
    out.push_back(static_cast<std::uint8_t>(((wide ? 1 : 0) << 4) | t.id));
    for (auto v : t.values) {
      if (wide) out.push_back(static_cast<std::uint8_t>(v >> 8));
      out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
  }

  put_marker(out, wide_tables ? kSOF1 : kSOF0);
  put_u16(out, static_cast<unsigned>(8 + 3 * ncomp));
  out.push_back(8);
  put_u16(out, static_cast<unsigned>(img.height));
  put_u16(out, static_cast<unsigned>(img.width));
  out.push_back(static_cast<std::uint8_t>(ncomp));
  for (const auto& c : img.components) {
    out.push_back(c.id);
    out.push_back(static_cast<std::uint8_t>((c.h_sampling << 4) | c.v_sampling));
    out.push_back(c.quant_table_id);
  }

  for (int s = 0; s < slots; ++s) {
    write_dht(out, 0, s, dc_spec[s]);
    write_dht(out, 1, s, ac_spec[s]);
  }

  if (img.restart_interval && *img.restart_interval > 0) {
    put_marker(out, kDRI);
    put_u16(out, 4);
    put_u16(out, *img.restart_interval);
  }

  put_marker(out, kSOS);
  put_u16(out, static_cast<unsigned>(6 + 2 * ncomp));
  out.push_back(static_cast<std::uint8_t>(ncomp));
  for (std::size_t c = 0; c < ncomp; ++c) {
    out.push_back(img.components[c].id);
    const int slot = table_slot(c);
    out.push_back(static_cast<std::uint8_t>((slot << 4) | slot));
  }
  out.insert(out.end(), {0, 63, 0});

  BitWriter writer(out);
  Emitter emitter(writer);
  for (int s = 0; s < slots; ++s) {
    emitter.dc_tab[s] = HuffmanEncoder(dc_spec[s]);
    emitter.ac_tab[s] = HuffmanEncoder(ac_spec[s]);
  }
  walk_scan(img, emitter);
  writer.flush();
  put_marker(out, kEOI);
  return out;
}

}  // namespace p3::jpeg
