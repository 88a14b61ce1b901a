#include <algorithm>
#include <array>
#include <optional>
#include <string>

#include "bitstream.hpp"
#include "huffman.hpp"
#include "markers.hpp"
#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"
#include "segments.hpp"

namespace p3::jpeg {

namespace detail {

void parse_dqt(std::span<const std::uint8_t> payload, const std::function<void(const QuantTable&, int)>& on_table) {
  SegmentReader r(payload, "DQT");
  while (r.remaining() > 0) {
    const auto pq_tq = r.u8();
    const int precision = pq_tq >> 4;
    const int id = pq_tq & 0x0F;
    if (precision > 1 || id > 3) fail(Errc::CorruptStream, "bad DQT table header");
    QuantTable t;
    t.id = static_cast<std::uint8_t>(id);
    for (int k = 0; k < kBlockLen; ++k) {
      t.values[k] = precision ? r.u16() : r.u8();
      if (t.values[k] == 0) fail(Errc::CorruptStream, "zero quantization step");
    }
    on_table(t, precision ? 16 : 8);
  }
}

void parse_dht(std::span<const std::uint8_t> payload,
               const std::function<void(int, int, const HuffmanSpec&)>& on_table) {
  SegmentReader r(payload, "DHT");
  while (r.remaining() > 0) {
    const auto tc_th = r.u8();
    const int tc = tc_th >> 4;
    const int th = tc_th & 0x0F;
    if (tc > 1 || th > 3) fail(Errc::CorruptStream, "bad DHT table header");
    HuffmanSpec spec;
    int total = 0;
    for (int i = 0; i < 16; ++i) {
      spec.counts[i] = r.u8();
      total += spec.counts[i];
    }
    if (total > 256) fail(Errc::CorruptStream, "DHT declares more than 256 symbols");
    auto syms = r.bytes(static_cast<std::size_t>(total));
    spec.symbols.assign(syms.begin(), syms.end());
    on_table(tc, th, spec);
  }
}

}  // namespace detail

namespace {

using namespace detail;

struct FrameComponent {
  ComponentSpec spec;
  bool scanned = false;
};

struct ScanComponent {
  std::size_t index = 0;
  int dc_table = 0;
  int ac_table = 0;
};

class Decoder {
 public:
  Decoder(std::span<const std::uint8_t> data, const DecodeOptions& options) : data_(data), options_(options) {}

  QuantizedImage run() {
    if (data_.size() < 4 || data_[0] != 0xFF || data_[1] != kSOI) fail(Errc::CorruptStream, "missing SOI marker");
    pos_ = 2;
    for (;;) {
      const auto m = next_marker(data_, pos_);
      if (m == kEOI) break;
      if (is_rst(m)) fail(Errc::CorruptStream, "restart marker outside entropy data");
      if (m == 0x01) continue;  // TEM
      if (is_sof(m)) {
        read_frame(m);
      } else if (m == kDHT) {
        parse_dht(take_segment(data_, pos_), [&](int tc, int th, const HuffmanSpec& spec) {
          (tc == 0 ? dc_ : ac_)[th] = HuffmanDecoder(spec);
        });
      } else if (m == kDQT) {
        parse_dqt(take_segment(data_, pos_), [&](const QuantTable& t, int) { quant_[t.id] = t; });
      } else if (m == kDRI) {
        SegmentReader r(take_segment(data_, pos_), "DRI");
        restart_interval_ = r.u16();
      } else if (m == kDAC) {
        fail(Errc::UnsupportedFormat, "arithmetic coding is not supported");
      } else if (m == kDNL) {
        fail(Errc::UnsupportedFormat, "DNL marker is not supported");
      } else if (m == kSOS) {
        read_scan();
      } else {
        auto payload = take_segment(data_, pos_);
        if ((is_app(m) || m == kCOM) && options_.keep_metadata && !is_jfif_app0(m, payload))
          metadata_.push_back(Segment{m, {payload.begin(), payload.end()}});
      }
    }
    return finish();
  }

 private:
  static bool is_jfif_app0(std::uint8_t m, std::span<const std::uint8_t> p) {
    return m == kAPP0 && p.size() >= 5 && p[0] == 'J' && p[1] == 'F' && p[2] == 'I' && p[3] == 'F' && p[4] == 0;
  }

  void read_frame(std::uint8_t m) {
    if (m != kSOF0 && m != kSOF1)
      fail(Errc::UnsupportedFormat, std::string(sof_kind(m)) + " JPEG is not supported");
    if (frame_seen_) fail(Errc::CorruptStream, "duplicate SOF marker");
    frame_seen_ = true;
    SegmentReader r(take_segment(data_, pos_), "SOF");
    const int precision = r.u8();
    if (precision != 8) fail(Errc::UnsupportedFormat, std::to_string(precision) + "-bit samples are not supported");
    img_.height = r.u16();
    img_.width = r.u16();
    if (img_.height == 0) fail(Errc::UnsupportedFormat, "deferred height (DNL) is not supported");
    if (img_.width == 0) fail(Errc::CorruptStream, "zero image width");
    const int n = r.u8();
    if (n != 1 && n != 3) fail(Errc::UnsupportedFormat, std::to_string(n) + "-component images are not supported");
    for (int i = 0; i < n; ++i) {
      FrameComponent fc;
      fc.spec.id = r.u8();
      const auto hv = r.u8();
      fc.spec.h_sampling = hv >> 4;
      fc.spec.v_sampling = hv & 0x0F;
      fc.spec.quant_table_id = r.u8();
      if (fc.spec.h_sampling < 1 || fc.spec.h_sampling > 4 || fc.spec.v_sampling < 1 || fc.spec.v_sampling > 4)
        fail(Errc::CorruptStream, "bad sampling factors");
      if (fc.spec.quant_table_id > 3) fail(Errc::CorruptStream, "bad quant table selector");
      for (const auto& other : frame_)
        if (other.spec.id == fc.spec.id) fail(Errc::CorruptStream, "duplicate component id");
      frame_.push_back(fc);
      img_.components.push_back(fc.spec);
    }
    if (n == 1) {
      // A lone component is always coded non-interleaved at full resolution.
      img_.components[0].h_sampling = 1;
      img_.components[0].v_sampling = 1;
    }
    const int hmax = img_.max_h_sampling();
    const int vmax = img_.max_v_sampling();
    for (const auto& c : img_.components)
      if (hmax % c.h_sampling || vmax % c.v_sampling)
        fail(Errc::UnsupportedFormat, "non-integral sampling ratios are not supported");
    for (std::size_t c = 0; c < img_.components.size(); ++c)
      img_.blocks.emplace_back(img_.component_blocks_wide(c), img_.component_blocks_high(c));
  }

  void read_scan() {
    if (!frame_seen_) fail(Errc::CorruptStream, "SOS before SOF");
    SegmentReader r(take_segment(data_, pos_), "SOS");
    const int ns = r.u8();
    if (ns < 1 || ns > 4) fail(Errc::CorruptStream, "bad scan component count");
    std::vector<ScanComponent> comps;
    for (int i = 0; i < ns; ++i) {
      const auto cs = r.u8();
      const auto tables = r.u8();
      auto it = std::find_if(frame_.begin(), frame_.end(), [&](const FrameComponent& f) { return f.spec.id == cs; });
      if (it == frame_.end()) fail(Errc::CorruptStream, "scan references unknown component");
      if (it->scanned) fail(Errc::CorruptStream, "component appears in more than one scan");
      it->scanned = true;
      ScanComponent sc{static_cast<std::size_t>(it - frame_.begin()), tables >> 4, tables & 0x0F};
      if (sc.dc_table > 3 || sc.ac_table > 3 || !dc_[sc.dc_table].defined() || !ac_[sc.ac_table].defined())
        fail(Errc::CorruptStream, "scan references undefined Huffman table");
      comps.push_back(sc);
    }
    const int ss = r.u8();
    const int se = r.u8();
    const int ahal = r.u8();
    if (ss != 0 || se != 63 || ahal != 0) fail(Errc::CorruptStream, "invalid spectral selection for sequential scan");
    if (ns > 1) {
      int per_mcu = 0;
      for (const auto& sc : comps) per_mcu += img_.components[sc.index].h_sampling * img_.components[sc.index].v_sampling;
      if (per_mcu > 10) fail(Errc::CorruptStream, "more than 10 blocks per MCU");
    }
    for (const auto& sc : comps) (void)quant_for(sc.index);

    BitReader in(data_, pos_);
    decode_scan(comps, in);
    if (in.overrun()) fail(Errc::CorruptStream, "entropy data truncated");
    if (!in.finish_segment()) fail(Errc::CorruptStream, "entropy data truncated (no marker after scan)");
    pos_ = in.position();
  }

  const QuantTable& quant_for(std::size_t c) {
    const auto id = img_.components[c].quant_table_id;
    if (!quant_[id]) fail(Errc::CorruptStream, "component references undefined quantization table");
    return *quant_[id];
  }

  void decode_block(BitReader& in, const ScanComponent& sc, int& pred, Block& out) {
    out.fill(0);
    const int t = dc_[sc.dc_table].decode(in);
    if (t > 15) fail(Errc::CorruptStream, "bad DC category");
    const int diff = extend(in.get_bits(t), t);
    pred += diff;
    if (pred < -32768 || pred > 32767) fail(Errc::CorruptStream, "DC coefficient overflow");
    out[0] = static_cast<std::int16_t>(pred);
    const auto& ac = ac_[sc.ac_table];
    for (int k = 1; k < kBlockLen;) {
      const int rs = ac.decode(in);
      const int run = rs >> 4;
      const int size = rs & 0x0F;
      if (size == 0) {
        if (run != 15) break;  // EOB
        k += 16;
        continue;
      }
      k += run;
      if (k > 63) fail(Errc::CorruptStream, "AC coefficient index out of range");
      out[kZigZagToNatural[k]] = static_cast<std::int16_t>(extend(in.get_bits(size), size));
      ++k;
    }
  }

  void decode_scan(const std::vector<ScanComponent>& comps, BitReader& in) {
    std::vector<int> pred(comps.size(), 0);
    Block scratch{};
    long mcus_wide = 0;
    long mcus_high = 0;
    if (comps.size() == 1) {
      mcus_wide = img_.component_blocks_wide(comps[0].index);
      mcus_high = img_.component_blocks_high(comps[0].index);
    } else {
      mcus_wide = (img_.width + 8 * img_.max_h_sampling() - 1) / (8 * img_.max_h_sampling());
      mcus_high = (img_.height + 8 * img_.max_v_sampling() - 1) / (8 * img_.max_v_sampling());
    }
    const long total = mcus_wide * mcus_high;
    int next_rst = 0;
    for (long mcu = 0; mcu < total; ++mcu) {
      if (restart_interval_ && mcu > 0 && mcu % restart_interval_ == 0) {
        const auto marker = in.finish_segment();
        if (!marker || *marker != kRST0 + next_rst) fail(Errc::CorruptStream, "missing or out-of-order restart marker");
        in.resume_after_marker();
        next_rst = (next_rst + 1) & 7;
        std::fill(pred.begin(), pred.end(), 0);
      }
      const long mx = mcu % mcus_wide;
      const long my = mcu / mcus_wide;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto& sc = comps[i];
        auto& grid = img_.blocks[sc.index];
        if (comps.size() == 1) {
          decode_block(in, sc, pred[i], grid.at(static_cast<int>(mx), static_cast<int>(my)));
          continue;
        }
        const auto& spec = img_.components[sc.index];
        for (int v = 0; v < spec.v_sampling; ++v) {
          for (int h = 0; h < spec.h_sampling; ++h) {
            const long bx = mx * spec.h_sampling + h;
            const long by = my * spec.v_sampling + v;
            const bool inside = bx < grid.blocks_wide && by < grid.blocks_high;
            decode_block(in, sc, pred[i], inside ? grid.at(static_cast<int>(bx), static_cast<int>(by)) : scratch);
          }
        }
      }
      if (in.overrun()) fail(Errc::CorruptStream, "entropy data truncated");
    }
  }

  QuantizedImage finish() {
    if (!frame_seen_) fail(Errc::CorruptStream, "no frame header");
    for (const auto& fc : frame_)
      if (!fc.scanned) fail(Errc::CorruptStream, "component missing from scans");
    std::array<bool, 4> used{};
    for (std::size_t c = 0; c < img_.components.size(); ++c) {
      (void)quant_for(c);
      used[img_.components[c].quant_table_id] = true;
    }
    for (int id = 0; id < 4; ++id)
      if (used[id]) img_.quant_tables.push_back(*quant_[id]);
    if (restart_interval_) img_.restart_interval = restart_interval_;
    img_.metadata = std::move(metadata_);
    return std::move(img_);
  }

  std::span<const std::uint8_t> data_;
  DecodeOptions options_;
  std::size_t pos_ = 0;
  bool frame_seen_ = false;
  std::vector<FrameComponent> frame_;
  std::array<std::optional<QuantTable>, 4> quant_{};
  std::array<HuffmanDecoder, 4> dc_{};
  std::array<HuffmanDecoder, 4> ac_{};
  std::uint16_t restart_interval_ = 0;
  std::vector<Segment> metadata_;
  QuantizedImage img_;
};

}  // namespace

QuantizedImage decode_jpeg(std::span<const std::uint8_t> bytes, const DecodeOptions& options) {
  return Decoder(bytes, options).run();
}

}  // namespace p3::jpeg
