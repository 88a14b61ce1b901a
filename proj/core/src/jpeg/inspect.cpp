#include <cstdio>

#include "markers.hpp"
#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"
#include "segments.hpp"

namespace p3::jpeg {

using namespace detail;

std::string marker_name(std::uint8_t code) {
  char buf[16];
  if (code == kSOI) return "SOI";
  if (code == kEOI) return "EOI";
  if (code == kSOS) return "SOS";
  if (code == kDQT) return "DQT";
  if (code == kDHT) return "DHT";
  if (code == kDRI) return "DRI";
  if (code == kDNL) return "DNL";
  if (code == kDAC) return "DAC";
  if (code == kCOM) return "COM";
  if (code == 0x01) return "TEM";
  if (is_rst(code)) {
    std::snprintf(buf, sizeof buf, "RST%d", code - kRST0);
    return buf;
  }
  if (is_app(code)) {
    std::snprintf(buf, sizeof buf, "APP%d", code - kAPP0);
    return buf;
  }
  if (is_sof(code)) {
    std::snprintf(buf, sizeof buf, "SOF%d", code - kSOF0);
    return buf;
  }
  std::snprintf(buf, sizeof buf, "0x%02X", code);
  return buf;
}

JpegInfo inspect(std::span<const std::uint8_t> data) {
  if (data.size() < 4 || data[0] != 0xFF || data[1] != kSOI) fail(Errc::CorruptStream, "missing SOI marker");
  JpegInfo info;
  info.kind = "unknown";
  info.markers.push_back({kSOI, "SOI", 0, 0});
  std::size_t pos = 2;
  bool in_header = true;  // strict parsing until the first SOS

  while (pos < data.size()) {
    if (data[pos] != 0xFF) {
      if (in_header) fail(Errc::CorruptStream, "expected marker at offset " + std::to_string(pos));
      ++pos;
      continue;
    }
    std::size_t at = pos;
    while (pos < data.size() && data[pos] == 0xFF) ++pos;
    if (pos >= data.size()) break;
    const auto code = data[pos++];
    if (code == 0x00) {
      if (in_header) fail(Errc::CorruptStream, "stuffed byte outside entropy data");
      continue;
    }
    at = pos - 2;
    if (is_standalone(code)) {
      if (is_rst(code)) continue;  // restart markers are not interesting in the listing
      info.markers.push_back({code, marker_name(code), at, 0});
      if (code == kEOI) break;
      continue;
    }

    std::span<const std::uint8_t> payload;
    try {
      payload = take_segment(data, pos);
    } catch (const Error&) {
      if (in_header) throw;
      break;
    }
    info.markers.push_back({code, marker_name(code), at, payload.size() + 2});

    if (is_sof(code)) {
      info.kind = sof_kind(code);
      SegmentReader r(payload, "SOF");
      info.precision = r.u8();
      info.height = r.u16();
      info.width = r.u16();
      const int n = r.u8();
      for (int i = 0; i < n; ++i) {
        ComponentInfo c;
        c.id = r.u8();
        const auto hv = r.u8();
        c.h_sampling = hv >> 4;
        c.v_sampling = hv & 0x0F;
        c.quant_table_id = r.u8();
        info.components.push_back(c);
      }
      info.decodable = (code == kSOF0 || code == kSOF1) && info.precision == 8 && (n == 1 || n == 3);
    } else if (code == kDQT) {
      parse_dqt(payload, [&](const QuantTable& t, int bits) {
        QuantTableInfo q;
        q.id = t.id;
        q.precision_bits = bits;
        q.min = q.max = t.values[0];
        long sum = 0;
        for (auto v : t.values) {
          q.min = std::min<int>(q.min, v);
          q.max = std::max<int>(q.max, v);
          sum += v;
        }
        q.mean = static_cast<double>(sum) / kBlockLen;
        info.quant_tables.push_back(q);
      });
    } else if (code == kDHT) {
      parse_dht(payload, [&](int tc, int th, const HuffmanSpec& spec) {
        info.huffman_tables.push_back({tc, th, static_cast<int>(spec.symbols.size())});
      });
    } else if (code == kDRI) {
      SegmentReader r(payload, "DRI");
      info.restart_interval = r.u16();
    } else if (code == kSOS) {
      ++info.scans;
      in_header = false;
    }
  }
  if (info.kind == "unknown" && info.scans > 0) fail(Errc::CorruptStream, "scan without frame header");
  return info;
}

}  // namespace p3::jpeg
