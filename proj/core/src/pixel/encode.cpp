#include <algorithm>
#include <cmath>

#include "../jpeg/tables.hpp"
#include "p3/error.hpp"
#include "p3/pixel/codec.hpp"
#include "p3/pixel/dct.hpp"

namespace p3::pixel {

namespace {

jpeg::QuantTable scaled(const std::array<std::uint16_t, 64>& base, int quality, std::uint8_t id) {
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  jpeg::QuantTable t;
  t.id = id;
  for (int n = 0; n < 64; ++n) {
    const long v = (static_cast<long>(base[n]) * scale + 50) / 100;
    t.values[jpeg::kNaturalToZigZag[n]] = static_cast<std::uint16_t>(std::clamp(v, 1L, 255L));
  }
  return t;
}

}  // namespace

std::vector<jpeg::QuantTable> standard_quant_tables(int quality) {
  if (quality < 1 || quality > 100) fail(Errc::Validation, "quality must be in 1..100");
  return {scaled(jpeg::detail::kStdLumaQuant, quality, 0), scaled(jpeg::detail::kStdChromaQuant, quality, 1)};
}

jpeg::QuantizedImage quantize_pixels(const PixelImage& img, const std::vector<jpeg::QuantTable>& tables,
                                     const std::vector<int>& table_ids) {
  img.validate();
  if (img.mode != SampleMode::Conventional || img.colorspace != ColorSpace::YCbCr)
    fail(Errc::GeometryError, "quantize_pixels expects a conventional YCbCr image");
  if (!table_ids.empty() && table_ids.size() != img.planes.size())
    fail(Errc::Validation, "one table id per plane required");

  jpeg::QuantizedImage out;
  out.width = img.width;
  out.height = img.height;
  out.quant_tables = tables;
  for (std::size_t c = 0; c < img.planes.size(); ++c) {
    const auto& p = img.planes[c];
    jpeg::ComponentSpec spec;
    spec.id = static_cast<std::uint8_t>(c + 1);
    spec.h_sampling = static_cast<std::uint8_t>(p.h_sampling);
    spec.v_sampling = static_cast<std::uint8_t>(p.v_sampling);
    spec.quant_table_id = static_cast<std::uint8_t>(table_ids.empty() ? (c == 0 ? 0 : 1) : table_ids[c]);
    out.components.push_back(spec);
  }
  // A table id that does not exist fails here, before any work.
  for (std::size_t c = 0; c < out.components.size(); ++c) (void)out.table_for(c);

  for (std::size_t c = 0; c < img.planes.size(); ++c) {
    const auto& p = img.planes[c];
    const auto& table = out.table_for(c);
    jpeg::BlockGrid grid(out.component_blocks_wide(c), out.component_blocks_high(c));
    BlockF samples{};
    for (int by = 0; by < grid.blocks_high; ++by)
      for (int bx = 0; bx < grid.blocks_wide; ++bx) {
        for (int y = 0; y < 8; ++y)
          for (int x = 0; x < 8; ++x) {
            const int sx = std::min(bx * 8 + x, p.width - 1);
            const int sy = std::min(by * 8 + y, p.height - 1);
            samples[y * 8 + x] = p.at(sx, sy) - 128.0;
          }
        const BlockF coeffs = fdct_block(samples);
        auto& block = grid.at(bx, by);
        for (int n = 0; n < 64; ++n) {
          const double q = std::round(coeffs[n] / table.at_natural(n));
          const double lim = n == 0 ? 2047.0 : 1023.0;
          block[n] = static_cast<std::int16_t>(std::clamp(q, -lim, lim));
        }
      }
    out.blocks.push_back(std::move(grid));
  }
  out.validate();
  return out;
}

}  // namespace p3::pixel
