#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "p3/jpeg/types.hpp"
#include "p3/pixel/pixel_image.hpp"

namespace p3::tool {

using Bytes = std::vector<std::uint8_t>;

Bytes read_bytes(const std::filesystem::path& p);
void write_bytes(const std::filesystem::path& p, const Bytes& data);

/// JPEG, PNG, PPM or PGM by extension (JPEG when unknown). JPEGs keep their
/// native sampling; the rest come back as full-resolution YCbCr or gray.
pixel::PixelImage load_image(const std::filesystem::path& p);

/// .png, .ppm/.pgm, or .jpg (quality 95, standard tables).
void save_image(const std::filesystem::path& p, const pixel::PixelImage& img);

/// Writes coefficients verbatim for .jpg/.jpeg, otherwise decodes and
/// exports pixels.
void save_coefficients(const std::filesystem::path& p, const jpeg::QuantizedImage& img);

}  // namespace p3::tool
