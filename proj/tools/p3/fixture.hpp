#pragma once

#include <cstdint>

#include "p3/jpeg/types.hpp"

namespace p3::tool {

/// Deterministic photo-like 4:2:0 test image for a given seed.
jpeg::QuantizedImage synthetic_photo(int width, int height, std::uint64_t seed, int quality = 90);

}  // namespace p3::tool
