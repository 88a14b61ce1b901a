#pragma once

#include <functional>
#include <span>

#include "p3/jpeg/types.hpp"
#include "tables.hpp"

namespace p3::jpeg::detail {

/// Calls `on_table(table, precision_bits)` for each table in a DQT payload.
void parse_dqt(std::span<const std::uint8_t> payload, const std::function<void(const QuantTable&, int)>& on_table);

/// Calls `on_table(class, id, spec)` for each table in a DHT payload.
void parse_dht(std::span<const std::uint8_t> payload,
               const std::function<void(int, int, const HuffmanSpec&)>& on_table);

}  // namespace p3::jpeg::detail
