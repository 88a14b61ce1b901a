#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "p3/split/split.hpp"

namespace p3::envelope {

/// 32-byte AES-256 key. Deliberately not printable.
class KeyMaterial {
 public:
  static constexpr std::size_t kSize = 32;

  /// Throws Errc::InvalidKey unless exactly 32 bytes.
  static KeyMaterial from_bytes(std::span<const std::uint8_t> bytes);
  /// 64 hex digits, surrounding whitespace ignored.
  static KeyMaterial from_hex(std::string_view hex);
  static KeyMaterial from_file(const std::filesystem::path& path);
  static KeyMaterial generate();

  std::span<const std::uint8_t, kSize> bytes() const { return key_; }
  std::string to_hex() const;

  bool operator==(const KeyMaterial&) const = default;

 private:
  std::array<std::uint8_t, kSize> key_{};
};

inline constexpr const char* kKeyFileEnv = "P3_KEY_FILE";

/// Loads the key from `path` if given, else from the file named by
/// $P3_KEY_FILE. Throws Errc::InvalidKey when neither is available.
KeyMaterial load_key(const std::optional<std::filesystem::path>& path);

inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kNonceSize = 12;
inline constexpr std::size_t kTagSize = 16;
/// magic + version + T + id_len + nonce + tag
inline constexpr std::size_t kFixedOverhead = 4 + 1 + 2 + 4 + kNonceSize + kTagSize;

std::size_t sealed_size(std::size_t plaintext_size, std::size_t id_size);

/// AES-256-GCM with a fresh random nonce. The associated data is the whole
/// header up to the nonce, so any header change fails authentication.
std::vector<std::uint8_t> seal(std::span<const std::uint8_t> secret_jpeg, const KeyMaterial& key,
                               std::string_view photo_id, Threshold t);

/// Same as seal with a caller-chosen nonce. Only for reproducible fixtures:
/// reusing a nonce under one key breaks GCM.
std::vector<std::uint8_t> seal_with_nonce(std::span<const std::uint8_t> secret_jpeg, const KeyMaterial& key,
                                          std::string_view photo_id, Threshold t,
                                          std::span<const std::uint8_t, kNonceSize> nonce);

struct Opened {
  std::vector<std::uint8_t> secret_jpeg;
  Threshold threshold;
  std::string photo_id;
};

/// Throws Errc::BadMagic, Errc::BadVersion, Errc::Truncated or
/// Errc::AuthFailure. Never returns unauthenticated data.
Opened open(std::span<const std::uint8_t> container, const KeyMaterial& key);

/// True when the bytes start with the container magic.
bool looks_like_container(std::span<const std::uint8_t> bytes);

}  // namespace p3::envelope
