#include <openssl/rand.h>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "p3/envelope/envelope.hpp"
#include "p3/error.hpp"

namespace p3::envelope {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

KeyMaterial KeyMaterial::from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kSize) fail(Errc::InvalidKey, "key must be 32 bytes, got " + std::to_string(bytes.size()));
  KeyMaterial k;
  std::copy(bytes.begin(), bytes.end(), k.key_.begin());
  return k;
}

KeyMaterial KeyMaterial::from_hex(std::string_view hex) {
  while (!hex.empty() && std::isspace(static_cast<unsigned char>(hex.front()))) hex.remove_prefix(1);
  while (!hex.empty() && std::isspace(static_cast<unsigned char>(hex.back()))) hex.remove_suffix(1);
  if (hex.size() != 2 * kSize) fail(Errc::InvalidKey, "key must be 64 hex digits");
  KeyMaterial k;
  for (std::size_t i = 0; i < kSize; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) fail(Errc::InvalidKey, "key contains a non-hex character");
    k.key_[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return k;
}

KeyMaterial KeyMaterial::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::InvalidKey, "cannot read key file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_hex(ss.str());
}

KeyMaterial KeyMaterial::generate() {
  KeyMaterial k;
  if (RAND_bytes(k.key_.data(), static_cast<int>(kSize)) != 1) fail(Errc::Io, "random source failed");
  return k;
}

std::string KeyMaterial::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : key_) {
    out += kDigits[b >> 4];
    out += kDigits[b & 15];
  }
  return out;
}

KeyMaterial load_key(const std::optional<std::filesystem::path>& path) {
  if (path) return KeyMaterial::from_file(*path);
  if (const char* env = std::getenv(kKeyFileEnv); env && *env) return KeyMaterial::from_file(env);
  fail(Errc::InvalidKey, std::string("no key: pass --key or set ") + kKeyFileEnv);
}

}  // namespace p3::envelope
