#include "p3/psp/store.hpp"

#include <openssl/sha.h>

#include <mutex>

namespace p3::psp {

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(bytes.data(), bytes.size(), digest);
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * SHA256_DIGEST_LENGTH);
  for (unsigned char b : digest) {
    out += kDigits[b >> 4];
    out += kDigits[b & 15];
  }
  return out;
}

bool Store::put_photo(PhotoRecord record) {
  std::unique_lock lock(mu_);
  const std::string id = record.photo_id;
  return photos_.try_emplace(id, std::move(record)).second;
}

std::optional<PhotoRecord> Store::photo(const std::string& id) const {
  std::shared_lock lock(mu_);
  const auto it = photos_.find(id);
  if (it == photos_.end()) return std::nullopt;
  return it->second;
}

bool Store::has_photo(const std::string& id) const {
  std::shared_lock lock(mu_);
  return photos_.count(id) != 0;
}

void Store::put_secret(const std::string& id, Bytes blob) {
  auto p = std::make_shared<const Bytes>(std::move(blob));
  std::unique_lock lock(mu_);
  secrets_[id] = std::move(p);
}

std::shared_ptr<const Bytes> Store::secret(const std::string& id) const {
  std::shared_lock lock(mu_);
  const auto it = secrets_.find(id);
  return it == secrets_.end() ? nullptr : it->second;
}

std::size_t Store::photo_count() const {
  std::shared_lock lock(mu_);
  return photos_.size();
}

std::size_t Store::secret_count() const {
  std::shared_lock lock(mu_);
  return secrets_.size();
}

}  // namespace p3::psp
