#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

namespace p3::psp {

using Bytes = std::vector<std::uint8_t>;

/// Lower-case hex SHA-256.
std::string sha256_hex(std::span<const std::uint8_t> bytes);

struct PhotoRecord {
  std::string photo_id;
  std::shared_ptr<const Bytes> original_public;
  std::map<std::string, std::shared_ptr<const Bytes>> variants;
};

/// In-memory photo and secret store. Every call is atomic with respect to
/// the others; readers share payload buffers instead of copying them.
class Store {
 public:
  /// Inserts unless the id exists. Returns false when it was already there.
  bool put_photo(PhotoRecord record);
  std::optional<PhotoRecord> photo(const std::string& id) const;
  bool has_photo(const std::string& id) const;

  void put_secret(const std::string& id, Bytes blob);
  std::shared_ptr<const Bytes> secret(const std::string& id) const;

  std::size_t photo_count() const;
  std::size_t secret_count() const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, PhotoRecord> photos_;
  std::map<std::string, std::shared_ptr<const Bytes>> secrets_;
};

}  // namespace p3::psp
