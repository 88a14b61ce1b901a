#include "p3/envelope/envelope.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <cstring>
#include <limits>
#include <memory>

#include "p3/error.hpp"

namespace p3::envelope {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'P', '3', 'S', '1'};

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

CipherCtx new_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  if (!ctx) throw std::bad_alloc();
  return ctx;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

// OpenSSL takes int lengths; chunk so multi-GiB inputs are not truncated.
void update(EVP_CIPHER_CTX* ctx, bool encrypt, const std::uint8_t* in, std::size_t n, std::uint8_t* out) {
  constexpr std::size_t kChunk = 1 << 30;
  while (n > 0) {
    const int len = static_cast<int>(std::min(n, kChunk));
    int written = 0;
    const int ok = encrypt ? EVP_EncryptUpdate(ctx, out, &written, in, len) : EVP_DecryptUpdate(ctx, out, &written, in, len);
    if (ok != 1) fail(Errc::AuthFailure, "cipher update failed");
    in += len;
    out += written;
    n -= static_cast<std::size_t>(len);
  }
}

void add_aad(EVP_CIPHER_CTX* ctx, bool encrypt, std::span<const std::uint8_t> aad) {
  int written = 0;
  const int ok = encrypt ? EVP_EncryptUpdate(ctx, nullptr, &written, aad.data(), static_cast<int>(aad.size()))
                         : EVP_DecryptUpdate(ctx, nullptr, &written, aad.data(), static_cast<int>(aad.size()));
  if (ok != 1) fail(Errc::AuthFailure, "cipher aad failed");
}

}  // namespace

std::size_t sealed_size(std::size_t plaintext_size, std::size_t id_size) {
  return plaintext_size + id_size + kFixedOverhead;
}

bool looks_like_container(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= kMagic.size() && std::equal(kMagic.begin(), kMagic.end(), bytes.begin());
}

std::vector<std::uint8_t> seal(std::span<const std::uint8_t> secret_jpeg, const KeyMaterial& key,
                               std::string_view photo_id, Threshold t) {
  std::array<std::uint8_t, kNonceSize> nonce{};
  if (RAND_bytes(nonce.data(), static_cast<int>(nonce.size())) != 1) fail(Errc::Io, "random source failed");
  return seal_with_nonce(secret_jpeg, key, photo_id, t, nonce);
}

std::vector<std::uint8_t> seal_with_nonce(std::span<const std::uint8_t> secret_jpeg, const KeyMaterial& key,
                                          std::string_view photo_id, Threshold t,
                                          std::span<const std::uint8_t, kNonceSize> nonce) {
  if (photo_id.size() > std::numeric_limits<std::uint32_t>::max()) fail(Errc::Validation, "photo id too long");
  std::vector<std::uint8_t> out;
  out.reserve(sealed_size(secret_jpeg.size(), photo_id.size()));
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  out.push_back(kVersion);
  put_u16(out, static_cast<std::uint16_t>(t.value()));
  put_u32(out, static_cast<std::uint32_t>(photo_id.size()));
  out.insert(out.end(), photo_id.begin(), photo_id.end());
  const std::size_t header_len = out.size();
  out.insert(out.end(), nonce.begin(), nonce.end());

  auto ctx = new_ctx();
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(kNonceSize), nullptr) != 1 ||
      EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes().data(), nonce.data()) != 1)
    fail(Errc::Io, "cipher init failed");
  add_aad(ctx.get(), true, std::span(out.data(), header_len));

  const std::size_t ct_offset = out.size();
  out.resize(ct_offset + secret_jpeg.size() + kTagSize);
  update(ctx.get(), true, secret_jpeg.data(), secret_jpeg.size(), out.data() + ct_offset);
  int written = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + ct_offset + secret_jpeg.size(), &written) != 1 || written != 0)
    fail(Errc::Io, "cipher final failed");
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, static_cast<int>(kTagSize),
                          out.data() + ct_offset + secret_jpeg.size()) != 1)
    fail(Errc::Io, "cipher tag failed");
  return out;
}

Opened open(std::span<const std::uint8_t> c, const KeyMaterial& key) {
  if (c.size() < kMagic.size()) fail(Errc::Truncated, "container shorter than its magic");
  if (!looks_like_container(c)) fail(Errc::BadMagic, "not a P3S1 container");
  if (c.size() < 11) fail(Errc::Truncated, "container header truncated");
  if (c[4] != kVersion) fail(Errc::BadVersion, "container version " + std::to_string(c[4]));
  const int t = (c[5] << 8) | c[6];
  const std::uint64_t id_len = (std::uint64_t{c[7]} << 24) | (c[8] << 16) | (c[9] << 8) | c[10];
  const std::uint64_t header_len = 11 + id_len;
  if (c.size() < header_len + kNonceSize + kTagSize) fail(Errc::Truncated, "container body truncated");

  const auto nonce = c.subspan(header_len, kNonceSize);
  const auto body = c.subspan(header_len + kNonceSize);
  const std::size_t ct_len = body.size() - kTagSize;

  auto ctx = new_ctx();
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(kNonceSize), nullptr) != 1 ||
      EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes().data(), nonce.data()) != 1)
    fail(Errc::Io, "cipher init failed");
  add_aad(ctx.get(), false, c.first(header_len));

  std::vector<std::uint8_t> plain(ct_len);
  update(ctx.get(), false, body.data(), ct_len, plain.data());
  std::array<std::uint8_t, kTagSize> tag{};
  std::memcpy(tag.data(), body.data() + ct_len, kTagSize);
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, static_cast<int>(kTagSize), tag.data()) != 1)
    fail(Errc::AuthFailure, "cipher tag rejected");
  int written = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + ct_len, &written) != 1)
    fail(Errc::AuthFailure, "authentication failed (wrong key or modified container)");

  // Authenticated from here on, so a bad T means a buggy sealer, not tampering.
  Opened out{std::move(plain), Threshold(t), std::string(c.begin() + 11, c.begin() + static_cast<long>(header_len))};
  return out;
}

}  // namespace p3::envelope
