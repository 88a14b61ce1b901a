#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>

#include "p3/envelope/envelope.hpp"
#include "p3/jpeg/types.hpp"
#include "p3/pixel/calibrate.hpp"
#include "p3/pixel/pixel_image.hpp"
#include "p3/psp/pipeline.hpp"
#include "p3/psp/store.hpp"
#include "p3/split/split.hpp"

namespace p3::psp {

struct ClientStats {
  std::size_t secret_fetches = 0;
  std::size_t secret_bytes = 0;  // container bytes downloaded
  std::size_t cache_hits = 0;
  std::size_t photo_fetches = 0;
  std::size_t photo_bytes = 0;  // public bytes downloaded for views
  std::size_t calibration_bytes = 0;  // probe traffic, both directions
};

struct ShareResult {
  std::string photo_id;
  std::size_t public_bytes = 0;
  std::size_t container_bytes = 0;
};

struct ViewRequest {
  std::optional<std::string> variant;
  DynamicRequest dynamic;
  /// Operator the provider applied, when the caller knows it. Otherwise it
  /// is derived from the URL for dynamic requests, or calibrated for static
  /// variants.
  std::optional<pixel::TransformSpec> transform;
};

struct ViewResult {
  pixel::PixelImage image;  // conventional YCbCr
  /// Set when the untouched public part was merged in the coefficient domain.
  std::optional<jpeg::QuantizedImage> coefficients;
  pixel::TransformSpec transform;
  std::optional<double> calibration_psnr;  // probe fit, when calibration ran
  std::size_t public_bytes = 0;
  std::size_t container_bytes = 0;
  bool secret_from_cache = false;
};

/// Sender and recipient flows against the mock provider.
class Client {
 public:
  Client(std::string base_url, envelope::KeyMaterial key);
  ~Client();

  /// split -> encode -> PUT public -> seal under the returned id -> PUT secret
  /// (one retry). Throws Errc::Transport with context on HTTP failures.
  ShareResult share(const jpeg::QuantizedImage& img, Threshold t);
  ShareResult share(std::span<const std::uint8_t> jpeg_bytes, Threshold t);

  /// Fetches the requested public rendition and the secret (cache first) and
  /// reconstructs. Throws Errc::MissingSecret, Errc::AuthFailure,
  /// Errc::CalibrationFailed, Errc::Transport.
  ViewResult view(const std::string& photo_id, const ViewRequest& request = {});

  /// Recovers the provider's resize for a static variant by uploading a
  /// probe photo once per variant name. Cached.
  pixel::Calibration calibrate_variant(const std::string& variant);

  ClientStats stats() const;
  void clear_cache();

 private:
  struct Impl;
  struct CachedSecret {
    jpeg::QuantizedImage secret;
    Threshold threshold;
    std::size_t container_bytes;
  };

  std::shared_ptr<const CachedSecret> secret_for(const std::string& photo_id, bool& from_cache);

  std::unique_ptr<Impl> impl_;
  envelope::KeyMaterial key_;
  mutable std::shared_mutex cache_mu_;
  std::map<std::string, std::shared_ptr<const CachedSecret>> cache_;
  std::map<std::string, pixel::Calibration> calibrations_;
  mutable std::mutex stats_mu_;
  ClientStats stats_;
};

/// Deterministic textured photo used to probe provider pipelines.
jpeg::QuantizedImage calibration_probe(int width = 960, int height = 720);

}  // namespace p3::psp
