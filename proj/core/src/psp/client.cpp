#include "p3/psp/client.hpp"

#include <httplib.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"
#include "p3/pixel/codec.hpp"

namespace p3::psp {

namespace {

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string describe(const httplib::Result& r) {
  if (!r) return "transport error: " + httplib::to_string(r.error());
  std::string msg = "HTTP " + std::to_string(r->status);
  const auto j = nlohmann::json::parse(r->body, nullptr, false);
  if (j.is_object() && j.contains("error")) msg += ": " + j["error"].get<std::string>();
  return msg;
}

}  // namespace

struct Client::Impl {
  explicit Impl(const std::string& url) : http(url) {
    http.set_connection_timeout(10);
    http.set_read_timeout(60);
    http.set_write_timeout(60);
  }
  std::mutex mu;  // httplib::Client is not safe for concurrent requests
  httplib::Client http;

  httplib::Result get(const std::string& path) {
    std::lock_guard lock(mu);
    return http.Get(path);
  }
  httplib::Result put(const std::string& path, std::span<const std::uint8_t> body, const char* type) {
    std::lock_guard lock(mu);
    return http.Put(path, reinterpret_cast<const char*>(body.data()), body.size(), type);
  }

  std::string upload_photo(std::span<const std::uint8_t> bytes) {
    const auto r = put("/photos", bytes, "image/jpeg");
    if (!r || (r->status != 200 && r->status != 201)) fail(Errc::Transport, "PUT /photos failed: " + describe(r));
    const auto j = nlohmann::json::parse(r->body, nullptr, false);
    if (!j.is_object() || !j.contains("photo_id") || !j["photo_id"].is_string())
      fail(Errc::Transport, "PUT /photos returned no photo_id");
    return j["photo_id"].get<std::string>();
  }

  std::string download_photo(const std::string& id, const std::string& query) {
    const std::string path = "/photos/" + id + (query.empty() ? "" : "?" + query);
    const auto r = get(path);
    if (!r || r->status != 200) fail(r && r->status == 404 ? Errc::NotFound : Errc::Transport, "GET " + path + ": " + describe(r));
    return r->body;
  }
};

Client::Client(std::string base_url, envelope::KeyMaterial key)
    : impl_(std::make_unique<Impl>(base_url)), key_(key) {}

Client::~Client() = default;

ShareResult Client::share(std::span<const std::uint8_t> jpeg_bytes, Threshold t) {
  return share(jpeg::decode_jpeg(jpeg_bytes, {.keep_metadata = true}), t);
}

ShareResult Client::share(const jpeg::QuantizedImage& img, Threshold t) {
  const auto pair = split_image(img, t);
  const auto public_bytes = jpeg::encode_jpeg(pair.public_part);
  const auto secret_bytes = jpeg::encode_jpeg(pair.secret_part);

  ShareResult out;
  out.photo_id = impl_->upload_photo(public_bytes);
  out.public_bytes = public_bytes.size();
  const auto container = envelope::seal(secret_bytes, key_, out.photo_id, t);
  out.container_bytes = container.size();

  const std::string path = "/secrets/" + out.photo_id;
  auto r = impl_->put(path, container, "application/octet-stream");
  if (!r || r->status / 100 != 2) r = impl_->put(path, container, "application/octet-stream");
  if (!r || r->status / 100 != 2) fail(Errc::Transport, "PUT " + path + " failed after retry: " + describe(r));
  return out;
}

std::shared_ptr<const Client::CachedSecret> Client::secret_for(const std::string& photo_id, bool& from_cache) {
  {
    std::shared_lock lock(cache_mu_);
    if (const auto it = cache_.find(photo_id); it != cache_.end()) {
      from_cache = true;
      std::lock_guard s(stats_mu_);
      ++stats_.cache_hits;
      return it->second;
    }
  }
  from_cache = false;
  const std::string path = "/secrets/" + photo_id;
  const auto r = impl_->get(path);
  if (r && r->status == 404) fail(Errc::MissingSecret, "no secret stored for " + photo_id);
  if (!r || r->status != 200) fail(Errc::Transport, "GET " + path + ": " + describe(r));
  {
    std::lock_guard s(stats_mu_);
    ++stats_.secret_fetches;
    stats_.secret_bytes += r->body.size();
  }
  auto opened = envelope::open(as_bytes(r->body), key_);
  if (opened.photo_id != photo_id) fail(Errc::AuthFailure, "container was sealed for a different photo");
  auto entry = std::make_shared<const CachedSecret>(
      CachedSecret{jpeg::decode_jpeg(opened.secret_jpeg, {.keep_metadata = true}), opened.threshold, r->body.size()});
  std::unique_lock lock(cache_mu_);
  return cache_.try_emplace(photo_id, std::move(entry)).first->second;
}

pixel::Calibration Client::calibrate_variant(const std::string& variant) {
  {
    std::shared_lock lock(cache_mu_);
    if (const auto it = calibrations_.find(variant); it != calibrations_.end()) return it->second;
  }
  const auto probe = calibration_probe();
  const auto probe_bytes = jpeg::encode_jpeg(probe);
  const std::string id = impl_->upload_photo(probe_bytes);
  const auto served = impl_->download_photo(id, "variant=" + variant);
  {
    std::lock_guard s(stats_mu_);
    stats_.calibration_bytes += probe_bytes.size() + served.size();
  }
  const auto original = pixel::decode_to_pixels(probe, pixel::SampleMode::Conventional);
  const auto output = pixel::decode_to_pixels(jpeg::decode_jpeg(as_bytes(served)), pixel::SampleMode::Conventional);
  pixel::Calibration cal;
  try {
    cal = pixel::calibrate_transform(original, output,
                                     pixel::candidate_grid(original.width, original.height, output.width, output.height));
  } catch (const Error& e) {
    fail(Errc::CalibrationFailed, "variant '" + variant + "': " + e.what());
  }
  std::unique_lock lock(cache_mu_);
  return calibrations_.try_emplace(variant, cal).first->second;
}

ViewResult Client::view(const std::string& photo_id, const ViewRequest& request) {
  std::string query;
  if (request.variant) {
    if (!request.dynamic.empty()) fail(Errc::Validation, "variant cannot be combined with w/h/crop");
    query = "variant=" + *request.variant;
  } else {
    query = request.dynamic.query();
  }
  const auto served = impl_->download_photo(photo_id, query);
  {
    std::lock_guard s(stats_mu_);
    ++stats_.photo_fetches;
    stats_.photo_bytes += served.size();
  }

  ViewResult out;
  const auto secret = secret_for(photo_id, out.secret_from_cache);
  out.public_bytes = served.size();
  out.container_bytes = secret->container_bytes;

  const auto pub = jpeg::decode_jpeg(as_bytes(served));
  const auto& sec = secret->secret;

  // Untouched public part: merge coefficients exactly.
  if (query.empty() && !request.transform && sha256_hex(as_bytes(served)) == photo_id) {
    out.coefficients = merge_image(pub, sec, secret->threshold);
    out.image = pixel::decode_to_pixels(*out.coefficients, pixel::SampleMode::Conventional);
    return out;
  }

  if (request.transform) {
    out.transform = *request.transform;
  } else if (request.variant) {
    const auto cal = calibrate_variant(*request.variant);
    out.calibration_psnr = cal.psnr;
    pixel::Resize r{pub.width, pub.height, pixel::Filter::Bilinear, std::nullopt};
    if (!cal.best.steps.empty())
      if (const auto* fit = std::get_if<pixel::Resize>(&cal.best.steps.back())) {
        r.filter = fit->filter;
        r.sharpen = fit->sharpen;
      }
    if (r.w == sec.width && r.h == sec.height && !r.sharpen)
      out.transform = pixel::TransformSpec::identity();
    else
      out.transform = pixel::TransformSpec{{r}};
  } else {
    out.transform = dynamic_transform(request.dynamic, sec);
  }

  const auto public_pixels = pixel::decode_to_pixels(pub, pixel::SampleMode::Conventional);
  try {
    out.image = reconstruct_transformed(public_pixels, sec, secret->threshold, out.transform);
  } catch (const Error& e) {
    if (e.code() != Errc::DimensionMismatch) throw;
    fail(Errc::CalibrationFailed, std::string("transform does not match the served image: ") + e.what());
  }
  return out;
}

ClientStats Client::stats() const {
  std::lock_guard s(stats_mu_);
  return stats_;
}

void Client::clear_cache() {
  std::unique_lock lock(cache_mu_);
  cache_.clear();
}

jpeg::QuantizedImage calibration_probe(int width, int height) {
  // Smooth gradients plus seeded noise: enough texture that the resampling
  // filters produce clearly different outputs.
  std::mt19937 rng(20140402);
  auto img = pixel::make_image(width, height, 1);
  img.max_h = img.max_v = 2;
  auto noise = [&] { return static_cast<int>(rng() % 41) - 20; };
  auto& y = img.planes[0];
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width; ++i) {
      const double v = 128 + 60 * std::sin(i * 0.07) * std::cos(j * 0.05) + 30 * std::sin((i + j) * 0.31);
      y.at(i, j) = static_cast<std::int16_t>(std::clamp(static_cast<int>(v) + noise(), 0, 255));
    }
  y.h_sampling = y.v_sampling = 2;
  for (int c = 0; c < 2; ++c) {
    pixel::Plane p((width + 1) / 2, (height + 1) / 2, 1, 1);
    for (int j = 0; j < p.height; ++j)
      for (int i = 0; i < p.width; ++i)
        p.at(i, j) = static_cast<std::int16_t>(
            std::clamp(128 + static_cast<int>(40 * std::sin((c ? i : j) * 0.11)) + noise() / 2, 0, 255));
    img.planes.push_back(std::move(p));
  }
  return pixel::quantize_pixels(img, pixel::standard_quant_tables(90));
}

}  // namespace p3::psp
