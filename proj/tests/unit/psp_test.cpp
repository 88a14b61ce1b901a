#include <gtest/gtest.h>

#include <httplib.h>

#include <cmath>
#include <thread>

#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"
#include "p3/pixel/codec.hpp"
#include "p3/psp/client.hpp"
#include "p3/psp/service.hpp"
#include "support.hpp"

using namespace p3;
using namespace p3::psp;

namespace {

jpeg::QuantizedImage synthetic_photo(int w, int h, unsigned seed = 1) {
  auto img = pixel::make_image(w, h, 3);
  img.max_h = img.max_v = 2;
  img.planes[0].h_sampling = img.planes[0].v_sampling = 2;
  img.planes[1] = pixel::Plane(img.plane_width_for(1), img.plane_height_for(1));
  img.planes[2] = pixel::Plane(img.plane_width_for(1), img.plane_height_for(1));
  for (std::size_t p = 0; p < 3; ++p) {
    auto& pl = img.planes[p];
    for (int y = 0; y < pl.height; ++y)
      for (int x = 0; x < pl.width; ++x) {
        const double v = 128 + 60 * std::sin(x * 0.05 * (p + 1) + seed) * std::cos(y * 0.045) +
                         ((x / 16 + y / 16) % 2 ? 25 : -25) * (p == 0);
        pl.at(x, y) = static_cast<std::int16_t>(std::clamp(static_cast<int>(std::lround(v)), 0, 255));
      }
  }
  return pixel::quantize_pixels(img, pixel::standard_quant_tables(90));
}

double psnr_of(const pixel::PixelImage& a, const pixel::PixelImage& b) {
  double se = 0;
  std::size_t n = 0;
  for (std::size_t p = 0; p < a.planes.size(); ++p)
    for (std::size_t i = 0; i < a.planes[p].samples.size(); ++i, ++n) {
      const double d = a.planes[p].samples[i] - b.planes[p].samples[i];
      se += d * d;
    }
  return se == 0 ? INFINITY : 10 * std::log10(255.0 * 255.0 * n / se);
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return Errc::Validation;
}

class PspTest : public ::testing::Test {
 protected:
  void SetUp() override { service_.start(); }
  void TearDown() override { service_.stop(); }

  httplib::Client http() { return httplib::Client("127.0.0.1", service_.port()); }

  Service service_;
  envelope::KeyMaterial key_ = envelope::KeyMaterial::generate();
};

}  // namespace

TEST(Pipeline, FitWithinKeepsAspect) {
  EXPECT_EQ(fit_within(1024, 768, 720, 720), std::make_pair(720, 540));
  EXPECT_EQ(fit_within(768, 1024, 720, 720), std::make_pair(540, 720));
  EXPECT_EQ(fit_within(100, 50, 720, 720), std::make_pair(100, 50));
  EXPECT_EQ(fit_within(1000, 1, 130, 130), std::make_pair(130, 1));
  ASSERT_NE(find_variant("big"), nullptr);
  EXPECT_EQ(find_variant("big")->max_w, 720);
  EXPECT_EQ(find_variant("small")->max_w, 130);
  EXPECT_EQ(find_variant("thumb")->max_w, 75);
  EXPECT_EQ(find_variant("huge"), nullptr);
}

TEST(Pipeline, DynamicTransformSnapsCropAndKeepsAspect) {
  DynamicRequest r;
  r.crop = pixel::Crop{3, 5, 100, 60};
  r.w = 50;
  const auto a = dynamic_transform(r, 640, 480);
  EXPECT_EQ(a.to_string(), "crop:0,8,104,56+resize:50x27:bilinear");
  EXPECT_EQ(a.output_size(640, 480), std::make_pair(50, 27));
  DynamicRequest only_h;
  only_h.h = 240;
  EXPECT_EQ(dynamic_transform(only_h, 640, 480).output_size(640, 480), std::make_pair(320, 240));
  EXPECT_TRUE(DynamicRequest{}.empty());
  EXPECT_EQ(r.query(), "w=50&crop=3,5,100,60");
}

TEST(Pipeline, RenderedVariantIsDecodable) {
  const auto img = synthetic_photo(300, 200);
  const auto bytes = render_variant(img, *find_variant("small"), {});
  const auto out = jpeg::decode_jpeg(bytes);
  EXPECT_EQ(out.width, 130);
  EXPECT_EQ(out.height, 87);
  EXPECT_EQ(out.quant_tables, pixel::standard_quant_tables(85));
  // Dynamic renditions keep the source tables.
  const auto dyn = jpeg::decode_jpeg(render_dynamic(img, pixel::TransformSpec::parse("crop:0,0,64,64")));
  EXPECT_EQ(dyn.quant_tables, img.quant_tables);
}

TEST(Store, InsertOnceAndShareBuffers) {
  Store s;
  PhotoRecord r{"a", std::make_shared<const Bytes>(Bytes{1, 2, 3}), {}};
  EXPECT_TRUE(s.put_photo(r));
  EXPECT_FALSE(s.put_photo(r));
  EXPECT_EQ(s.photo("a")->original_public, r.original_public);
  EXPECT_FALSE(s.photo("b"));
  s.put_secret("a", {9});
  s.put_secret("a", {8});
  EXPECT_EQ(*s.secret("a"), Bytes{8});
  EXPECT_EQ(s.secret_count(), 1u);
  EXPECT_EQ(sha256_hex(Bytes{}), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Service, ListenAddress) {
  EXPECT_EQ(parse_listen_address("0.0.0.0:8080"), std::make_pair(std::string("0.0.0.0"), 8080));
  EXPECT_EQ(code_of([] { parse_listen_address("localhost"); }), Errc::Validation);
  EXPECT_EQ(code_of([] { parse_listen_address("h:70000"); }), Errc::Validation);
}

TEST_F(PspTest, HttpStatusCodes) {
  auto c = http();
  const auto jpeg = jpeg::encode_jpeg(synthetic_photo(64, 48));
  const std::string body(jpeg.begin(), jpeg.end());

  auto put = c.Put("/photos", body, "image/jpeg");
  ASSERT_TRUE(put);
  EXPECT_EQ(put->status, 201);
  const auto id = sha256_hex(jpeg);
  EXPECT_NE(put->body.find(id), std::string::npos);

  EXPECT_EQ(c.Put("/photos", "not a jpeg", "image/jpeg")->status, 400);
  const auto sealed = envelope::seal(jpeg, key_, id, Threshold(5));
  EXPECT_EQ(c.Put("/photos", std::string(sealed.begin(), sealed.end()), "application/octet-stream")->status, 400);

  EXPECT_EQ(c.Get("/photos/" + id)->status, 200);
  EXPECT_EQ(c.Get("/photos/" + id)->body, body);
  EXPECT_EQ(c.Get("/photos/" + std::string(64, '0'))->status, 404);
  EXPECT_EQ(c.Get("/photos/" + id + "?variant=huge")->status, 400);
  EXPECT_EQ(c.Get("/photos/" + id + "?variant=big&w=10")->status, 400);
  EXPECT_EQ(c.Get("/photos/" + id + "?w=abc")->status, 400);
  EXPECT_EQ(c.Get("/photos/" + id + "?crop=1,2,3")->status, 400);
  EXPECT_EQ(c.Get("/photos/" + id + "?crop=0,0,999,8")->status, 400);

  EXPECT_EQ(c.Get("/secrets/" + id)->status, 404);
  EXPECT_EQ(c.Put("/secrets/" + id, "blob", "application/octet-stream")->status, 204);
  auto got = c.Get("/secrets/" + id);
  EXPECT_EQ(got->status, 200);
  EXPECT_EQ(got->body, "blob");
}

TEST(ServiceLimits, OversizedUploadIs413) {
  Service s(ServiceConfig{.max_upload = 1024, .pipeline = {}});
  s.start();
  httplib::Client c("127.0.0.1", s.port());
  auto r = c.Put("/photos", std::string(4096, 'x'), "image/jpeg");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 413);
  s.stop();
}

TEST_F(PspTest, VariantDimensions) {
  auto c = http();
  const auto jpeg = jpeg::encode_jpeg(synthetic_photo(1024, 768));
  ASSERT_EQ(c.Put("/photos", std::string(jpeg.begin(), jpeg.end()), "image/jpeg")->status, 201);
  const auto id = sha256_hex(jpeg);
  const std::pair<const char*, std::pair<int, int>> cases[] = {
      {"big", {720, 540}}, {"small", {130, 98}}, {"thumb", {75, 56}}};
  for (const auto& [name, dims] : cases) {
    auto r = c.Get("/photos/" + id + "?variant=" + name);
    ASSERT_EQ(r->status, 200) << name;
    const auto img = jpeg::decode_jpeg(std::span(reinterpret_cast<const std::uint8_t*>(r->body.data()), r->body.size()));
    EXPECT_EQ(std::make_pair(img.width, img.height), dims) << name;
  }
}

TEST_F(PspTest, CropQueryMatchesPixelCrop) {
  auto c = http();
  for (auto img : {synthetic_photo(200, 120), pixel::quantize_pixels(pixel::make_image(200, 120, 1, pixel::SampleMode::Conventional, 90), pixel::standard_quant_tables(80))}) {
    const auto jpeg = jpeg::encode_jpeg(img);
    c.Put("/photos", std::string(jpeg.begin(), jpeg.end()), "image/jpeg");
    auto r = c.Get("/photos/" + sha256_hex(jpeg) + "?crop=8,8,64,64");
    ASSERT_EQ(r->status, 200);
    const auto served = pixel::decode_to_pixels(
        jpeg::decode_jpeg(std::span(reinterpret_cast<const std::uint8_t*>(r->body.data()), r->body.size())),
        pixel::SampleMode::Conventional);
    EXPECT_EQ(served.width, 64);
    EXPECT_EQ(served.height, 64);
    const int grid = 8 * img.max_h_sampling();
    const auto ref = pixel::apply_transform(pixel::decode_to_pixels(img, pixel::SampleMode::Conventional),
                                            pixel::TransformSpec{{pixel::snap_crop({8, 8, 64, 64}, 200, 120, grid, grid)}});
    ASSERT_TRUE(served.same_geometry(ref));
    EXPECT_LE(test::max_abs_diff(served, ref), 1);
  }
}

TEST_F(PspTest, ShareAndViewOriginalIsExact) {
  Client client(service_.base_url(), key_);
  const auto img = synthetic_photo(320, 240);
  const auto shared = client.share(img, Threshold(10));
  EXPECT_EQ(shared.photo_id.size(), 64u);
  EXPECT_EQ(service_.store().photo_count(), 1u);
  EXPECT_EQ(service_.store().secret_count(), 1u);

  // Provider never sees the secret coefficients in the clear.
  const auto blob = service_.store().secret(shared.photo_id);
  ASSERT_TRUE(blob);
  EXPECT_TRUE(envelope::looks_like_container(*blob));
  EXPECT_EQ(blob->size(), shared.container_bytes);

  const auto v = client.view(shared.photo_id);
  ASSERT_TRUE(v.coefficients);
  EXPECT_EQ(*v.coefficients, img);
  EXPECT_FALSE(v.secret_from_cache);
  EXPECT_EQ(v.public_bytes, shared.public_bytes);
  EXPECT_EQ(v.container_bytes, shared.container_bytes);
}

TEST_F(PspTest, SecretIsCachedPerPhoto) {
  Client client(service_.base_url(), key_);
  const auto shared = client.share(synthetic_photo(256, 192), Threshold(10));
  client.view(shared.photo_id);
  const auto before = service_.secret_requests();
  for (int i = 0; i < 3; ++i) {
    DynamicRequest d;
    d.w = 100 + i;
    const auto v = client.view(shared.photo_id, {.variant = {}, .dynamic = d, .transform = {}});
    EXPECT_TRUE(v.secret_from_cache);
  }
  EXPECT_EQ(service_.secret_requests(), before);
  EXPECT_EQ(client.stats().secret_fetches, 1u);
  EXPECT_EQ(client.stats().cache_hits, 3u);
  client.clear_cache();
  client.view(shared.photo_id);
  EXPECT_EQ(client.stats().secret_fetches, 2u);
}

TEST_F(PspTest, CropViewsAlignWithOriginal) {
  Client client(service_.base_url(), key_);
  const auto img = synthetic_photo(512, 384);
  const auto shared = client.share(img, Threshold(10));
  const auto full = pixel::decode_to_pixels(img, pixel::SampleMode::Conventional);
  for (const auto& crop : {pixel::Crop{64, 32, 128, 96}, pixel::Crop{0, 0, 256, 256}, pixel::Crop{5, 3, 100, 77}}) {
    DynamicRequest d;
    d.crop = crop;
    const auto v = client.view(shared.photo_id, {.variant = {}, .dynamic = d, .transform = {}});
    // 4:2:0 source: block boundaries in every plane means a 16-pixel grid.
    const auto snapped = pixel::snap_crop(crop, 512, 384, 16, 16);
    EXPECT_EQ(v.transform.to_string(), pixel::TransformSpec{{snapped}}.to_string());
    const auto ref = pixel::apply_transform(full, pixel::TransformSpec{{snapped}});
    ASSERT_TRUE(v.image.same_geometry(ref));
    EXPECT_LE(test::max_abs_diff(v.image, ref), 1);
  }
}

TEST_F(PspTest, ResizedViewsTrackOriginal) {
  Client client(service_.base_url(), key_);
  const auto img = synthetic_photo(1024, 768);
  const auto shared = client.share(img, Threshold(10));
  const auto full = pixel::decode_to_pixels(img, pixel::SampleMode::Conventional);

  DynamicRequest d;
  d.w = 400;
  const auto dyn = client.view(shared.photo_id, {.variant = {}, .dynamic = d, .transform = {}});
  EXPECT_GE(psnr_of(dyn.image, pixel::apply_transform(full, dyn.transform)), 30.0);

  const auto big = client.view(shared.photo_id, {.variant = "big", .dynamic = {}, .transform = {}});
  EXPECT_EQ(big.image.width, 720);
  EXPECT_EQ(big.image.height, 540);
  ASSERT_TRUE(big.calibration_psnr);
  EXPECT_EQ(big.transform.to_string(), "resize:720x540:bilinear");
  EXPECT_GE(psnr_of(big.image, pixel::apply_transform(full, big.transform)), 30.0);

  // Calibration is cached per variant name.
  const auto bytes = client.stats().calibration_bytes;
  client.view(shared.photo_id, {.variant = "big", .dynamic = {}, .transform = {}});
  EXPECT_EQ(client.stats().calibration_bytes, bytes);
}

TEST_F(PspTest, ViewsAreDeterministic) {
  Client client(service_.base_url(), key_);
  const auto shared = client.share(synthetic_photo(400, 300), Threshold(15));
  DynamicRequest d;
  d.w = 123;
  d.crop = pixel::Crop{16, 16, 200, 160};
  const auto a = client.view(shared.photo_id, {.variant = {}, .dynamic = d, .transform = {}});
  const auto b = client.view(shared.photo_id, {.variant = {}, .dynamic = d, .transform = {}});
  EXPECT_EQ(a.image, b.image);
}

TEST_F(PspTest, ErrorsSurfaceAsTypedCodes) {
  Client client(service_.base_url(), key_);
  const auto shared = client.share(synthetic_photo(128, 96), Threshold(10));
  EXPECT_EQ(code_of([&] { client.view(std::string(64, 'a')); }), Errc::NotFound);

  Client stranger(service_.base_url(), envelope::KeyMaterial::generate());
  EXPECT_EQ(code_of([&] { stranger.view(shared.photo_id); }), Errc::AuthFailure);

  // Public part without a secret.
  auto c = http();
  const auto jpeg = jpeg::encode_jpeg(synthetic_photo(64, 64, 9));
  c.Put("/photos", std::string(jpeg.begin(), jpeg.end()), "image/jpeg");
  EXPECT_EQ(code_of([&] { client.view(sha256_hex(jpeg)); }), Errc::MissingSecret);

  // A secret filed under the wrong photo is rejected.
  const auto other = client.share(synthetic_photo(128, 96, 3), Threshold(10));
  const auto blob = service_.store().secret(other.photo_id);
  service_.store().put_secret(shared.photo_id, *blob);
  client.clear_cache();
  EXPECT_EQ(code_of([&] { client.view(shared.photo_id); }), Errc::AuthFailure);

  Client offline("http://127.0.0.1:1", key_);
  EXPECT_EQ(code_of([&] { offline.view(shared.photo_id); }), Errc::Transport);
}

TEST_F(PspTest, ConcurrentClients) {
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 6; ++i)
    threads.emplace_back([&, i] {
      Client client(service_.base_url(), key_);
      const auto img = synthetic_photo(160, 120, static_cast<unsigned>(i + 10));
      const auto shared = client.share(img, Threshold(8));
      if (*client.view(shared.photo_id).coefficients == img) ++ok;
    });
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 6);
  EXPECT_EQ(service_.store().photo_count(), 6u);
}

TEST(CalibrationProbe, DeterministicAndTextured) {
  const auto a = calibration_probe(96, 64);
  EXPECT_EQ(a, calibration_probe(96, 64));
  EXPECT_EQ(a.width, 96);
  std::size_t nonzero = 0;
  for (const auto& g : a.blocks)
    for (const auto& b : g.blocks)
      for (int i = 1; i < 64; ++i) nonzero += b[i] != 0;
  EXPECT_GT(nonzero, 500u);
}
