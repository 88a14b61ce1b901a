#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"
#include "p3/pixel/codec.hpp"
#include "support.hpp"

using namespace p3;
using p3::test::Bytes;

namespace {

std::vector<std::uint8_t> noise_samples(int w, int h, int channels, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<std::uint8_t> s(static_cast<std::size_t>(w) * h * channels);
  // Smooth field plus noise so every coefficient band is exercised.
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c) {
        const int base = (x * 255 / std::max(1, w - 1) + y * 97 / std::max(1, h - 1) + c * 60) % 256;
        s[(static_cast<std::size_t>(y) * w + x) * channels + c] =
            static_cast<std::uint8_t>(std::clamp(base + static_cast<int>(rng() % 61) - 30, 0, 255));
      }
  return s;
}

jpeg::QuantizedImage random_image(int w, int h, const std::vector<std::pair<int, int>>& sampling, unsigned seed,
                                  int ac_range, std::optional<std::uint16_t> restart = std::nullopt) {
  std::mt19937 rng(seed);
  jpeg::QuantizedImage img;
  img.width = w;
  img.height = h;
  img.restart_interval = restart;
  for (std::uint8_t t = 0; t < (sampling.size() > 1 ? 2 : 1); ++t) {
    jpeg::QuantTable q;
    q.id = t;
    for (auto& v : q.values) v = static_cast<std::uint16_t>(1 + rng() % 60);
    img.quant_tables.push_back(q);
  }
  for (std::size_t c = 0; c < sampling.size(); ++c)
    img.components.push_back({static_cast<std::uint8_t>(c + 1), static_cast<std::uint8_t>(sampling[c].first),
                              static_cast<std::uint8_t>(sampling[c].second), static_cast<std::uint8_t>(c ? 1 : 0)});
  std::uniform_int_distribution<int> ac(-ac_range, ac_range);
  std::uniform_int_distribution<int> dc(-1023, 1023);
  std::bernoulli_distribution sparse(0.6);
  for (std::size_t c = 0; c < sampling.size(); ++c) {
    jpeg::BlockGrid g(img.component_blocks_wide(c), img.component_blocks_high(c));
    for (auto& b : g.blocks) {
      b[0] = static_cast<std::int16_t>(dc(rng));
      for (int i = 1; i < 64; ++i) b[i] = sparse(rng) ? 0 : static_cast<std::int16_t>(ac(rng));
    }
    img.blocks.push_back(std::move(g));
  }
  img.validate();
  return img;
}

template <typename F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected p3::Error";
  return Errc::Io;
}

}  // namespace

TEST(JpegDecode, FlatGrayBlockHasNoEnergy) {
  const std::vector<std::uint8_t> gray(64, 128);
  const auto bytes = test::reference_encode(gray, 8, 8, 1, {.quality = 90});
  const auto img = jpeg::decode_jpeg(bytes);
  ASSERT_EQ(img.blocks.size(), 1u);
  ASSERT_EQ(img.blocks[0].blocks.size(), 1u);
  for (auto v : img.blocks[0].blocks[0]) EXPECT_EQ(v, 0);
}

TEST(JpegDecode, CorpusRoundTripIsExact) {
  const auto corpus = test::load_corpus(test::corpus_dir());
  ASSERT_GE(corpus.size(), 10u);
  for (const auto& f : corpus) {
    SCOPED_TRACE(f.name);
    const auto img = jpeg::decode_jpeg(f.bytes);
    EXPECT_EQ(jpeg::decode_jpeg(jpeg::encode_jpeg(img)), img);
    EXPECT_EQ(jpeg::decode_jpeg(jpeg::encode_jpeg(img, {.huffman = jpeg::HuffmanMode::Standard})), img);
  }
}

TEST(JpegDecode, CorpusPixelsMatchReferenceDecoder) {
  for (const auto& f : test::load_corpus(test::corpus_dir())) {
    SCOPED_TRACE(f.name);
    const auto ours = pixel::decode_to_pixels(jpeg::decode_jpeg(f.bytes), pixel::SampleMode::Conventional);
    EXPECT_LE(test::max_abs_diff(ours, test::reference_decode(f.bytes)), 1);
  }
}

struct Layout {
  int w, h;
  std::vector<std::pair<int, int>> sampling;
  std::optional<std::uint16_t> restart;
};

class RandomRoundTrip : public ::testing::TestWithParam<Layout> {};

TEST_P(RandomRoundTrip, CoefficientExactAndReferenceDecodable) {
  const auto& l = GetParam();
  for (unsigned seed = 1; seed <= 4; ++seed) {
    const auto img = random_image(l.w, l.h, l.sampling, seed, 1023, l.restart);
    for (auto mode : {jpeg::HuffmanMode::Optimized, jpeg::HuffmanMode::Standard}) {
      const auto bytes = jpeg::encode_jpeg(img, {.huffman = mode});
      ASSERT_EQ(jpeg::decode_jpeg(bytes), img);
      // Random coefficients overshoot [0,255] a lot; compare only where the
      // reference output is not clamped.
      const auto ref = test::reference_decode(bytes);
      const auto ours = pixel::decode_to_pixels(img, pixel::SampleMode::Conventional);
      ASSERT_TRUE(ours.same_geometry(ref));
      for (std::size_t p = 0; p < ours.planes.size(); ++p)
        for (std::size_t i = 0; i < ours.planes[p].samples.size(); ++i) {
          const int r = ref.planes[p].samples[i];
          if (r == 0 || r == 255) continue;
          ASSERT_LE(std::abs(r - ours.planes[p].samples[i]), 1);
        }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Layouts, RandomRoundTrip,
    ::testing::Values(Layout{8, 8, {{1, 1}}, std::nullopt}, Layout{13, 9, {{1, 1}}, std::nullopt},
                      Layout{33, 17, {{2, 2}, {1, 1}, {1, 1}}, std::nullopt},
                      Layout{40, 23, {{2, 1}, {1, 1}, {1, 1}}, std::uint16_t{3}},
                      Layout{31, 31, {{1, 1}, {1, 1}, {1, 1}}, std::uint16_t{1}},
                      Layout{70, 45, {{1, 2}, {1, 1}, {1, 1}}, std::uint16_t{7}}));

TEST(JpegEncode, ZeroImageDecodesToMidGray) {
  auto img = random_image(24, 16, {{2, 2}, {1, 1}, {1, 1}}, 9, 0);
  img = jpeg::zeros_like(img);
  const auto ref = test::reference_decode(jpeg::encode_jpeg(img));
  for (const auto& p : ref.planes)
    for (auto v : p.samples) ASSERT_EQ(v, 128);
}

TEST(JpegEncode, MarkerOrderIsBaselineGrammar) {
  const auto img = random_image(16, 16, {{2, 2}, {1, 1}, {1, 1}}, 3, 50);
  const auto info = jpeg::inspect(jpeg::encode_jpeg(img));
  std::vector<std::string> names;
  for (const auto& m : info.markers) names.push_back(m.name);
  const std::vector<std::string> expected{"SOI", "APP0", "DQT", "DQT", "SOF0", "DHT", "DHT", "DHT", "DHT", "SOS", "EOI"};
  EXPECT_EQ(names, expected);
  EXPECT_EQ(info.kind, "baseline");
}

TEST(JpegEncode, WideQuantTablesUseExtendedFrame) {
  auto img = random_image(16, 16, {{1, 1}}, 5, 20);
  img.quant_tables[0].values[3] = 1000;
  const auto bytes = jpeg::encode_jpeg(img);
  EXPECT_EQ(jpeg::inspect(bytes).kind, "extended");
  EXPECT_EQ(jpeg::decode_jpeg(bytes), img);
}

TEST(JpegEncode, RejectsInvalidImages) {
  auto img = random_image(16, 16, {{1, 1}}, 5, 20);
  auto bad = img;
  bad.blocks[0].blocks[0][5] = 1024;
  EXPECT_EQ(error_code([&] { jpeg::encode_jpeg(bad); }), Errc::InvalidImage);
  bad = img;
  bad.blocks[0] = jpeg::BlockGrid(1, 1);
  EXPECT_EQ(error_code([&] { jpeg::encode_jpeg(bad); }), Errc::InvalidImage);
  bad = img;
  bad.quant_tables[0].values[0] = 0;
  EXPECT_EQ(error_code([&] { jpeg::encode_jpeg(bad); }), Errc::InvalidImage);
  bad = img;
  bad.components[0].quant_table_id = 3;
  EXPECT_EQ(error_code([&] { jpeg::encode_jpeg(bad); }), Errc::InvalidImage);
}

TEST(JpegDecode, ReferenceEncodedLayouts) {
  struct Case {
    int w, h, channels, hs, vs, restart;
  };
  for (const auto& c : {Case{57, 41, 3, 2, 2, 0}, Case{57, 41, 3, 2, 1, 2}, Case{64, 48, 3, 1, 1, 5},
                        Case{23, 77, 1, 1, 1, 3}, Case{100, 9, 3, 1, 2, 0}}) {
    SCOPED_TRACE(std::to_string(c.w) + "x" + std::to_string(c.h));
    const auto bytes = test::reference_encode(noise_samples(c.w, c.h, c.channels, 7), c.w, c.h, c.channels,
                                              {.quality = 80, .h_sampling = c.hs, .v_sampling = c.vs,
                                               .restart_interval = c.restart});
    const auto img = jpeg::decode_jpeg(bytes);
    EXPECT_EQ(img.restart_interval.has_value(), c.restart > 0);
    EXPECT_EQ(jpeg::decode_jpeg(jpeg::encode_jpeg(img)), img);
    const auto ours = pixel::decode_to_pixels(img, pixel::SampleMode::Conventional);
    EXPECT_LE(test::max_abs_diff(ours, test::reference_decode(bytes)), 1);
  }
}

TEST(JpegDecode, RejectsProgressiveArithmeticAndHighPrecision) {
  const auto samples = noise_samples(32, 32, 3, 1);
  const auto progressive = test::reference_encode(samples, 32, 32, 3, {.progressive = true});
  EXPECT_EQ(error_code([&] { jpeg::decode_jpeg(progressive); }), Errc::UnsupportedFormat);
  const auto info = jpeg::inspect(progressive);
  EXPECT_EQ(info.kind, "progressive");
  EXPECT_FALSE(info.decodable);

  const auto arithmetic = test::reference_encode(samples, 32, 32, 3, {.arithmetic = true});
  EXPECT_EQ(error_code([&] { jpeg::decode_jpeg(arithmetic); }), Errc::UnsupportedFormat);
  EXPECT_FALSE(jpeg::inspect(arithmetic).decodable);

  // Patch the frame header's precision byte to 12.
  auto twelve = test::reference_encode(samples, 32, 32, 3);
  for (std::size_t i = 0; i + 4 < twelve.size(); ++i)
    if (twelve[i] == 0xFF && twelve[i + 1] == 0xC0) {
      twelve[i + 4] = 12;
      break;
    }
  EXPECT_EQ(error_code([&] { jpeg::decode_jpeg(twelve); }), Errc::UnsupportedFormat);
}

TEST(JpegDecode, TruncationIsCorruptStream) {
  const auto bytes = test::reference_encode(noise_samples(48, 40, 3, 2), 48, 40, 3);
  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{20}, bytes.size() / 3, bytes.size() / 2,
                          bytes.size() - 40, bytes.size() - 2}) {
    SCOPED_TRACE(cut);
    const Bytes part(bytes.begin(), bytes.begin() + static_cast<long>(cut));
    EXPECT_EQ(error_code([&] { jpeg::decode_jpeg(part); }), Errc::CorruptStream);
  }
}

TEST(JpegDecode, MutatedStreamsFailWithTypedErrors) {
  const auto bytes = test::reference_encode(noise_samples(40, 32, 3, 3), 40, 32, 3, {.restart_interval = 2});
  std::mt19937 rng(42);
  int decoded = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    Bytes m = bytes;
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) m[rng() % m.size()] = static_cast<std::uint8_t>(rng());
    try {
      const auto img = jpeg::decode_jpeg(m);
      img.validate();
      ++decoded;
    } catch (const Error&) {
      // typed failure is the contract
    }
  }
  // Most single-byte edits in entropy data still decode to something.
  EXPECT_GT(decoded, 0);
}

TEST(JpegDecode, MetadataIsDroppedUnlessRequested) {
  const auto samples = noise_samples(16, 16, 3, 4);
  const auto bytes = test::reference_encode(
      samples, 16, 16, 3, {.markers = {{0xE1, "Exif\0\0fake"}, {0xFE, "a comment"}, {0xE2, "ICC_PROFILE"}}});

  const auto info = jpeg::inspect(bytes);
  std::vector<std::string> names;
  for (const auto& m : info.markers) names.push_back(m.name);
  const auto app1 = std::find(names.begin(), names.end(), "APP1");
  ASSERT_NE(app1, names.end());
  EXPECT_EQ(*(app1 + 1), "COM");
  EXPECT_EQ(*(app1 + 2), "APP2");

  EXPECT_TRUE(jpeg::decode_jpeg(bytes).metadata.empty());
  const auto kept = jpeg::decode_jpeg(bytes, {.keep_metadata = true});
  ASSERT_EQ(kept.metadata.size(), 3u);
  EXPECT_EQ(kept.metadata[0].marker, 0xE1);
  EXPECT_EQ(kept.metadata[1].marker, 0xFE);
  EXPECT_EQ(jpeg::decode_jpeg(jpeg::encode_jpeg(kept), {.keep_metadata = true}), kept);
}

TEST(JpegInspect, ReportsSamplingAndTables) {
  const auto bytes = test::reference_encode(noise_samples(32, 32, 3, 5), 32, 32, 3, {.quality = 75});
  const auto info = jpeg::inspect(bytes);
  ASSERT_EQ(info.components.size(), 3u);
  EXPECT_EQ(info.components[0].h_sampling, 2);
  EXPECT_EQ(info.components[0].v_sampling, 2);
  EXPECT_EQ(info.components[1].h_sampling, 1);
  EXPECT_EQ(info.components[2].v_sampling, 1);
  EXPECT_EQ(info.width, 32);
  EXPECT_EQ(info.precision, 8);
  EXPECT_TRUE(info.decodable);
  EXPECT_EQ(info.quant_tables.size(), 2u);
  EXPECT_EQ(info.scans, 1);
  EXPECT_EQ(error_code([&] { jpeg::inspect(Bytes{0xFF, 0xD8, 0x00, 0x01}); }), Errc::CorruptStream);
}
