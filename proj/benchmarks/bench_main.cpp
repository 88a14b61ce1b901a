#include <benchmark/benchmark.h>

#include <fstream>
#include <iterator>
#include <string>

#include "p3/envelope/envelope.hpp"
#include "p3/jpeg/codec.hpp"
#include "p3/pixel/codec.hpp"
#include "p3/pixel/transform.hpp"
#include "p3/split/split.hpp"

using namespace p3;

namespace {

const std::vector<std::uint8_t>& lenna_bytes() {
  static const auto bytes = [] {
    std::ifstream in(std::string(P3_BENCH_CORPUS_DIR) + "/lenna.jpg", std::ios::binary);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
  }();
  return bytes;
}

const jpeg::QuantizedImage& lenna() {
  static const auto img = jpeg::decode_jpeg(lenna_bytes());
  return img;
}

void BM_Decode(benchmark::State& state) {
  const auto& bytes = lenna_bytes();
  for (auto _ : state) benchmark::DoNotOptimize(jpeg::decode_jpeg(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_Decode);

void BM_Encode(benchmark::State& state) {
  const auto& img = lenna();
  for (auto _ : state) benchmark::DoNotOptimize(jpeg::encode_jpeg(img));
}
BENCHMARK(BM_Encode);

void BM_DecodePixels(benchmark::State& state) {
  const auto& img = lenna();
  for (auto _ : state) benchmark::DoNotOptimize(pixel::decode_to_pixels(img, pixel::SampleMode::Conventional));
}
BENCHMARK(BM_DecodePixels);

void BM_Split(benchmark::State& state) {
  const auto& img = lenna();
  const Threshold t(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(split_image(img, t));
}
BENCHMARK(BM_Split)->Arg(1)->Arg(20)->Arg(100);

void BM_Merge(benchmark::State& state) {
  const Threshold t(20);
  const auto pair = split_image(lenna(), t);
  for (auto _ : state) benchmark::DoNotOptimize(merge_image(pair));
}
BENCHMARK(BM_Merge);

void BM_ReconstructResized(benchmark::State& state) {
  const Threshold t(20);
  const auto pair = split_image(lenna(), t);
  const auto a = pixel::TransformSpec::parse("resize:130x130:bilinear");
  const auto pub = pixel::apply_transform(pixel::decode_to_pixels(pair.public_part, pixel::SampleMode::Conventional), a);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_transformed(pub, pair.secret_part, t, a));
}
BENCHMARK(BM_ReconstructResized);

void BM_SealOpen(benchmark::State& state) {
  const Threshold t(20);
  const auto secret = jpeg::encode_jpeg(split_image(lenna(), t).secret_part);
  const auto key = envelope::KeyMaterial::generate();
  for (auto _ : state) {
    const auto sealed = envelope::seal(secret, key, "bench", t);
    benchmark::DoNotOptimize(envelope::open(sealed, key));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(secret.size()));
}
BENCHMARK(BM_SealOpen);

}  // namespace

BENCHMARK_MAIN();
