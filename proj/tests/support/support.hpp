#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "p3/pixel/pixel_image.hpp"

namespace p3::test {

using Bytes = std::vector<std::uint8_t>;

Bytes read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const Bytes& data);

struct CorpusImage {
  std::string name;
  std::filesystem::path path;
  Bytes bytes;
};

/// JPEGs directly inside the corpus directory (not sub-directories), by name.
std::vector<CorpusImage> load_corpus(const std::filesystem::path& dir);
std::filesystem::path corpus_dir();
std::filesystem::path large_corpus_dir();

/// Decodes with libjpeg into raw component planes (no colour conversion, no
/// upsampling) using its floating-point IDCT. Throws std::runtime_error on
/// any libjpeg error or warning.
pixel::PixelImage reference_decode(const Bytes& jpeg);

struct RefEncodeOptions {
  int quality = 90;
  int h_sampling = 2;  // luma factors; chroma is 1x1
  int v_sampling = 2;
  bool progressive = false;
  bool arithmetic = false;
  int restart_interval = 0;  // in MCUs
  std::vector<std::pair<int, std::string>> markers;  // (APPn/COM code, payload)
};

/// Encodes interleaved 8-bit samples (gray or RGB) with libjpeg.
Bytes reference_encode(const std::vector<std::uint8_t>& samples, int width, int height, int channels,
                       const RefEncodeOptions& options = {});

/// Maximum per-sample absolute difference; images must share geometry.
int max_abs_diff(const pixel::PixelImage& a, const pixel::PixelImage& b);

/// Temporary directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace p3::test
