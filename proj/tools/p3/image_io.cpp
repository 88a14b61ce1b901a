#include "image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>

#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"
#include "p3/pixel/codec.hpp"
#include "p3/pixel/color.hpp"

namespace p3::tool {

namespace {

std::string extension(const std::filesystem::path& p) {
  auto e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e;
}

pixel::PixelImage from_interleaved(const std::vector<std::uint8_t>& data, int w, int h, int channels) {
  auto img = pixel::make_image(w, h, channels == 1 ? 1 : 3);
  img.colorspace = channels == 1 ? pixel::ColorSpace::YCbCr : pixel::ColorSpace::RGB;
  for (int c = 0; c < static_cast<int>(img.planes.size()); ++c)
    for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i)
      img.planes[c].samples[i] = data[i * channels + c];
  return channels == 1 ? img : pixel::rgb_to_ycbcr(img);
}

std::vector<std::uint8_t> to_interleaved(const pixel::PixelImage& img, int& channels) {
  const auto rgb = pixel::ycbcr_to_rgb(img);
  channels = static_cast<int>(rgb.planes.size());
  std::vector<std::uint8_t> out(static_cast<std::size_t>(img.width) * img.height * channels);
  for (int c = 0; c < channels; ++c)
    for (std::size_t i = 0; i < static_cast<std::size_t>(img.width) * img.height; ++i)
      out[i * channels + c] = static_cast<std::uint8_t>(std::clamp<int>(rgb.planes[c].samples[i], 0, 255));
  return out;
}

pixel::PixelImage load_png(const std::filesystem::path& p) {
  png_image im{};
  im.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&im, p.c_str())) fail(Errc::Io, "cannot read PNG " + p.string() + ": " + im.message);
  const bool gray = (im.format & PNG_FORMAT_FLAG_COLOR) == 0;
  im.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(im));
  if (!png_image_finish_read(&im, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&im);
    fail(Errc::Io, "cannot decode PNG " + p.string() + ": " + im.message);
  }
  return from_interleaved(buf, static_cast<int>(im.width), static_cast<int>(im.height), gray ? 1 : 3);
}

void save_png(const std::filesystem::path& p, const pixel::PixelImage& img) {
  int channels = 0;
  const auto data = to_interleaved(img, channels);
  png_image im{};
  im.version = PNG_IMAGE_VERSION;
  im.width = static_cast<png_uint_32>(img.width);
  im.height = static_cast<png_uint_32>(img.height);
  im.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&im, p.c_str(), 0, data.data(), 0, nullptr))
    fail(Errc::Io, "cannot write PNG " + p.string() + ": " + im.message);
}

pixel::PixelImage load_pnm(const std::filesystem::path& p) {
  const auto bytes = read_bytes(p);
  std::size_t pos = 0;
  auto token = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#')
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      else if (std::isspace(bytes[pos]))
        ++pos;
      else
        break;
    }
    std::string t;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) t += static_cast<char>(bytes[pos++]);
    return t;
  };
  const auto magic = token();
  if (magic != "P5" && magic != "P6") fail(Errc::Validation, p.string() + ": only binary PGM/PPM is supported");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(token());
    h = std::stoi(token());
    maxval = std::stoi(token());
  } catch (const std::exception&) {
    fail(Errc::Validation, p.string() + ": malformed PNM header");
  }
  if (maxval != 255 || w < 1 || h < 1) fail(Errc::Validation, p.string() + ": need 8-bit samples");
  ++pos;
  const int channels = magic == "P5" ? 1 : 3;
  const std::size_t need = static_cast<std::size_t>(w) * h * channels;
  if (bytes.size() < pos + need) fail(Errc::Validation, p.string() + ": truncated PNM");
  return from_interleaved({bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.begin() + static_cast<std::ptrdiff_t>(pos + need)}, w, h,
                          channels);
}

void save_pnm(const std::filesystem::path& p, const pixel::PixelImage& img) {
  int channels = 0;
  const auto data = to_interleaved(img, channels);
  std::ostringstream head;
  head << (channels == 1 ? "P5" : "P6") << "\n" << img.width << " " << img.height << "\n255\n";
  const auto h = head.str();
  Bytes out(h.begin(), h.end());
  out.insert(out.end(), data.begin(), data.end());
  write_bytes(p, out);
}

}  // namespace

Bytes read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(Errc::Io, "cannot open " + p.string());
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_bytes(const std::filesystem::path& p, const Bytes& data) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) fail(Errc::Io, "cannot write " + p.string());
}

pixel::PixelImage load_image(const std::filesystem::path& p) {
  const auto ext = extension(p);
  if (ext == ".png") return load_png(p);
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return load_pnm(p);
  return pixel::decode_to_pixels(jpeg::decode_jpeg(read_bytes(p)), pixel::SampleMode::Conventional);
}

void save_image(const std::filesystem::path& p, const pixel::PixelImage& img) {
  const auto ext = extension(p);
  if (ext == ".png") return save_png(p, img);
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return save_pnm(p, img);
  if (ext == ".jpg" || ext == ".jpeg") {
    auto ycc = img.colorspace == pixel::ColorSpace::RGB ? pixel::rgb_to_ycbcr(img) : img;
    return write_bytes(p, jpeg::encode_jpeg(pixel::quantize_pixels(ycc, pixel::standard_quant_tables(95))));
  }
  fail(Errc::Validation, "unknown output format " + p.string() + " (use .png, .ppm, .pgm or .jpg)");
}

void save_coefficients(const std::filesystem::path& p, const jpeg::QuantizedImage& img) {
  const auto ext = extension(p);
  if (ext == ".jpg" || ext == ".jpeg") return write_bytes(p, jpeg::encode_jpeg(img));
  save_image(p, pixel::decode_to_pixels(img, pixel::SampleMode::Conventional));
}

}  // namespace p3::tool
