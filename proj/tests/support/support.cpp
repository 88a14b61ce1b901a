#include "support.hpp"

// clang-format off
#include <cstdio>
#include <jpeglib.h>
// clang-format on

#include <algorithm>
#include <csetjmp>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <random>
#include <stdexcept>

namespace p3::test {

Bytes read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& p, const Bytes& data) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::filesystem::path corpus_dir() {
  if (const char* env = std::getenv("P3_CORPUS_DIR"); env && *env) return env;
  return P3_TEST_CORPUS_DIR;
}

std::filesystem::path large_corpus_dir() { return corpus_dir() / "large"; }

std::vector<CorpusImage> load_corpus(const std::filesystem::path& dir) {
  std::vector<CorpusImage> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext != ".jpg" && ext != ".jpeg") continue;
    out.push_back({e.path().stem().string(), e.path(), read_file(e.path())});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

namespace {

struct ErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void on_error(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<ErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Warnings count as failures: conformance means a clean decode.
void on_message(j_common_ptr cinfo, int level) {
  if (level < 0) on_error(cinfo);
}

}  // namespace

pixel::PixelImage reference_decode(const Bytes& data) {
  jpeg_decompress_struct cinfo{};
  ErrorMgr err{};
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = on_error;
  err.pub.emit_message = on_message;
  std::vector<std::vector<JSAMPLE>> rows;  // declared before setjmp so longjmp leaves it valid
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw std::runtime_error(std::string("libjpeg: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, data.data(), static_cast<unsigned long>(data.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.raw_data_out = TRUE;
  cinfo.dct_method = JDCT_FLOAT;
  cinfo.out_color_space = cinfo.jpeg_color_space;
  jpeg_start_decompress(&cinfo);

  const int nc = cinfo.num_components;
  pixel::PixelImage img;
  img.width = static_cast<int>(cinfo.image_width);
  img.height = static_cast<int>(cinfo.image_height);
  img.max_h = cinfo.max_h_samp_factor;
  img.max_v = cinfo.max_v_samp_factor;
  for (int c = 0; c < nc; ++c) {
    const auto& comp = cinfo.comp_info[c];
    img.planes.emplace_back(img.plane_width_for(comp.h_samp_factor), img.plane_height_for(comp.v_samp_factor),
                            comp.h_samp_factor, comp.v_samp_factor);
  }

  // Raw output delivers one MCU row (max_v * DCTSIZE luma rows) per call.
  std::vector<std::vector<JSAMPROW>> ptrs(nc);
  std::vector<JSAMPARRAY> planes(nc);
  for (int c = 0; c < nc; ++c) {
    const auto& comp = cinfo.comp_info[c];
    const int rows_per = comp.v_samp_factor * DCTSIZE;
    const int width = static_cast<int>(comp.width_in_blocks + comp.h_samp_factor) * DCTSIZE;
    for (int r = 0; r < rows_per; ++r) rows.emplace_back(static_cast<std::size_t>(width));
    ptrs[c].resize(rows_per);
  }
  {
    std::size_t k = 0;
    for (int c = 0; c < nc; ++c)
      for (auto& p : ptrs[c]) p = rows[k++].data();
  }
  for (int c = 0; c < nc; ++c) planes[c] = ptrs[c].data();

  const int mcu_rows = cinfo.max_v_samp_factor * DCTSIZE;
  while (cinfo.output_scanline < cinfo.output_height) {
    const int luma_row0 = static_cast<int>(cinfo.output_scanline);
    jpeg_read_raw_data(&cinfo, planes.data(), static_cast<JDIMENSION>(mcu_rows));
    for (int c = 0; c < nc; ++c) {
      auto& plane = img.planes[c];
      const int row0 = luma_row0 / cinfo.max_v_samp_factor * cinfo.comp_info[c].v_samp_factor;
      for (int r = 0; r < static_cast<int>(ptrs[c].size()); ++r) {
        const int y = row0 + r;
        if (y >= plane.height) break;
        for (int x = 0; x < plane.width; ++x) plane.at(x, y) = ptrs[c][r][x];
      }
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return img;
}

Bytes reference_encode(const std::vector<std::uint8_t>& samples, int width, int height, int channels,
                       const RefEncodeOptions& o) {
  jpeg_compress_struct cinfo{};
  ErrorMgr err{};
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = on_error;
  unsigned char* buf = nullptr;
  unsigned long size = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buf);
    throw std::runtime_error(std::string("libjpeg: ") + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buf, &size);
  cinfo.image_width = static_cast<JDIMENSION>(width);
  cinfo.image_height = static_cast<JDIMENSION>(height);
  cinfo.input_components = channels;
  cinfo.in_color_space = channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, o.quality, TRUE);
  if (channels == 3) {
    cinfo.comp_info[0].h_samp_factor = o.h_sampling;
    cinfo.comp_info[0].v_samp_factor = o.v_sampling;
  }
  if (o.progressive) jpeg_simple_progression(&cinfo);
  if (o.arithmetic) cinfo.arith_code = TRUE;
  cinfo.restart_interval = static_cast<unsigned>(o.restart_interval);
  jpeg_start_compress(&cinfo, TRUE);
  for (const auto& [code, payload] : o.markers)
    jpeg_write_marker(&cinfo, code, reinterpret_cast<const JOCTET*>(payload.data()),
                      static_cast<unsigned>(payload.size()));
  const int stride = width * channels;
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPLE*>(samples.data() + static_cast<std::size_t>(cinfo.next_scanline) * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  Bytes out(buf, buf + size);
  std::free(buf);
  return out;
}

int max_abs_diff(const pixel::PixelImage& a, const pixel::PixelImage& b) {
  if (!a.same_geometry(b)) throw std::runtime_error("max_abs_diff: geometry differs");
  int m = 0;
  for (std::size_t p = 0; p < a.planes.size(); ++p)
    for (std::size_t i = 0; i < a.planes[p].samples.size(); ++i)
      m = std::max(m, std::abs(a.planes[p].samples[i] - b.planes[p].samples[i]));
  return m;
}

TempDir::TempDir() {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() / ("p3-test-" + std::to_string(rd()) + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace p3::test
