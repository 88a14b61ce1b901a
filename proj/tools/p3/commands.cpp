#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <csignal>
#include <pthread.h>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "fixture.hpp"
#include "image_io.hpp"
#include "p3/envelope/envelope.hpp"
#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"
#include "p3/metrics/metrics.hpp"
#include "p3/pixel/calibrate.hpp"
#include "p3/pixel/codec.hpp"
#include "p3/pixel/color.hpp"
#include "p3/psp/client.hpp"
#include "p3/psp/service.hpp"
#include "p3/split/split.hpp"

namespace fs = std::filesystem;

namespace p3::tool {

namespace {

std::optional<fs::path> key_path(const std::optional<std::string>& k) {
  if (k) return fs::path(*k);
  return std::nullopt;
}

std::string service_url(const std::optional<std::string>& url) {
  if (url) return *url;
  if (const char* env = std::getenv(kUrlEnv); env && *env) return env;
  return kDefaultUrl;
}

std::string fraction(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(4);
  s << v;
  return s.str();
}

std::string db(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

pixel::Crop parse_crop_arg(const std::string& s) {
  pixel::Crop c;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%d,%d,%d,%d%c", &c.x, &c.y, &c.w, &c.h, &extra) != 4)
    fail(Errc::Validation, "crop must be x,y,w,h");
  return c;
}

// Both inputs at full resolution so images with different chroma layouts
// (e.g. a JPEG and a PNG export) compare sample by sample.
std::pair<pixel::PixelImage, pixel::PixelImage> comparable(const std::string& a, const std::string& b) {
  auto x = pixel::upsample_chroma(load_image(a));
  auto y = pixel::upsample_chroma(load_image(b));
  if (x.planes.size() != y.planes.size()) {
    // gray vs colour: compare luma only
    x.planes.resize(1);
    y.planes.resize(1);
  }
  return {std::move(x), std::move(y)};
}

}  // namespace

int run_split(const SplitArgs& a) {
  const Threshold t(a.threshold);
  const auto original = read_bytes(a.input);
  const auto img = jpeg::decode_jpeg(original, {.keep_metadata = true});
  const auto pair = split_image(img, t, {.public_metadata = a.public_metadata});
  const auto pub = jpeg::encode_jpeg(pair.public_part);
  const auto sec = jpeg::encode_jpeg(pair.secret_part);

  const fs::path dir(a.out_dir);
  write_bytes(dir / "public.jpg", pub);
  std::size_t secret_size = sec.size();
  if (a.no_encrypt) {
    write_bytes(dir / "secret.jpg", sec);
  } else {
    const auto key = envelope::load_key(key_path(a.key));
    const auto sealed = envelope::seal(sec, key, psp::sha256_hex(pub), t);
    secret_size = sealed.size();
    write_bytes(dir / "secret.p3s", sealed);
  }
  const double n = static_cast<double>(original.size());
  std::cout << "T=" << t.value() << " original=" << original.size() << " public=" << pub.size()
            << " secret=" << secret_size << "\n"
            << "size_public=" << fraction(pub.size() / n) << " size_secret=" << fraction(secret_size / n)
            << " size_total=" << fraction((pub.size() + secret_size) / n) << "\n";
  return 0;
}

int run_merge(const MergeArgs& a) {
  const auto pub_bytes = read_bytes(a.public_path);
  const auto sec_bytes = read_bytes(a.secret_path);
  jpeg::QuantizedImage secret;
  std::optional<Threshold> t;
  std::optional<std::string> photo_id;
  if (envelope::looks_like_container(sec_bytes)) {
    const auto opened = envelope::open(sec_bytes, envelope::load_key(key_path(a.key)));
    secret = jpeg::decode_jpeg(opened.secret_jpeg, {.keep_metadata = true});
    t = opened.threshold;
    photo_id = opened.photo_id;
    if (a.threshold && *a.threshold != t->value())
      fail(Errc::Validation, "-t " + std::to_string(*a.threshold) + " contradicts the container (T=" +
                                 std::to_string(t->value()) + ")");
  } else {
    if (!a.threshold) fail(Errc::Validation, "an unencrypted secret part needs -t");
    t = Threshold(*a.threshold);
    secret = jpeg::decode_jpeg(sec_bytes, {.keep_metadata = true});
  }
  const auto pub = jpeg::decode_jpeg(pub_bytes);

  if (!a.transform && !a.calibrate) {
    if (!pub.same_geometry(secret))
      fail(Errc::DimensionMismatch, "public part was transformed (" + std::to_string(pub.width) + "x" +
                                        std::to_string(pub.height) + "); pass --transform or --calibrate");
    if (photo_id && *photo_id != psp::sha256_hex(pub_bytes))
      std::cerr << "note: public bytes differ from the ones the secret was sealed for\n";
    save_coefficients(a.output, merge_image(pub, secret, *t));
    std::cout << "merged " << pub.width << "x" << pub.height << " coefficient-exact -> " << a.output << "\n";
    return 0;
  }

  const auto pub_pixels = pixel::decode_to_pixels(pub, pixel::SampleMode::Conventional);
  pixel::TransformSpec spec;
  if (a.transform) {
    spec = pixel::TransformSpec::parse(*a.transform);
  } else {
    const auto ref = pixel::decode_to_pixels(jpeg::decode_jpeg(read_bytes(*a.calibrate)), pixel::SampleMode::Conventional);
    pixel::Calibration cal;
    try {
      cal = pixel::calibrate_transform(ref, pub_pixels,
                                       pixel::candidate_grid(ref.width, ref.height, pub.width, pub.height));
    } catch (const Error& e) {
      fail(Errc::CalibrationFailed, e.what());
    }
    spec = cal.best;
    std::cout << "calibrated transform " << spec.to_string() << " (fit " << db(cal.psnr) << " dB)\n";
  }
  pixel::PixelImage out;
  try {
    out = reconstruct_transformed(pub_pixels, secret, *t, spec);
  } catch (const Error& e) {
    if (e.code() == Errc::DimensionMismatch) fail(Errc::CalibrationFailed, e.what());
    throw;
  }
  save_image(a.output, out);
  std::cout << "reconstructed " << out.width << "x" << out.height << " via " << spec.to_string() << " -> "
            << a.output << "\n";
  return 0;
}

int run_serve(const ServeArgs& a) {
  const auto [host, port] = psp::parse_listen_address(a.listen);
  psp::ServiceConfig cfg;
  cfg.max_upload = a.max_upload;
  if (a.quality < 1 || a.quality > 100) fail(Errc::Validation, "quality must be 1..100");
  cfg.pipeline.quality = a.quality;
  cfg.pipeline.filter = pixel::parse_filter(a.filter);
  cfg.pipeline.sharpen = a.sharpen;

  // Block the termination signals before any thread starts so only sigwait
  // below sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  psp::Service service(cfg);
  const int bound = service.start(host, port);
  std::cout << "listening on " << host << ":" << bound << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  service.stop();
  std::cout << "stopped (photos=" << service.store().photo_count() << " secrets=" << service.store().secret_count()
            << ")" << std::endl;
  return 0;
}

int run_share(const ShareArgs& a) {
  const Threshold t(a.threshold);
  psp::Client client(service_url(a.url), envelope::load_key(key_path(a.key)));
  const auto bytes = read_bytes(a.input);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = client.share(bytes, t);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::cout << r.photo_id << "\n";
  std::cerr << "public_bytes=" << r.public_bytes << " container_bytes=" << r.container_bytes
            << " original_bytes=" << bytes.size() << " elapsed_ms=" << db(ms) << "\n";
  return 0;
}

int run_view(const ViewArgs& a) {
  psp::Client client(service_url(a.url), envelope::load_key(key_path(a.key)));
  psp::ViewRequest req;
  req.variant = a.variant;
  req.dynamic.w = a.w;
  req.dynamic.h = a.h;
  if (a.crop) req.dynamic.crop = parse_crop_arg(*a.crop);
  if (a.transform) req.transform = pixel::TransformSpec::parse(*a.transform);
  if (req.variant && !req.dynamic.empty()) fail(Errc::Validation, "--variant cannot be combined with --width/--height/--crop");

  const auto t0 = std::chrono::steady_clock::now();
  const auto v = client.view(a.photo_id, req);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (a.output) {
    if (v.coefficients)
      save_coefficients(*a.output, *v.coefficients);
    else
      save_image(*a.output, v.image);
  }
  const auto s = client.stats();
  nlohmann::json j{{"photo_id", a.photo_id},
                   {"width", v.image.width},
                   {"height", v.image.height},
                   {"exact", v.coefficients.has_value()},
                   {"transform", v.transform.to_string()},
                   {"public_bytes", v.public_bytes},
                   {"container_bytes", v.container_bytes},
                   {"total_bytes", v.public_bytes + v.container_bytes},
                   {"secret_from_cache", v.secret_from_cache},
                   {"calibration_bytes", s.calibration_bytes},
                   {"elapsed_ms", std::round(ms * 100) / 100}};
  if (v.calibration_psnr) j["calibration_psnr"] = std::isinf(*v.calibration_psnr) ? -1.0 : *v.calibration_psnr;
  std::cout << j.dump() << "\n";
  return 0;
}

int run_sweep(const SweepArgs& a) {
  std::vector<metrics::NamedImage> images;
  if (!fs::is_directory(a.corpus)) fail(Errc::Validation, a.corpus + " is not a directory");
  for (const auto& e : fs::directory_iterator(a.corpus)) {
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (e.is_regular_file() && (ext == ".jpg" || ext == ".jpeg"))
      images.push_back({e.path().stem().string(), read_bytes(e.path())});
  }
  if (images.empty()) fail(Errc::Validation, "no JPEG files in " + a.corpus);
  std::sort(images.begin(), images.end(), [](const auto& x, const auto& y) { return x.name < y.name; });

  const auto report =
      metrics::storage_sweep(images, a.thresholds, {.quality_metrics = !a.no_quality, .threads = a.threads});
  if (a.report) {
    std::ofstream out(*a.report);
    if (!out) fail(Errc::Io, "cannot write " + *a.report);
    metrics::write_csv(report, out);
  }
  if (a.json) {
    std::ofstream out(*a.json);
    if (!out) fail(Errc::Io, "cannot write " + *a.json);
    metrics::write_json_summary(report, out);
  }
  std::cout << "T\timages\tsize_public\tsize_secret\tsize_total\tpsnr_public\tedge_match\n";
  for (const auto& s : report.summary)
    std::cout << s.threshold << "\t" << s.images << "\t" << fraction(s.size_public.mean) << "\t"
              << fraction(s.size_secret.mean) << "\t" << fraction(s.size_total.mean) << "\t"
              << db(s.psnr_public.mean) << "\t" << fraction(s.edge_match.mean) << "\n";
  std::cout << "knee T=" << report.knee << "\n";
  return 0;
}

int run_guess_t(const std::string& public_path) {
  std::cout << metrics::guess_threshold(jpeg::decode_jpeg(read_bytes(public_path))) << "\n";
  return 0;
}

int run_metrics_psnr(const std::string& a, const std::string& b) {
  const auto [x, y] = comparable(a, b);
  std::cout << db(metrics::psnr(x, y)) << "\n";
  return 0;
}

int run_metrics_edges(const std::string& a, const std::string& b) {
  const auto [x, y] = comparable(a, b);
  std::cout << fraction(metrics::edge_match(x, y)) << "\n";
  return 0;
}

int run_inspect(const std::string& path) {
  const auto bytes = read_bytes(path);
  const auto info = jpeg::inspect(bytes);
  nlohmann::json j{{"kind", info.kind},
                   {"decodable", info.decodable},
                   {"precision", info.precision},
                   {"width", info.width},
                   {"height", info.height},
                   {"restart_interval", info.restart_interval},
                   {"scans", info.scans},
                   {"bytes", bytes.size()}};
  for (const auto& c : info.components)
    j["components"].push_back({{"id", c.id}, {"h", c.h_sampling}, {"v", c.v_sampling}, {"quant_table", c.quant_table_id}});
  for (const auto& q : info.quant_tables)
    j["quant_tables"].push_back(
        {{"id", q.id}, {"precision_bits", q.precision_bits}, {"min", q.min}, {"max", q.max}, {"mean", q.mean}});
  for (const auto& h : info.huffman_tables)
    j["huffman_tables"].push_back({{"class", h.table_class ? "AC" : "DC"}, {"id", h.id}, {"symbols", h.symbol_count}});
  for (const auto& m : info.markers)
    j["markers"].push_back({{"name", m.name}, {"offset", m.offset}, {"length", m.length}});
  if (envelope::looks_like_container(bytes)) j["note"] = "sealed secret container, not a JPEG";
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_keygen(const std::optional<std::string>& output) {
  const auto key = envelope::KeyMaterial::generate();
  const auto hex = key.to_hex() + "\n";
  if (!output) {
    std::cout << hex;
    return 0;
  }
  if (fs::exists(*output)) fail(Errc::Validation, *output + " exists; refusing to overwrite a key");
  write_bytes(*output, Bytes(hex.begin(), hex.end()));
  fs::permissions(*output, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
  std::cout << "wrote " << *output << "\n";
  return 0;
}

int run_fixture(const FixtureArgs& a) {
  if (a.quality < 1 || a.quality > 100) fail(Errc::Validation, "quality must be 1..100");
  const auto img = synthetic_photo(a.width, a.height, a.seed, a.quality);
  write_bytes(a.output, jpeg::encode_jpeg(img));
  std::cout << "wrote " << a.output << " (" << a.width << "x" << a.height << ", seed " << a.seed << ")\n";
  return 0;
}

}  // namespace p3::tool
