#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

#include "p3/envelope/envelope.hpp"
#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"
#include "p3/metrics/metrics.hpp"
#include "p3/pixel/codec.hpp"

namespace p3::metrics {

namespace {

std::vector<SweepRow> sweep_one(const NamedImage& input, const std::vector<int>& thresholds, bool quality) {
  const auto img = jpeg::decode_jpeg(input.bytes);
  pixel::PixelImage orig_pixels;
  EdgeMap orig_edges;
  if (quality) {
    orig_pixels = pixel::decode_to_pixels(img, pixel::SampleMode::Conventional);
    orig_edges = canny(orig_pixels);
  }
  std::vector<SweepRow> rows;
  for (int t : thresholds) {
    const auto pair = split_image(img, Threshold(t));
    SweepRow row;
    row.image = input.name;
    row.threshold = t;
    row.original_bytes = input.bytes.size();
    row.public_bytes = jpeg::encode_jpeg(pair.public_part).size();
    row.secret_bytes = jpeg::encode_jpeg(pair.secret_part).size();
    const double orig = static_cast<double>(row.original_bytes);
    row.size_public = row.public_bytes / orig;
    row.size_secret = row.secret_bytes / orig;
    row.size_total = row.size_public + row.size_secret;
    if (quality) {
      const auto pub = pixel::decode_to_pixels(pair.public_part, pixel::SampleMode::Conventional);
      row.psnr_public = psnr(pub, orig_pixels);
      row.edge_match = edge_match(orig_edges, canny(pub));
    } else {
      row.psnr_public = row.edge_match = std::nan("");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Summary summarize(const std::vector<double>& v) {
  Summary s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  for (double x : v) s.stdev += (x - s.mean) * (x - s.mean);
  s.stdev = std::sqrt(s.stdev / static_cast<double>(v.size()));
  return s;
}

}  // namespace

int find_knee(const std::vector<int>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty()) fail(Errc::Validation, "knee needs matching, non-empty series");
  if (xs.size() < 3) return xs.front();
  // Normalize both axes so the chord distance does not depend on units.
  const double x0 = xs.front(), x1 = xs.back();
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  const double yr = *ymax - *ymin > 0 ? *ymax - *ymin : 1.0;
  const double y0 = (ys.front() - *ymin) / yr, y1 = (ys.back() - *ymin) / yr;
  int best = xs.front();
  double best_d = -1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = (xs[i] - x0) / (x1 - x0);
    const double y = (ys[i] - *ymin) / yr;
    const double chord = y0 + (y1 - y0) * x;
    const double d = chord - y;
    if (d > best_d) {
      best_d = d;
      best = xs[i];
    }
  }
  return best;
}

SweepReport storage_sweep(const std::vector<NamedImage>& images, const std::vector<int>& thresholds,
                          const SweepOptions& options) {
  if (images.empty()) fail(Errc::Validation, "sweep needs at least one image");
  if (thresholds.empty()) fail(Errc::Validation, "sweep needs at least one threshold");
  for (int t : thresholds) (void)Threshold(t);

  std::vector<std::vector<SweepRow>> per_image(images.size());
  std::vector<std::exception_ptr> errors(images.size());
  std::atomic<std::size_t> next{0};
  const unsigned n = std::max(1u, std::min<unsigned>(options.threads ? options.threads : std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(images.size())));
  auto worker = [&] {
    for (std::size_t i; (i = next++) < images.size();) {
      try {
        per_image[i] = sweep_one(images[i], thresholds, options.quality_metrics);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < images.size(); ++i)
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const Error& e) {
        fail(e.code(), images[i].name + ": " + e.what());
      }
    }

  SweepReport report;
  for (auto& rows : per_image) report.rows.insert(report.rows.end(), rows.begin(), rows.end());

  std::vector<int> sorted = thresholds;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> secret_means;
  for (int t : sorted) {
    std::vector<double> pub, sec, tot, ps, em;
    for (const auto& r : report.rows)
      if (r.threshold == t) {
        pub.push_back(r.size_public);
        sec.push_back(r.size_secret);
        tot.push_back(r.size_total);
        ps.push_back(std::isinf(r.psnr_public) ? 99.0 : r.psnr_public);
        em.push_back(r.edge_match);
      }
    ThresholdSummary s;
    s.threshold = t;
    s.images = pub.size();
    s.size_public = summarize(pub);
    s.size_secret = summarize(sec);
    s.size_total = summarize(tot);
    s.psnr_public = summarize(ps);
    s.edge_match = summarize(em);
    secret_means.push_back(s.size_secret.mean);
    report.summary.push_back(s);
  }
  report.knee = find_knee(sorted, secret_means);
  return report;
}

BandwidthCost bandwidth_cost(const jpeg::QuantizedImage& original, Threshold t, int variant_width,
                             const psp::PipelineConfig& cfg) {
  if (variant_width < 1) fail(Errc::Validation, "variant width must be positive");
  const psp::VariantSpec v{"w" + std::to_string(variant_width), variant_width, 65535};
  const auto pair = split_image(original, t);
  BandwidthCost c;
  c.public_variant_bytes = psp::render_variant(pair.public_part, v, cfg).size();
  c.original_variant_bytes = psp::render_variant(original, v, cfg).size();
  // Photo ids are 64 hex characters.
  c.container_bytes = envelope::sealed_size(jpeg::encode_jpeg(pair.secret_part).size(), 64);
  c.cost = static_cast<std::int64_t>(c.public_variant_bytes + c.container_bytes) -
           static_cast<std::int64_t>(c.original_variant_bytes);
  return c;
}

}  // namespace p3::metrics
