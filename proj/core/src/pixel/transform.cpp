#include "p3/pixel/transform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "p3/error.hpp"

namespace p3::pixel {

std::string_view to_string(Filter f) {
  switch (f) {
    case Filter::Nearest: return "nearest";
    case Filter::Bilinear: return "bilinear";
    case Filter::Box: return "box";
  }
  return "?";
}

Filter parse_filter(std::string_view name) {
  if (name == "nearest") return Filter::Nearest;
  if (name == "bilinear") return Filter::Bilinear;
  if (name == "box") return Filter::Box;
  fail(Errc::Validation, "unknown filter '" + std::string(name) + "'");
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail(Errc::Validation, "bad integer '" + std::string(s) + "'");
  return v;
}

double parse_double(std::string_view s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    fail(Errc::Validation, "bad number '" + std::string(s) + "'");
  return v;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Step parse_step(std::string_view text) {
  if (text == "identity") return Identity{};
  const auto parts = split(text, ':');
  if (parts[0] == "crop" && parts.size() == 2) {
    const auto nums = split(parts[1], ',');
    if (nums.size() != 4) fail(Errc::Validation, "crop needs x,y,w,h");
    return Crop{parse_int(nums[0]), parse_int(nums[1]), parse_int(nums[2]), parse_int(nums[3])};
  }
  if (parts[0] == "resize" && (parts.size() == 3 || parts.size() == 4)) {
    const auto dims = split(parts[1], 'x');
    if (dims.size() != 2) fail(Errc::Validation, "resize needs WxH");
    Resize r{parse_int(dims[0]), parse_int(dims[1]), parse_filter(parts[2]), std::nullopt};
    if (parts.size() == 4) r.sharpen = parse_double(parts[3]);
    return r;
  }
  fail(Errc::Validation, "bad transform step '" + std::string(text) + "'");
}

struct StepGeometry {
  int width, height;
  void operator()(const Identity&) {}
  void operator()(const Crop& c) {
    if (c.w < 1 || c.h < 1 || c.x < 0 || c.y < 0 || c.x + c.w > width || c.y + c.h > height)
      fail(Errc::GeometryError, "crop rectangle outside " + std::to_string(width) + "x" + std::to_string(height));
    width = c.w;
    height = c.h;
  }
  void operator()(const Resize& r) {
    if (r.w < 1 || r.h < 1 || r.w > 65535 || r.h > 65535) fail(Errc::GeometryError, "resize target out of range");
    width = r.w;
    height = r.h;
  }
};

int scaled_ceil(int v, int s, int smax) { return (v * s + smax - 1) / smax; }

// Resampling weights for one axis, PIL style: the kernel is stretched by the
// downscale factor so shrinking averages instead of aliasing.
struct AxisWeights {
  std::vector<int> first;
  std::vector<std::vector<double>> w;
};

AxisWeights axis_weights(int in, int out, Filter f) {
  AxisWeights a;
  a.first.resize(out);
  a.w.resize(out);
  const double scale = static_cast<double>(in) / out;
  if (f == Filter::Nearest) {
    for (int i = 0; i < out; ++i) {
      a.first[i] = std::min(static_cast<int>((i + 0.5) * scale), in - 1);
      a.w[i] = {1.0};
    }
    return a;
  }
  const double fscale = std::max(scale, 1.0);
  const double support = (f == Filter::Box ? 0.5 : 1.0) * fscale;
  for (int i = 0; i < out; ++i) {
    const double center = (i + 0.5) * scale;
    const int lo = std::max(0, static_cast<int>(std::floor(center - support + 0.5)));
    const int hi = std::min(in, static_cast<int>(std::floor(center + support + 0.5)));
    std::vector<double> w;
    double sum = 0.0;
    for (int j = lo; j < hi; ++j) {
      const double x = (j + 0.5 - center) / fscale;
      double k;
      if (f == Filter::Box)
        k = (x >= -0.5 && x < 0.5) ? 1.0 : 0.0;
      else
        k = std::max(0.0, 1.0 - std::abs(x));
      w.push_back(k);
      sum += k;
    }
    if (sum > 0)
      for (auto& k : w) k /= sum;
    a.first[i] = lo;
    a.w[i] = std::move(w);
  }
  return a;
}

PlaneF resample(const PlaneF& p, int ow, int oh, Filter f) {
  const auto ax = axis_weights(p.width, ow, f);
  const auto ay = axis_weights(p.height, oh, f);
  PlaneF tmp(ow, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      const auto& w = ax.w[x];
      for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * p.at(ax.first[x] + static_cast<int>(k), y);
      tmp.at(x, y) = s;
    }
  PlaneF out(ow, oh);
  for (int y = 0; y < oh; ++y) {
    const auto& w = ay.w[y];
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * tmp.at(x, ay.first[y] + static_cast<int>(k));
      out.at(x, y) = s;
    }
  }
  return out;
}

PlaneF unsharp(const PlaneF& p, double amount) {
  auto blur_axis = [](const PlaneF& in, bool horizontal) {
    PlaneF out(in.width, in.height);
    for (int y = 0; y < in.height; ++y)
      for (int x = 0; x < in.width; ++x) {
        double a, b;
        if (horizontal) {
          a = in.at(std::max(x - 1, 0), y);
          b = in.at(std::min(x + 1, in.width - 1), y);
        } else {
          a = in.at(x, std::max(y - 1, 0));
          b = in.at(x, std::min(y + 1, in.height - 1));
        }
        out.at(x, y) = 0.25 * a + 0.5 * in.at(x, y) + 0.25 * b;
      }
    return out;
  };
  const PlaneF blurred = blur_axis(blur_axis(p, true), false);
  PlaneF out(p.width, p.height);
  for (std::size_t i = 0; i < p.samples.size(); ++i)
    out.samples[i] = p.samples[i] + amount * (p.samples[i] - blurred.samples[i]);
  return out;
}

struct StepApply {
  FloatImage& img;
  void operator()(const Identity&) {}
  void operator()(const Crop& c) {
    for (std::size_t i = 0; i < img.planes.size(); ++i) {
      const auto [hs, vs] = img.sampling[i];
      const auto& p = img.planes[i];
      const int px = c.x * hs / img.max_h;
      const int py = c.y * vs / img.max_v;
      const int pw = std::min(scaled_ceil(c.w, hs, img.max_h), p.width - px);
      const int ph = std::min(scaled_ceil(c.h, vs, img.max_v), p.height - py);
      PlaneF out(pw, ph);
      for (int y = 0; y < ph; ++y)
        for (int x = 0; x < pw; ++x) out.at(x, y) = p.at(px + x, py + y);
      img.planes[i] = std::move(out);
    }
    img.width = c.w;
    img.height = c.h;
  }
  void operator()(const Resize& r) {
    for (std::size_t i = 0; i < img.planes.size(); ++i) {
      const auto [hs, vs] = img.sampling[i];
      PlaneF out = resample(img.planes[i], scaled_ceil(r.w, hs, img.max_h), scaled_ceil(r.h, vs, img.max_v), r.filter);
      if (r.sharpen) out = unsharp(out, *r.sharpen);
      img.planes[i] = std::move(out);
    }
    img.width = r.w;
    img.height = r.h;
  }
};

}  // namespace

TransformSpec TransformSpec::parse(std::string_view text) {
  TransformSpec spec;
  if (text.empty()) fail(Errc::Validation, "empty transform");
  for (auto part : split(text, '+')) {
    Step s = parse_step(part);
    if (!std::holds_alternative<Identity>(s)) spec.steps.push_back(s);
  }
  return spec;
}

std::string TransformSpec::to_string() const {
  if (steps.empty()) return "identity";
  std::string out;
  for (const auto& step : steps) {
    if (!out.empty()) out += '+';
    if (std::holds_alternative<Identity>(step)) {
      out += "identity";
    } else if (const auto* c = std::get_if<Crop>(&step)) {
      out += "crop:" + std::to_string(c->x) + "," + std::to_string(c->y) + "," + std::to_string(c->w) + "," +
             std::to_string(c->h);
    } else {
      const auto& r = std::get<Resize>(step);
      out += "resize:" + std::to_string(r.w) + "x" + std::to_string(r.h) + ":" + std::string(pixel::to_string(r.filter));
      if (r.sharpen) out += ":" + format_double(*r.sharpen);
    }
  }
  return out;
}

std::pair<int, int> TransformSpec::output_size(int width, int height) const {
  StepGeometry g{width, height};
  for (const auto& s : steps) std::visit(g, s);
  return {g.width, g.height};
}

Crop snap_crop(const Crop& c, int width, int height, int grid_w, int grid_h) {
  if (grid_w < 1 || grid_h < 1) fail(Errc::GeometryError, "crop grid must be positive");
  auto snap = [](int v, int g) { return (v + g / 2) / g * g; };
  Crop out;
  out.x = std::clamp(snap(c.x, grid_w), 0, std::max(0, (width - 1) / grid_w * grid_w));
  out.y = std::clamp(snap(c.y, grid_h), 0, std::max(0, (height - 1) / grid_h * grid_h));
  int x1 = std::max(snap(c.x + c.w, grid_w), out.x + grid_w);
  int y1 = std::max(snap(c.y + c.h, grid_h), out.y + grid_h);
  out.w = std::min(x1, width) - out.x;
  out.h = std::min(y1, height) - out.y;
  return out;
}

FloatImage to_float(const PixelImage& img) {
  FloatImage f;
  f.width = img.width;
  f.height = img.height;
  f.max_h = img.max_h;
  f.max_v = img.max_v;
  for (const auto& p : img.planes) {
    f.planes.push_back(to_float(p));
    f.sampling.emplace_back(p.h_sampling, p.v_sampling);
  }
  return f;
}

PixelImage to_pixels(const FloatImage& img, SampleMode mode, ColorSpace cs) {
  PixelImage out;
  out.width = img.width;
  out.height = img.height;
  out.max_h = img.max_h;
  out.max_v = img.max_v;
  out.mode = mode;
  out.colorspace = cs;
  for (std::size_t i = 0; i < img.planes.size(); ++i)
    out.planes.push_back(to_int(img.planes[i], mode == SampleMode::Conventional, img.sampling[i].first,
                                img.sampling[i].second));
  return out;
}

FloatImage apply_transform(FloatImage img, const TransformSpec& spec) {
  (void)spec.output_size(img.width, img.height);  // validates every step first
  StepApply apply{img};
  for (const auto& s : spec.steps) std::visit(apply, s);
  return img;
}

PixelImage apply_transform(const PixelImage& img, const TransformSpec& spec) {
  img.validate();
  if (spec.steps.empty()) return img;
  return to_pixels(apply_transform(to_float(img), spec), img.mode, img.colorspace);
}

}  // namespace p3::pixel
