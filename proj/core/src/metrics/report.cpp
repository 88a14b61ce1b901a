#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <ostream>

#include "p3/metrics/metrics.hpp"

namespace p3::metrics {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

nlohmann::json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return "inf";
  return v;
}

nlohmann::json to_json(const Summary& s) { return {{"mean", number(s.mean)}, {"stdev", number(s.stdev)}}; }

}  // namespace

void write_csv(const SweepReport& report, std::ostream& out) {
  out << "image,T,size_public,size_secret,size_total,psnr_public,edge_match\n";
  out << std::setprecision(6);
  for (const auto& r : report.rows) {
    out << csv_field(r.image) << ',' << r.threshold << ',' << r.size_public << ',' << r.size_secret << ','
        << r.size_total << ',';
    if (std::isinf(r.psnr_public))
      out << "inf";
    else if (!std::isnan(r.psnr_public))
      out << r.psnr_public;
    out << ',';
    if (!std::isnan(r.edge_match)) out << r.edge_match;
    out << '\n';
  }
}

void write_json_summary(const SweepReport& report, std::ostream& out) {
  nlohmann::json j;
  j["images"] = report.summary.empty() ? 0 : report.summary.front().images;
  j["knee"] = report.knee;
  auto& arr = j["thresholds"] = nlohmann::json::array();
  for (const auto& s : report.summary)
    arr.push_back({{"T", s.threshold},
                   {"images", s.images},
                   {"size_public", to_json(s.size_public)},
                   {"size_secret", to_json(s.size_secret)},
                   {"size_total", to_json(s.size_total)},
                   {"psnr_public", to_json(s.psnr_public)},
                   {"edge_match", to_json(s.edge_match)}});
  out << j.dump(2) << '\n';
}

}  // namespace p3::metrics
