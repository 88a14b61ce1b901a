#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace p3::tool {

inline constexpr int kDefaultThreshold = 20;
inline constexpr const char* kUrlEnv = "P3_URL";
inline constexpr const char* kDefaultUrl = "http://127.0.0.1:8080";

struct SplitArgs {
  std::string input;
  int threshold = kDefaultThreshold;
  std::string out_dir = ".";
  bool no_encrypt = false;
  bool public_metadata = false;
  std::optional<std::string> key;
};

struct MergeArgs {
  std::string public_path;
  std::string secret_path;
  std::string output;
  std::optional<std::string> transform;
  std::optional<std::string> calibrate;  // untransformed public part
  std::optional<int> threshold;          // for an unencrypted secret
  std::optional<std::string> key;
};

struct ServeArgs {
  std::string listen = "127.0.0.1:8080";
  std::size_t max_upload = 32u << 20;
  int quality = 85;
  std::string filter = "bilinear";
  std::optional<double> sharpen;
};

struct ShareArgs {
  std::string input;
  int threshold = kDefaultThreshold;
  std::optional<std::string> url;
  std::optional<std::string> key;
};

struct ViewArgs {
  std::string photo_id;
  std::optional<std::string> variant;
  std::optional<int> w, h;
  std::optional<std::string> crop;
  std::optional<std::string> transform;
  std::optional<std::string> output;
  std::optional<std::string> url;
  std::optional<std::string> key;
};

struct SweepArgs {
  std::string corpus;
  std::vector<int> thresholds{1, 5, 10, 15, 20, 35, 50, 100};
  std::optional<std::string> report;
  std::optional<std::string> json;
  bool no_quality = false;
  unsigned threads = 0;
};

struct FixtureArgs {
  std::string output;
  int width = 1024;
  int height = 768;
  std::uint64_t seed = 1;
  int quality = 90;
};

int run_split(const SplitArgs& a);
int run_merge(const MergeArgs& a);
int run_serve(const ServeArgs& a);
int run_share(const ShareArgs& a);
int run_view(const ViewArgs& a);
int run_sweep(const SweepArgs& a);
int run_guess_t(const std::string& public_path);
int run_metrics_psnr(const std::string& a, const std::string& b);
int run_metrics_edges(const std::string& a, const std::string& b);
int run_inspect(const std::string& path);
int run_keygen(const std::optional<std::string>& output);
int run_fixture(const FixtureArgs& a);

}  // namespace p3::tool
