#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "p3/error.hpp"

namespace {

enum Exit : int { kOk = 0, kValidation = 2, kAuth = 3, kTransport = 4, kCodec = 5 };

int exit_code(p3::Errc c) {
  using p3::Errc;
  switch (c) {
    case Errc::UnsupportedFormat:
    case Errc::CorruptStream:
    case Errc::InvalidImage:
      return kCodec;
    case Errc::BadMagic:
    case Errc::BadVersion:
    case Errc::AuthFailure:
    case Errc::Truncated:
      return kAuth;
    case Errc::Transport:
    case Errc::NotFound:
    case Errc::MissingSecret:
      return kTransport;
    default:
      return kValidation;
  }
}

void add_key_option(CLI::App* cmd, std::optional<std::string>& key) {
  cmd->add_option("--key", key, "key file with 64 hex digits (default: $P3_KEY_FILE)");
}

void add_url_option(CLI::App* cmd, std::optional<std::string>& url) {
  cmd->add_option("--url", url, "service base URL (default: $P3_URL or http://127.0.0.1:8080)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace p3::tool;
  CLI::App app{"p3: split JPEGs into a public part and an encrypted secret part"};
  app.require_subcommand(1);
  int rc = 0;

  SplitArgs split;
  auto* c_split = app.add_subcommand("split", "split a JPEG into public.jpg and secret.p3s");
  c_split->add_option("input", split.input, "baseline JPEG")->required();
  c_split->add_option("-t,--threshold", split.threshold, "clipping threshold T (1..100)");
  c_split->add_option("-o,--out", split.out_dir, "output directory");
  c_split->add_flag("--no-encrypt", split.no_encrypt, "write secret.jpg instead of a sealed container");
  c_split->add_flag("--public-metadata", split.public_metadata, "copy APPn/COM segments into the public part");
  add_key_option(c_split, split.key);
  c_split->callback([&] { rc = run_split(split); });

  MergeArgs merge;
  auto* c_merge = app.add_subcommand("merge", "reconstruct from a public part and its secret part");
  c_merge->add_option("public", merge.public_path)->required();
  c_merge->add_option("secret", merge.secret_path, "secret.p3s or secret.jpg")->required();
  c_merge->add_option("-o,--out", merge.output, ".jpg keeps coefficients; .png/.ppm export pixels")->required();
  auto* o_tr = c_merge->add_option("--transform", merge.transform, "operator the provider applied, e.g. resize:130x98:bilinear");
  c_merge->add_option("--calibrate", merge.calibrate, "untransformed public part; recovers the operator")->excludes(o_tr);
  c_merge->add_option("-t,--threshold", merge.threshold, "T for an unencrypted secret part");
  add_key_option(c_merge, merge.key);
  c_merge->callback([&] { rc = run_merge(merge); });

  ServeArgs serve;
  auto* c_serve = app.add_subcommand("serve", "run the mock photo-sharing provider");
  c_serve->add_option("--listen", serve.listen, "host:port");
  c_serve->add_option("--max-upload", serve.max_upload, "upload limit in bytes");
  c_serve->add_option("--quality", serve.quality, "static variant JPEG quality");
  c_serve->add_option("--filter", serve.filter, "static variant filter: nearest, bilinear or box");
  c_serve->add_option("--sharpen", serve.sharpen, "unsharp amount after resizing");
  c_serve->callback([&] { rc = run_serve(serve); });

  ShareArgs share;
  auto* c_share = app.add_subcommand("share", "split, upload the public part and store the sealed secret");
  c_share->add_option("input", share.input)->required();
  c_share->add_option("-t,--threshold", share.threshold, "clipping threshold T (1..100)");
  add_url_option(c_share, share.url);
  add_key_option(c_share, share.key);
  c_share->callback([&] { rc = run_share(share); });

  ViewArgs view;
  auto* c_view = app.add_subcommand("view", "fetch and reconstruct a shared photo");
  c_view->add_option("photo_id", view.photo_id)->required();
  c_view->add_option("--variant", view.variant, "small, big or thumb");
  c_view->add_option("--width", view.w, "dynamic resize width");
  c_view->add_option("--height", view.h, "dynamic resize height");
  c_view->add_option("--crop", view.crop, "dynamic crop x,y,w,h");
  c_view->add_option("--transform", view.transform, "override the operator instead of deriving or calibrating it");
  c_view->add_option("-o,--out", view.output, "write the reconstruction (.jpg, .png, .ppm)");
  add_url_option(c_view, view.url);
  add_key_option(c_view, view.key);
  c_view->callback([&] { rc = run_view(view); });

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "storage/privacy sweep over a corpus directory");
  c_sweep->add_option("corpus", sweep.corpus)->required();
  c_sweep->add_option("--thresholds", sweep.thresholds, "comma separated T values")->delimiter(',');
  c_sweep->add_option("--report", sweep.report, "per-image CSV");
  c_sweep->add_option("--json", sweep.json, "per-threshold summary JSON");
  c_sweep->add_flag("--no-quality", sweep.no_quality, "skip PSNR and edge metrics");
  c_sweep->add_option("--threads", sweep.threads, "worker threads (0 = all cores)");
  c_sweep->callback([&] { rc = run_sweep(sweep); });

  auto* c_attack = app.add_subcommand("attack", "attacks on the public part");
  c_attack->require_subcommand(1);
  std::string guess_in;
  auto* c_guess = c_attack->add_subcommand("guess-t", "guess T as the most frequent nonzero |AC|");
  c_guess->add_option("public", guess_in)->required();
  c_guess->callback([&] { rc = run_guess_t(guess_in); });

  auto* c_metrics = app.add_subcommand("metrics", "image quality metrics");
  c_metrics->require_subcommand(1);
  std::string ma, mb;
  auto* c_psnr = c_metrics->add_subcommand("psnr", "PSNR in dB over all samples");
  c_psnr->add_option("a", ma)->required();
  c_psnr->add_option("b", mb)->required();
  c_psnr->callback([&] { rc = run_metrics_psnr(ma, mb); });
  auto* c_edges = c_metrics->add_subcommand("edges", "fraction of a's Canny edges also present in b");
  c_edges->add_option("a", ma)->required();
  c_edges->add_option("b", mb)->required();
  c_edges->callback([&] { rc = run_metrics_edges(ma, mb); });

  std::string inspect_in;
  auto* c_inspect = app.add_subcommand("inspect", "print JPEG header structure as JSON");
  c_inspect->add_option("input", inspect_in)->required();
  c_inspect->callback([&] { rc = run_inspect(inspect_in); });

  std::optional<std::string> keygen_out;
  auto* c_keygen = app.add_subcommand("keygen", "generate a random 256-bit key");
  c_keygen->add_option("-o,--out", keygen_out, "key file (printed to stdout when omitted)");
  c_keygen->callback([&] { rc = run_keygen(keygen_out); });

  FixtureArgs fixture;
  auto* c_fixture = app.add_subcommand("fixture", "write a deterministic synthetic test photo");
  c_fixture->add_option("-o,--out", fixture.output)->required();
  c_fixture->add_option("--width", fixture.width);
  c_fixture->add_option("--height", fixture.height);
  c_fixture->add_option("--seed", fixture.seed);
  c_fixture->add_option("--quality", fixture.quality);
  c_fixture->callback([&] { rc = run_fixture(fixture); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  } catch (const p3::Error& e) {
    std::cerr << "p3: " << p3::to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "p3: " << e.what() << "\n";
    return kValidation;
  }
  return rc;
}
