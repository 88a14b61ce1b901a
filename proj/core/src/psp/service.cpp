#include "p3/psp/service.hpp"

#include <httplib.h>

#include <charconv>
#include <json.hpp>
#include <thread>

#include "p3/envelope/envelope.hpp"
#include "p3/error.hpp"
#include "p3/jpeg/codec.hpp"

namespace p3::psp {

namespace {

constexpr const char* kJpeg = "image/jpeg";
constexpr const char* kOctets = "application/octet-stream";
constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(nlohmann::json{{"error", message}}.dump(), kJson);
}

std::optional<int> parse_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<pixel::Crop> parse_crop(const std::string& s) {
  int v[4];
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    const auto end = i < 3 ? s.find(',', start) : s.size();
    if (end == std::string::npos) return std::nullopt;
    const auto n = parse_int(s.substr(start, end - start));
    if (!n) return std::nullopt;
    v[i] = *n;
    start = end + 1;
  }
  return pixel::Crop{v[0], v[1], v[2], v[3]};
}

std::string to_string_body(const Bytes& b) { return std::string(b.begin(), b.end()); }

Bytes body_bytes(const httplib::Request& req) { return Bytes(req.body.begin(), req.body.end()); }

}  // namespace

struct Service::Impl {
  httplib::Server server;
  std::thread thread;
};

std::pair<std::string, int> parse_listen_address(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) fail(Errc::Validation, "listen address must be host:port");
  const auto port = parse_int(addr.substr(colon + 1));
  if (!port || *port < 0 || *port > 65535) fail(Errc::Validation, "bad port in '" + addr + "'");
  std::string host = addr.substr(0, colon);
  if (host.empty()) host = "0.0.0.0";
  return {host, *port};
}

Service::Service(ServiceConfig config) : config_(std::move(config)), impl_(std::make_unique<Impl>()) {
  install_routes();
}

Service::~Service() { stop(); }

std::string Service::base_url() const {
  const std::string host = host_ == "0.0.0.0" ? "127.0.0.1" : host_;
  return "http://" + host + ":" + std::to_string(port_);
}

void Service::install_routes() {
  auto& srv = impl_->server;
  // One byte of slack so an over-limit body reaches the handler's 413 rather
  // than being cut off mid-read.
  srv.set_payload_max_length(config_.max_upload + 1);

  srv.Put("/photos", [this](const httplib::Request& req, httplib::Response& res) {
    ++photo_requests_;
    if (req.body.size() > config_.max_upload) return send_error(res, 413, "upload exceeds size limit");
    const auto bytes = body_bytes(req);
    if (envelope::looks_like_container(bytes)) return send_error(res, 400, "secret containers are not photos");
    jpeg::QuantizedImage img;
    try {
      img = jpeg::decode_jpeg(bytes);
    } catch (const Error& e) {
      return send_error(res, 400, e.what());
    }
    PhotoRecord rec;
    rec.photo_id = sha256_hex(bytes);
    if (!store_.has_photo(rec.photo_id)) {
      try {
        for (const auto& v : default_variants())
          rec.variants[v.name] = std::make_shared<const Bytes>(render_variant(img, v, config_.pipeline));
      } catch (const Error& e) {
        return send_error(res, 400, e.what());
      }
      rec.original_public = std::make_shared<const Bytes>(bytes);
      store_.put_photo(rec);
    }
    res.status = 201;
    res.set_content(nlohmann::json{{"photo_id", rec.photo_id}, {"width", img.width}, {"height", img.height}}.dump(),
                    kJson);
  });

  srv.Get(R"(/photos/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    ++photo_requests_;
    const auto rec = store_.photo(req.matches[1]);
    if (!rec) return send_error(res, 404, "unknown photo id");

    if (req.has_param("variant")) {
      if (req.has_param("w") || req.has_param("h") || req.has_param("crop"))
        return send_error(res, 400, "variant cannot be combined with w/h/crop");
      const auto it = rec->variants.find(req.get_param_value("variant"));
      if (it == rec->variants.end()) return send_error(res, 400, "unknown variant");
      return res.set_content(to_string_body(*it->second), kJpeg);
    }

    DynamicRequest dyn;
    for (const char* key : {"w", "h"}) {
      if (!req.has_param(key)) continue;
      const auto v = parse_int(req.get_param_value(key));
      if (!v) return send_error(res, 400, std::string("bad ") + key);
      (key[0] == 'w' ? dyn.w : dyn.h) = *v;
    }
    if (req.has_param("crop")) {
      dyn.crop = parse_crop(req.get_param_value("crop"));
      if (!dyn.crop) return send_error(res, 400, "crop must be x,y,w,h");
    }
    if (dyn.empty()) return res.set_content(to_string_body(*rec->original_public), kJpeg);

    try {
      const auto img = jpeg::decode_jpeg(*rec->original_public);
      const auto spec = dynamic_transform(dyn, img);
      res.set_content(to_string_body(render_dynamic(img, spec)), kJpeg);
    } catch (const Error& e) {
      send_error(res, 400, e.what());
    }
  });

  srv.Put(R"(/secrets/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    ++secret_requests_;
    if (req.body.size() > config_.max_upload) return send_error(res, 413, "upload exceeds size limit");
    store_.put_secret(req.matches[1], body_bytes(req));
    res.status = 204;
  });

  srv.Get(R"(/secrets/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    ++secret_requests_;
    const auto blob = store_.secret(req.matches[1]);
    if (!blob) return send_error(res, 404, "no secret stored under this id");
    res.set_content(to_string_body(*blob), kOctets);
  });
}

int Service::start(const std::string& host, int port) {
  auto& srv = impl_->server;
  host_ = host;
  port_ = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
  if (port_ < 0) fail(Errc::Transport, "cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([&srv] { srv.listen_after_bind(); });
  srv.wait_until_ready();
  return port_;
}

void Service::run(const std::string& host, int port) {
  host_ = host;
  port_ = port;
  if (!impl_->server.listen(host, port)) fail(Errc::Transport, "cannot listen on " + host + ":" + std::to_string(port));
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace p3::psp
