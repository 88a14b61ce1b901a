#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>

#include "p3/psp/pipeline.hpp"
#include "p3/psp/store.hpp"

namespace p3::psp {

struct ServiceConfig {
  std::size_t max_upload = 32u << 20;
  PipelineConfig pipeline;
};

/// Splits "host:port" (port required). Throws Errc::Validation.
std::pair<std::string, int> parse_listen_address(const std::string& addr);

/// Mock photo-sharing provider.
///   PUT /photos            JPEG body -> {"photo_id": ...}
///   GET /photos/{id}       original, ?variant=NAME, or ?w=&h=&crop=x,y,w,h
///   PUT /secrets/{id}      opaque blob
///   GET /secrets/{id}
class Service {
 public:
  explicit Service(ServiceConfig config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Serves on a background thread. Port 0 picks a free port. Returns the
  /// bound port once the server accepts connections.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

  int port() const { return port_; }
  std::string base_url() const;

  Store& store() { return store_; }
  const Store& store() const { return store_; }

  /// Requests that reached a handler, by route family.
  std::size_t photo_requests() const { return photo_requests_; }
  std::size_t secret_requests() const { return secret_requests_; }

 private:
  struct Impl;
  void install_routes();

  ServiceConfig config_;
  Store store_;
  std::unique_ptr<Impl> impl_;
  std::string host_ = "127.0.0.1";
  int port_ = 0;
  std::atomic<std::size_t> photo_requests_{0};
  std::atomic<std::size_t> secret_requests_{0};
};

}  // namespace p3::psp
