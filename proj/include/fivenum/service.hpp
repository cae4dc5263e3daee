#pragma once

// Stateless HTTP front end for the calculator UI:
//   POST /api/estimate   JSON summary in, estimate_json() out
//   GET  /table.csv      theta table for Q = 1..100
//   GET  /               static UI bundle (or a built-in single page)

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace fivenum {

struct HttpReply {
  int status = 200;  // 200, 400 (not JSON / not an object) or 422 (validation)
  std::string content_type = "application/json";
  std::string body;
};

/// Pure request handler behind POST /api/estimate.
HttpReply handle_estimate_request(std::string_view body);

/// Page served at / when no static directory is configured.
std::string_view builtin_page();

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path static_dir;  // empty: builtin_page()
};

class EstimateServer {
 public:
  explicit EstimateServer(ServeOptions opt);
  ~EstimateServer();
  EstimateServer(const EstimateServer&) = delete;
  EstimateServer& operator=(const EstimateServer&) = delete;

  /// Binds the socket and returns the port. Throws ConfigError on failure.
  int bind();
  /// Serves until stop(); call after bind().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fivenum
