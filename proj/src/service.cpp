#include "fivenum/service.hpp"

#include "httplib.h"

#include "fivenum/error.hpp"
#include "fivenum/estimators.hpp"
#include "fivenum/meta_io.hpp"
#include "fivenum/weights.hpp"

namespace fivenum {

namespace {

using nlohmann::json;

HttpReply error_reply(int status, std::string_view kind, const std::vector<Violation>& v) {
  return {status, "application/json",
          json{{"error", std::string(kind)}, {"violations", violations_json(v)}}.dump()};
}

constexpr std::string_view kPage = R"html(<!doctype html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>Mean and SD from a five-number summary</title>
<style>
body { font-family: sans-serif; max-width: 40em; margin: 2em auto; }
label { display: inline-block; width: 6em; }
input { width: 8em; margin: 0.2em 0; }
pre { background: #f4f4f4; padding: 0.8em; }
</style>
</head>
<body>
<h1>Mean and SD from a five-number summary</h1>
<p>Leave the fields of an unreported quantile blank: min/median/max,
q1/median/q3, or all five.</p>
<form id="f">
<div><label for="n">n</label><input id="n" inputmode="numeric"></div>
<div><label for="min">min</label><input id="min"></div>
<div><label for="q1">q1</label><input id="q1"></div>
<div><label for="median">median</label><input id="median"></div>
<div><label for="q3">q3</label><input id="q3"></div>
<div><label for="max">max</label><input id="max"></div>
<button>Calculate</button>
</form>
<pre id="out"></pre>
<script>
document.getElementById("f").addEventListener("submit", async (ev) => {
  ev.preventDefault();
  const body = {};
  for (const k of ["n", "min", "q1", "median", "q3", "max"]) {
    const v = document.getElementById(k).value.trim();
    if (v !== "") body[k] = Number(v);
  }
  const out = document.getElementById("out");
  try {
    const r = await fetch("/api/estimate", {method: "POST", body: JSON.stringify(body),
                                           headers: {"Content-Type": "application/json"}});
    out.textContent = JSON.stringify(await r.json(), null, 2);
  } catch (e) {
    out.textContent = "request failed: " + e;
  }
});
</script>
</body>
</html>
)html";

}  // namespace

std::string_view builtin_page() { return kPage; }

HttpReply handle_estimate_request(std::string_view body) {
  json j = json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded())
    return error_reply(400, "bad_request", {{std::string(codes::malformed_json), "body is not valid JSON"}});
  if (!j.is_object())
    return error_reply(400, "bad_request",
                       {{std::string(codes::malformed_request), "body must be a JSON object"}});
  std::vector<Violation> problems;
  const FiveNumberSummary s = summary_from_json(j, problems);
  if (!problems.empty()) return error_reply(422, "validation_failed", problems);
  try {
    return {200, "application/json", estimate_json(estimate(s)).dump()};
  } catch (const ValidationError& e) {
    return error_reply(422, "validation_failed", e.violations());
  }
}

struct EstimateServer::Impl {
  ServeOptions opt;
  httplib::Server server;
  int port = -1;
};

EstimateServer::EstimateServer(ServeOptions opt) : impl_(std::make_unique<Impl>()) {
  impl_->opt = std::move(opt);
  auto& srv = impl_->server;
  srv.Post("/api/estimate", [](const httplib::Request& req, httplib::Response& res) {
    const HttpReply r = handle_estimate_request(req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  });
  srv.Get("/table.csv", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(table_csv(generate_table(100)), "text/csv");
  });
  const auto& dir = impl_->opt.static_dir;
  if (!dir.empty()) {
    if (!srv.set_mount_point("/", dir.string()))
      throw ConfigError("static directory not found: " + dir.string());
  } else {
    srv.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(std::string(kPage), "text/html; charset=utf-8");
    });
  }
}

EstimateServer::~EstimateServer() { stop(); }

int EstimateServer::bind() {
  auto& i = *impl_;
  if (i.opt.port == 0)
    i.port = i.server.bind_to_any_port(i.opt.host);
  else
    i.port = i.server.bind_to_port(i.opt.host, i.opt.port) ? i.opt.port : -1;
  if (i.port < 0)
    throw ConfigError("cannot bind " + i.opt.host + ":" + std::to_string(i.opt.port));
  return i.port;
}

void EstimateServer::run() { impl_->server.listen_after_bind(); }

void EstimateServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace fivenum
