#include <httplib.h>

#include "exact/service/service.hpp"

namespace exact::service {

struct HttpService::Impl {
  explicit Impl(LoadedAnalysis analysis) : router(std::move(analysis)) {}

  ApiRouter router;
  httplib::Server server;
};

HttpService::HttpService(LoadedAnalysis analysis, std::optional<std::filesystem::path> ui_dir)
    : impl_(std::make_unique<Impl>(std::move(analysis))) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    Response r = impl_->router.get(req.path, query);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  impl_->server.Get(R"(/api(/.*)?)", handler);
  if (ui_dir && std::filesystem::is_directory(*ui_dir)) impl_->server.set_mount_point("/", ui_dir->string());
  impl_->server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      res.set_content(report::canonical({{"error", "no route for '" + req.path + "'"}}), "application/json");
    }
  });
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void HttpService::listen() { impl_->server.listen_after_bind(); }

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

void HttpService::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace exact::service
