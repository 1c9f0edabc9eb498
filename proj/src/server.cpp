#include "semcorpus/server.hpp"

#include <httplib.h>

namespace semcorpus {
namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_content(r.body.dump(), "application/json");
}

}  // namespace

ApiServer::ApiServer(Workspace workspace, PipelineConfig defaults)
    : workspace_(std::move(workspace)), defaults_(std::move(defaults)), server_(std::make_unique<httplib::Server>()) {
  server_->Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
    QueryParams params;
    for (const auto& [k, v] : req.params) params.emplace(k, v);
    reply(res, query(workspace_, req.path, params));
  });

  server_->Post("/runs", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      auto config = defaults_;
      if (!req.body.empty()) {
        const auto body = nlohmann::json::parse(req.body);
        if (body.contains("config")) config = config_from_json(body["config"]);
        if (body.contains("seed")) config.seed = body["seed"].get<std::uint64_t>();
      }
      const bool existed = workspace_.has(snapshot_id(workspace_.load_corpus(), config));
      const auto id = run_and_store(workspace_, config);
      reply(res, {existed ? 200 : 201, {{"snapshot_id", id}, {"created", !existed}}});
    } catch (const nlohmann::json::exception& e) {
      reply(res, {400, {{"error", std::string("request body: ") + e.what()}}});
    } catch (const PipelineError& e) {
      reply(res, {500, {{"error", e.what()}, {"log", e.log}}});
    } catch (const InputError& e) {
      reply(res, {400, {{"error", e.what()}}});
    }
  });

  server_->set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      reply(res, {500, {{"error", e.what()}}});
    }
  });
}

ApiServer::~ApiServer() = default;

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw Error("cannot bind " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ApiServer::listen() { server_->listen_after_bind(); }

void ApiServer::stop() { server_->stop(); }

}  // namespace semcorpus
