#pragma once

#include <memory>
#include <string>

#include "semcorpus/service.hpp"

namespace httplib {
class Server;
}

namespace semcorpus {

/// JSON API over a workspace: the query routes plus `POST /runs`.
class ApiServer {
public:
  /// `defaults` configures runs whose request body carries no config.
  ApiServer(Workspace workspace, PipelineConfig defaults);
  ~ApiServer();

  /// Binds without serving; port 0 picks a free port. Returns the port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();

private:
  Workspace workspace_;
  PipelineConfig defaults_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace semcorpus
