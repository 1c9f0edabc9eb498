// Command-line front end: ingest a corpus, run analyses into snapshots,
// export snapshot resources, and serve the HTTP API.

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "semcorpus/server.hpp"
#include "semcorpus/service.hpp"

using namespace semcorpus;

namespace {

ApiServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

PipelineConfig load_config(const std::string& path, const std::optional<std::uint64_t>& seed) {
  nlohmann::json j = nlohmann::json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path);
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path + ": " + e.what());
    }
  }
  auto config = config_from_json(j);
  if (seed) config.seed = *seed;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify an article corpus by keywords, citations and topics, and compare the classifications."};
  app.require_subcommand(1);
  std::string workspace = "workspace";
  std::optional<std::uint64_t> seed;
  std::string config_path;
  app.add_option("--workspace", workspace, "Workspace directory")->capture_default_str();
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);

  auto* ingest = app.add_subcommand("ingest", "Load and validate the corpus into the workspace");
  std::string articles, citations;
  ingest->add_option("--articles", articles, "Articles CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--citations", citations, "Citations CSV")->check(CLI::ExistingFile);

  auto* run = app.add_subcommand("run", "Run every applicable analysis and store a snapshot");

  auto* serve = app.add_subcommand("serve", "Serve the JSON API");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();

  auto* exp = app.add_subcommand("export", "Print a snapshot resource, e.g. /<sid>/networks/keywords");
  std::string target, out_path;
  exp->add_option("resource", target, "Resource path with optional ?query")->required();
  exp->add_option("--out", out_path, "Write to a file instead of stdout");

  app.add_subcommand("list-snapshots", "List stored snapshots");

  CLI11_PARSE(app, argc, argv);

  try {
    const Workspace ws(workspace);
    if (*ingest) {
      const auto corpus = citations.empty() ? semcorpus::load_corpus(articles)
                                            : semcorpus::load_corpus(articles, std::filesystem::path(citations));
      {
        WorkspaceLock lock(ws);
        ws.save_corpus(corpus);
      }
      for (const auto& w : corpus.provenance().warnings) std::cerr << "warning: " << w << "\n";
      std::cout << corpus.articles().size() << " articles, " << corpus.citations().size() << " citation records\n";
    } else if (*run) {
      std::cout << run_and_store(ws, load_config(config_path, seed)) << "\n";
    } else if (*serve) {
      ApiServer server(ws, load_config(config_path, seed));
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving " << ws.root() << " on http://" << host << ":" << bound << "\n";
      server.listen();
    } else if (*exp) {
      auto [path, params] = split_target(target);
      const auto r = query(ws, path, params);
      const auto text = r.body.dump(1) + "\n";
      if (out_path.empty())
        std::cout << text;
      else
        std::ofstream(out_path) << text;
      if (r.status != 200) return r.status == 404 ? 3 : 2;
    } else {
      for (const auto& s : ws.list())
        std::cout << s["snapshot_id"].get<std::string>() << "  " << s["created_at"].get<std::string>() << "\n";
    }
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& line : e.log) std::cerr << "  " << line << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
