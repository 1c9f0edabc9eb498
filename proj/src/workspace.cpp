#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "semcorpus/service.hpp"

namespace semcorpus {
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw NotFound("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
  if (!out) throw Error("cannot write " + p.string());
}

bool safe_relative(const std::string& file) {
  const fs::path p(file);
  if (p.is_absolute() || file.empty()) return false;
  for (const auto& part : p)
    if (part == "..") return false;
  return true;
}

}  // namespace

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Workspace::Workspace(fs::path root) : root_(std::move(root)) { fs::create_directories(root_ / "snapshots"); }

fs::path Workspace::snapshot_dir(const std::string& id) const {
  if (id.empty() || id.find_first_not_of("0123456789abcdef") != std::string::npos)
    throw NotFound("snapshot '" + id + "' not found");
  return root_ / "snapshots" / id;
}

void Workspace::save_corpus(const Corpus& corpus) const {
  const auto tmp = root_ / ".corpus.json.tmp";
  spit(tmp, corpus_to_json(corpus).dump(1) + "\n");
  fs::rename(tmp, root_ / "corpus.json");
}

Corpus Workspace::load_corpus() const {
  const auto p = root_ / "corpus.json";
  if (!fs::exists(p)) throw InputError("workspace " + root_.string() + " holds no corpus; run ingest first");
  try {
    return corpus_from_json(nlohmann::json::parse(slurp(p)));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

bool Workspace::store(const Snapshot& snapshot, const std::string& created_at) const {
  const auto dir = snapshot_dir(snapshot.id);
  if (fs::exists(dir)) return false;
  const auto tmp = root_ / "snapshots" / (".tmp-" + snapshot.id + "-" + std::to_string(::getpid()));
  fs::remove_all(tmp);
  for (const auto& [file, content] : snapshot.files) spit(tmp / file, content);
  spit(tmp / "meta.json", nlohmann::json{{"snapshot_id", snapshot.id}, {"created_at", created_at}}.dump(1) + "\n");
  fs::rename(tmp, dir);
  return true;
}

std::vector<nlohmann::json> Workspace::list() const {
  std::vector<nlohmann::json> out;
  for (const auto& entry : fs::directory_iterator(root_ / "snapshots")) {
    const auto name = entry.path().filename().string();
    if (name.starts_with(".") || !fs::exists(entry.path() / "meta.json")) continue;
    out.push_back(nlohmann::json::parse(slurp(entry.path() / "meta.json")));
  }
  std::sort(out.begin(), out.end(), [](const nlohmann::json& a, const nlohmann::json& b) {
    return std::pair(a["created_at"].get<std::string>(), a["snapshot_id"].get<std::string>()) <
           std::pair(b["created_at"].get<std::string>(), b["snapshot_id"].get<std::string>());
  });
  return out;
}

bool Workspace::has(const std::string& id) const {
  try {
    return fs::exists(snapshot_dir(id) / "meta.json");
  } catch (const NotFound&) {
    return false;
  }
}

bool Workspace::exists(const std::string& id, const std::string& file) const {
  return safe_relative(file) && fs::exists(snapshot_dir(id) / file);
}

std::string Workspace::read(const std::string& id, const std::string& file) const {
  if (!safe_relative(file)) throw NotFound("no resource '" + file + "'");
  if (!has(id)) throw NotFound("snapshot '" + id + "' not found");
  const auto p = snapshot_dir(id) / file;
  if (!fs::exists(p)) throw NotFound("snapshot " + id + " has no " + file);
  return slurp(p);
}

WorkspaceLock::WorkspaceLock(const Workspace& ws) {
  const auto p = ws.root() / ".lock";
  fd_ = ::open(p.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error("cannot open lock file " + p.string());
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    throw Error("cannot lock " + p.string());
  }
}

WorkspaceLock::~WorkspaceLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

std::string run_and_store(const Workspace& ws, const PipelineConfig& config) {
  WorkspaceLock lock(ws);
  const auto corpus = ws.load_corpus();
  const auto id = snapshot_id(corpus, config);
  if (ws.has(id)) return id;
  try {
    const auto snap = run_pipeline(corpus, config);
    ws.store(snap, utc_now());
    return snap.id;
  } catch (const PipelineError& e) {
    std::ofstream log(ws.root() / "failed_runs.log", std::ios::app);
    log << utc_now() << " " << id << " " << e.what() << "\n";
    for (const auto& line : e.log) log << "  " << line << "\n";
    throw;
  }
}

}  // namespace semcorpus
