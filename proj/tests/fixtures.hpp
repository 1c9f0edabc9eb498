#pragma once

// Shared helpers for building in-memory corpora and temp files in tests.

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "semcorpus/corpus.hpp"

namespace fixtures {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(SEMCORPUS_TEST_DATA) / name; }

inline semcorpus::Article article(std::string id, std::vector<std::string> keywords,
                                  std::vector<std::string> authoring = {"FR"},
                                  std::vector<std::string> studied = {}, int year = 2000) {
  semcorpus::Article a;
  a.id = std::move(id);
  a.year = year;
  a.language = "fr";
  a.keywords = std::move(keywords);
  a.authoring_countries = std::move(authoring);
  a.studied_countries = std::move(studied);
  return a;
}

inline semcorpus::Corpus corpus(std::vector<semcorpus::Article> articles,
                                std::vector<semcorpus::CitationRecord> citations = {}) {
  return semcorpus::Corpus(std::move(articles), std::move(citations), {});
}

/// Temporary directory removed on scope exit.
class TempDir {
public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("semcorpus_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p) << content;
    return p;
  }

private:
  std::filesystem::path path_;
};

}  // namespace fixtures
