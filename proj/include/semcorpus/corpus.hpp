#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace semcorpus {

struct Article {
  std::string id;
  int year = 0;
  std::string language;
  std::vector<std::string> keywords;
  std::vector<std::string> authoring_countries;
  std::vector<std::string> studied_countries;
  std::optional<std::string> abstract;
  std::optional<std::string> fulltext_ref;

  bool operator==(const Article&) const = default;
};

struct CitationRecord {
  std::string citing_id;
  std::string cited_id;
  int depth = 1;
  std::optional<std::string> abstract;

  bool operator==(const CitationRecord&) const = default;
};

struct SourceFile {
  std::string path;
  std::string sha256;
  bool operator==(const SourceFile&) const = default;
};

struct Provenance {
  std::vector<SourceFile> sources;
  std::string ingested_at;  // ISO-8601 UTC
  std::vector<std::string> warnings;
  bool operator==(const Provenance&) const = default;
};

/// Immutable after construction. Articles keep their file order.
class Corpus {
public:
  Corpus() = default;
  /// Validates invariants; throws InputError on violation.
  Corpus(std::vector<Article> articles, std::vector<CitationRecord> citations, Provenance provenance);

  const std::vector<Article>& articles() const { return articles_; }
  const std::vector<CitationRecord>& citations() const { return citations_; }
  const Provenance& provenance() const { return provenance_; }

  const Article* find(const std::string& id) const;
  bool is_seed(const std::string& id) const { return index_.contains(id); }

  /// Digest over source digests only; independent of ingestion time.
  std::string content_digest() const;

  bool operator==(const Corpus& o) const {
    return articles_ == o.articles_ && citations_ == o.citations_ && provenance_ == o.provenance_;
  }

private:
  std::vector<Article> articles_;
  std::vector<CitationRecord> citations_;
  Provenance provenance_;
  std::unordered_map<std::string, std::size_t> index_;
};

std::string normalize_keyword(const std::string& raw);
std::string normalize_country(const std::string& raw);

/// Reads the articles CSV and, optionally, the citations CSV.
Corpus load_corpus(const std::filesystem::path& articles_path,
                   const std::optional<std::filesystem::path>& citations_path = std::nullopt);

constexpr int kCorpusFormatVersion = 1;

nlohmann::json corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(const nlohmann::json& j);

struct CorpusStats {
  std::size_t article_count = 0;
  std::size_t authoring_country_count = 0;
  std::size_t studied_country_count = 0;
  std::size_t citation_records = 0;
  std::map<int, std::size_t> citations_by_depth;
  std::size_t citations_received = 0;  // records whose cited_id is a corpus article
  std::size_t citations_made = 0;      // records whose citing_id is a corpus article
  std::map<int, std::size_t> articles_per_year;
};

CorpusStats corpus_stats(const Corpus& corpus);
nlohmann::json to_json(const CorpusStats& stats);

struct GeoFlowMatrix {
  std::vector<std::string> countries;  // sorted union of all tags taking part in a flow
  std::map<std::pair<std::string, std::string>, std::size_t> counts;  // (origin, studied) -> articles

  std::size_t at(const std::string& origin, const std::string& studied) const;
  bool reciprocal(const std::string& origin, const std::string& studied) const;
  std::size_t total() const;
};

GeoFlowMatrix geo_flow_matrix(const Corpus& corpus);
nlohmann::json to_json(const GeoFlowMatrix& flows);

}  // namespace semcorpus
