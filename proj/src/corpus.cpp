#include "semcorpus/corpus.hpp"

#include <algorithm>
#include <cctype>
#include "semcorpus/text.hpp"
#include <chrono>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "semcorpus/common.hpp"
#include "semcorpus/country_codes.hpp"
#include "semcorpus/csv.hpp"
#include "semcorpus/digest.hpp"

namespace semcorpus {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, '|')) out.push_back(item);
  return out;
}

template <class T>
void dedupe_keep_order(std::vector<T>& v) {
  std::set<T> seen;
  std::vector<T> out;
  for (auto& x : v)
    if (seen.insert(x).second) out.push_back(std::move(x));
  v = std::move(out);
}

int current_year() {
  const auto now = std::chrono::system_clock::now();
  const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(now)};
  return static_cast<int>(ymd.year());
}

std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const auto days = std::chrono::floor<std::chrono::days>(now);
  const std::chrono::year_month_day ymd{days};
  const std::chrono::hh_mm_ss hms{now - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

[[noreturn]] void fail_row(const std::filesystem::path& file, std::size_t line, const std::string& field,
                           const std::string& what) {
  throw InputError(file.string() + ":" + std::to_string(line) + ": field '" + field + "': " + what);
}

/// Maps header names to column positions and checks required columns.
class Header {
public:
  Header(const csv::Record& rec, const std::filesystem::path& file, const std::vector<std::string>& required,
         const std::vector<std::string>& optional) {
    for (std::size_t i = 0; i < rec.fields.size(); ++i) pos_[trim(rec.fields[i])] = i;
    for (const auto& r : required)
      if (!pos_.contains(r)) throw InputError(file.string() + ":1: missing column '" + r + "'");
    for (const auto& [name, _] : pos_) {
      if (std::find(required.begin(), required.end(), name) == required.end() &&
          std::find(optional.begin(), optional.end(), name) == optional.end())
        throw InputError(file.string() + ":1: unexpected column '" + name + "'");
    }
    width_ = rec.fields.size();
  }

  std::size_t width() const { return width_; }

  std::optional<std::string> get(const csv::Record& rec, const std::string& name) const {
    const auto it = pos_.find(name);
    if (it == pos_.end()) return std::nullopt;
    return rec.fields[it->second];
  }

private:
  std::map<std::string, std::size_t> pos_;
  std::size_t width_ = 0;
};

int parse_int(const std::string& s, const std::filesystem::path& file, std::size_t line, const std::string& field) {
  const std::string t = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    fail_row(file, line, field, "expected an integer, got '" + s + "'");
  return v;
}

std::vector<std::string> parse_countries(const std::string& raw, const std::filesystem::path& file,
                                         std::size_t line, const std::string& field,
                                         std::vector<std::string>& warnings) {
  std::vector<std::string> out;
  for (const auto& item : split_list(raw)) {
    std::string code = normalize_country(item);
    if (code.empty()) continue;
    if (!is_country_code_shape(code)) fail_row(file, line, field, "'" + item + "' is not a 2-letter country code");
    if (!is_iso_country(code))
      warnings.push_back(file.string() + ":" + std::to_string(line) + ": unknown country code " + code);
    out.push_back(std::move(code));
  }
  dedupe_keep_order(out);
  return out;
}

std::optional<std::string> nonempty(const std::optional<std::string>& s) {
  if (!s || trim(*s).empty()) return std::nullopt;
  return s;
}

void validate_article(const Article& a, int max_year) {
  if (a.id.empty()) throw InputError("article with empty id");
  if (a.year < 1900 || a.year > max_year)
    throw InputError("article " + a.id + ": year " + std::to_string(a.year) + " outside [1900, " +
                     std::to_string(max_year) + "]");
  if (a.language.size() != 2 || !std::islower(static_cast<unsigned char>(a.language[0])) ||
      !std::islower(static_cast<unsigned char>(a.language[1])))
    throw InputError("article " + a.id + ": language '" + a.language + "' is not a 2-letter lowercase code");
  for (const auto& k : a.keywords)
    if (k.empty() || k != normalize_keyword(k)) throw InputError("article " + a.id + ": keyword '" + k + "' not normalized");
  for (const auto* list : {&a.authoring_countries, &a.studied_countries})
    for (const auto& c : *list)
      if (!is_country_code_shape(c)) throw InputError("article " + a.id + ": bad country code '" + c + "'");
}

}  // namespace

std::string normalize_keyword(const std::string& raw) { return text::utf8_lower(trim(raw)); }

std::string normalize_country(const std::string& raw) {
  std::string s = trim(raw);
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

Corpus::Corpus(std::vector<Article> articles, std::vector<CitationRecord> citations, Provenance provenance)
    : articles_(std::move(articles)), citations_(std::move(citations)), provenance_(std::move(provenance)) {
  if (articles_.empty()) throw InputError("no articles");
  const int max_year = current_year();
  std::set<std::string> dups;
  for (std::size_t i = 0; i < articles_.size(); ++i) {
    validate_article(articles_[i], max_year);
    if (!index_.emplace(articles_[i].id, i).second) dups.insert(articles_[i].id);
  }
  if (!dups.empty()) {
    std::string msg = "duplicate article ids:";
    for (const auto& d : dups) msg += " " + d;
    throw InputError(msg);
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& c : citations_) {
    if (c.citing_id.empty() || c.cited_id.empty()) throw InputError("citation with empty endpoint");
    if (c.citing_id == c.cited_id) throw InputError("self-citation " + c.citing_id);
    if (c.depth != 1 && c.depth != 2)
      throw InputError("citation " + c.citing_id + "->" + c.cited_id + ": depth must be 1 or 2");
    if (!pairs.emplace(c.citing_id, c.cited_id).second)
      throw InputError("duplicate citation " + c.citing_id + "->" + c.cited_id);
  }
}

const Article* Corpus::find(const std::string& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &articles_[it->second];
}

std::string Corpus::content_digest() const {
  std::string acc;
  for (const auto& s : provenance_.sources) acc += s.sha256 + "\n";
  if (provenance_.sources.empty()) acc = corpus_to_json(*this).dump();
  return sha256_hex(acc);
}

Corpus load_corpus(const std::filesystem::path& articles_path,
                   const std::optional<std::filesystem::path>& citations_path) {
  std::ifstream in(articles_path);
  if (!in) throw InputError("cannot open " + articles_path.string());
  Provenance prov;
  prov.sources.push_back({articles_path.string(), sha256_file(articles_path)});

  csv::Reader reader(in);
  const auto head = reader.next();
  if (!head) throw InputError(articles_path.string() + ": no articles");
  const Header header(*head, articles_path,
                      {"id", "year", "language", "keywords", "authoring_countries", "studied_countries"},
                      {"abstract", "fulltext_ref"});

  const int max_year = current_year();
  std::vector<Article> articles;
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && trim(rec->fields[0]).empty()) continue;
    if (rec->fields.size() != header.width())
      fail_row(articles_path, rec->line, "*",
               "expected " + std::to_string(header.width()) + " fields, got " + std::to_string(rec->fields.size()));
    Article a;
    a.id = trim(*header.get(*rec, "id"));
    if (a.id.empty()) fail_row(articles_path, rec->line, "id", "empty id");
    a.year = parse_int(*header.get(*rec, "year"), articles_path, rec->line, "year");
    if (a.year < 1900 || a.year > max_year) fail_row(articles_path, rec->line, "year", "out of range");
    a.language = normalize_keyword(*header.get(*rec, "language"));
    if (a.language.size() != 2 || !std::isalpha(static_cast<unsigned char>(a.language[0])) ||
        !std::isalpha(static_cast<unsigned char>(a.language[1])))
      fail_row(articles_path, rec->line, "language", "expected a 2-letter code");
    for (const auto& k : split_list(*header.get(*rec, "keywords"))) {
      auto n = normalize_keyword(k);
      if (!n.empty()) a.keywords.push_back(std::move(n));
    }
    dedupe_keep_order(a.keywords);
    a.authoring_countries = parse_countries(*header.get(*rec, "authoring_countries"), articles_path, rec->line,
                                            "authoring_countries", prov.warnings);
    a.studied_countries = parse_countries(*header.get(*rec, "studied_countries"), articles_path, rec->line,
                                          "studied_countries", prov.warnings);
    a.abstract = nonempty(header.get(*rec, "abstract"));
    a.fulltext_ref = nonempty(header.get(*rec, "fulltext_ref"));
    if (a.fulltext_ref) {
      // relative references are resolved against the articles file
      std::filesystem::path p(*a.fulltext_ref);
      if (p.is_relative()) a.fulltext_ref = (articles_path.parent_path() / p).lexically_normal().string();
    }
    articles.push_back(std::move(a));
  }
  if (articles.empty()) throw InputError(articles_path.string() + ": no articles");

  std::vector<CitationRecord> citations;
  if (citations_path) {
    std::ifstream cin(*citations_path);
    if (!cin) throw InputError("cannot open " + citations_path->string());
    prov.sources.push_back({citations_path->string(), sha256_file(*citations_path)});
    csv::Reader creader(cin);
    const auto chead = creader.next();
    if (chead) {
      const Header ch(*chead, *citations_path, {"citing_id", "cited_id", "depth"}, {"abstract"});
      while (auto rec = creader.next()) {
        if (rec->fields.size() == 1 && trim(rec->fields[0]).empty()) continue;
        if (rec->fields.size() != ch.width())
          fail_row(*citations_path, rec->line, "*",
                   "expected " + std::to_string(ch.width()) + " fields, got " + std::to_string(rec->fields.size()));
        CitationRecord c;
        c.citing_id = trim(*ch.get(*rec, "citing_id"));
        c.cited_id = trim(*ch.get(*rec, "cited_id"));
        if (c.citing_id.empty()) fail_row(*citations_path, rec->line, "citing_id", "empty");
        if (c.cited_id.empty()) fail_row(*citations_path, rec->line, "cited_id", "empty");
        c.depth = parse_int(*ch.get(*rec, "depth"), *citations_path, rec->line, "depth");
        if (c.depth != 1 && c.depth != 2) fail_row(*citations_path, rec->line, "depth", "must be 1 or 2");
        c.abstract = nonempty(ch.get(*rec, "abstract"));
        citations.push_back(std::move(c));
      }
    }
  }
  prov.ingested_at = utc_timestamp();
  return Corpus(std::move(articles), std::move(citations), std::move(prov));
}

// --- snapshot -------------------------------------------------------------

namespace {

nlohmann::json opt_json(const std::optional<std::string>& s) { return s ? nlohmann::json(*s) : nlohmann::json(); }

std::optional<std::string> opt_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

nlohmann::json corpus_to_json(const Corpus& corpus) {
  nlohmann::json j;
  j["format_version"] = kCorpusFormatVersion;
  auto& arts = j["articles"] = nlohmann::json::array();
  for (const auto& a : corpus.articles()) {
    arts.push_back({{"id", a.id},
                    {"year", a.year},
                    {"language", a.language},
                    {"keywords", a.keywords},
                    {"authoring_countries", a.authoring_countries},
                    {"studied_countries", a.studied_countries},
                    {"abstract", opt_json(a.abstract)},
                    {"fulltext_ref", opt_json(a.fulltext_ref)}});
  }
  auto& cits = j["citations"] = nlohmann::json::array();
  for (const auto& c : corpus.citations())
    cits.push_back({{"citing_id", c.citing_id}, {"cited_id", c.cited_id}, {"depth", c.depth},
                    {"abstract", opt_json(c.abstract)}});
  auto& prov = j["provenance"];
  prov["sources"] = nlohmann::json::array();
  for (const auto& s : corpus.provenance().sources) prov["sources"].push_back({{"path", s.path}, {"sha256", s.sha256}});
  prov["ingested_at"] = corpus.provenance().ingested_at;
  prov["warnings"] = corpus.provenance().warnings;
  return j;
}

Corpus corpus_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kCorpusFormatVersion)
      throw InputError("unsupported corpus format_version " + j.at("format_version").dump());
    std::vector<Article> articles;
    for (const auto& a : j.at("articles")) {
      Article x;
      x.id = a.at("id").get<std::string>();
      x.year = a.at("year").get<int>();
      x.language = a.at("language").get<std::string>();
      x.keywords = a.at("keywords").get<std::vector<std::string>>();
      x.authoring_countries = a.at("authoring_countries").get<std::vector<std::string>>();
      x.studied_countries = a.at("studied_countries").get<std::vector<std::string>>();
      x.abstract = opt_from(a, "abstract");
      x.fulltext_ref = opt_from(a, "fulltext_ref");
      articles.push_back(std::move(x));
    }
    std::vector<CitationRecord> citations;
    for (const auto& c : j.at("citations"))
      citations.push_back({c.at("citing_id").get<std::string>(), c.at("cited_id").get<std::string>(),
                           c.at("depth").get<int>(), opt_from(c, "abstract")});
    Provenance prov;
    const auto& p = j.at("provenance");
    for (const auto& s : p.at("sources")) prov.sources.push_back({s.at("path"), s.at("sha256")});
    prov.ingested_at = p.at("ingested_at").get<std::string>();
    prov.warnings = p.at("warnings").get<std::vector<std::string>>();
    return Corpus(std::move(articles), std::move(citations), std::move(prov));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("corpus snapshot: ") + e.what());
  }
}

// --- statistics ------------------------------------------------------------

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  s.article_count = corpus.articles().size();
  std::set<std::string> authoring, studied;
  for (const auto& a : corpus.articles()) {
    authoring.insert(a.authoring_countries.begin(), a.authoring_countries.end());
    studied.insert(a.studied_countries.begin(), a.studied_countries.end());
    ++s.articles_per_year[a.year];
  }
  s.authoring_country_count = authoring.size();
  s.studied_country_count = studied.size();
  s.citation_records = corpus.citations().size();
  for (const auto& c : corpus.citations()) {
    ++s.citations_by_depth[c.depth];
    if (corpus.is_seed(c.cited_id)) ++s.citations_received;
    if (corpus.is_seed(c.citing_id)) ++s.citations_made;
  }
  return s;
}

nlohmann::json to_json(const CorpusStats& s) {
  nlohmann::json per_year = nlohmann::json::object();
  for (const auto& [y, n] : s.articles_per_year) per_year[std::to_string(y)] = n;
  nlohmann::json by_depth = nlohmann::json::object();
  for (const auto& [d, n] : s.citations_by_depth) by_depth[std::to_string(d)] = n;
  return {{"article_count", s.article_count},
          {"authoring_country_count", s.authoring_country_count},
          {"studied_country_count", s.studied_country_count},
          {"citation_records", s.citation_records},
          {"citations_by_depth", by_depth},
          {"citations_received", s.citations_received},
          {"citations_made", s.citations_made},
          {"articles_per_year", per_year}};
}

// --- geography flows -------------------------------------------------------

std::size_t GeoFlowMatrix::at(const std::string& origin, const std::string& studied) const {
  const auto it = counts.find({origin, studied});
  return it == counts.end() ? 0 : it->second;
}

bool GeoFlowMatrix::reciprocal(const std::string& origin, const std::string& studied) const {
  return at(origin, studied) > 0 && at(studied, origin) > 0;
}

std::size_t GeoFlowMatrix::total() const {
  std::size_t t = 0;
  for (const auto& [_, n] : counts) t += n;
  return t;
}

GeoFlowMatrix geo_flow_matrix(const Corpus& corpus) {
  GeoFlowMatrix m;
  std::set<std::string> countries;
  for (const auto& a : corpus.articles()) {
    if (a.studied_countries.empty()) continue;
    for (const auto& o : a.authoring_countries) {
      countries.insert(o);
      for (const auto& s : a.studied_countries) {
        countries.insert(s);
        ++m.counts[{o, s}];
      }
    }
  }
  m.countries.assign(countries.begin(), countries.end());
  return m;
}

nlohmann::json to_json(const GeoFlowMatrix& m) {
  nlohmann::json flows = nlohmann::json::array();
  for (const auto& [key, n] : m.counts)
    flows.push_back({{"origin", key.first}, {"studied", key.second}, {"count", n},
                     {"reciprocal", m.reciprocal(key.first, key.second)}});
  return {{"countries", m.countries}, {"flows", flows}};
}

}  // namespace semcorpus
