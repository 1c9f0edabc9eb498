#include <doctest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "semcorpus/common.hpp"
#include "semcorpus/corpus.hpp"
#include "semcorpus/csv.hpp"

using namespace semcorpus;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("csv reader handles quotes, doubled quotes and embedded newlines") {
  std::istringstream in("a,\"b,c\",\"say \"\"hi\"\"\"\n\"multi\nline\",x,\n");
  csv::Reader r(in);
  auto rec = r.next();
  REQUIRE(rec);
  CHECK(rec->fields == std::vector<std::string>{"a", "b,c", "say \"hi\""});
  rec = r.next();
  REQUIRE(rec);
  CHECK(rec->line == 2);
  CHECK(rec->fields == std::vector<std::string>{"multi\nline", "x", ""});
  CHECK_FALSE(r.next());

  std::istringstream bad("\"never closed\n");
  csv::Reader rb(bad);
  CHECK_THROWS_AS(rb.next(), InputError);
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,\"b\"") == "\"a,\"\"b\"\"\"");
}

TEST_CASE("load_corpus on the 10-article fixture") {
  const auto c = load_corpus(fixtures::data("articles10.csv"), fixtures::data("citations10.csv"));
  CHECK(c.articles().size() == 10);
  CHECK(c.find("a03")->authoring_countries == std::vector<std::string>{"GB", "FR"});
  CHECK(c.find("a03")->abstract == "An abstract, with a comma");
  CHECK(c.find("a04")->studied_countries.empty());
  CHECK(c.find("a01")->keywords == std::vector<std::string>{"ville", "réseau urbain", "modèle"});
  CHECK(c.citations().size() == 7);
  CHECK(c.provenance().sources.size() == 2);
  CHECK(c.provenance().sources[0].sha256.size() == 64);
}

TEST_CASE("corpus_stats equals a line-count oracle over the fixture files") {
  const auto c = load_corpus(fixtures::data("articles10.csv"), fixtures::data("citations10.csv"));
  const auto s = corpus_stats(c);

  // oracle: plain line splitting (the fixture's only quoted field sits in the abstract column, after all counted ones)
  std::ifstream in(fixtures::data("articles10.csv"));
  std::string line;
  std::getline(in, line);
  std::size_t articles = 0;
  std::map<int, std::size_t> per_year;
  std::set<std::string> authoring, studied, ids;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    ++articles;
    ids.insert(f[0]);
    ++per_year[std::stoi(f[1])];
    for (const auto& x : split(f[4], '|')) authoring.insert(x);
    for (const auto& x : split(f[5], '|'))
      if (!x.empty()) studied.insert(x);
  }
  std::ifstream cin(fixtures::data("citations10.csv"));
  std::getline(cin, line);
  std::size_t records = 0, received = 0, made = 0;
  std::map<int, std::size_t> by_depth;
  while (std::getline(cin, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    ++records;
    ++by_depth[std::stoi(f[2])];
    received += ids.contains(f[1]);
    made += ids.contains(f[0]);
  }

  CHECK(s.article_count == articles);
  CHECK(s.authoring_country_count == authoring.size());
  CHECK(s.studied_country_count == studied.size());
  CHECK(s.citation_records == records);
  CHECK(s.citations_by_depth == by_depth);
  CHECK(s.citations_received == received);
  CHECK(s.citations_made == made);
  CHECK(s.articles_per_year == per_year);

  std::size_t sum = 0;
  for (const auto& [_, n] : s.articles_per_year) sum += n;
  CHECK(sum == s.article_count);
}

TEST_CASE("corpus_stats of a single article without citations") {
  const auto c = fixtures::corpus({fixtures::article("only", {"a"})});
  const auto s = corpus_stats(c);
  CHECK(s.article_count == 1);
  CHECK(s.citation_records == 0);
  CHECK(s.citations_received == 0);
  CHECK(s.citations_made == 0);
  CHECK(s.citations_by_depth.empty());
}

TEST_CASE("load_corpus error paths") {
  SUBCASE("empty articles file") {
    CHECK_THROWS_WITH_AS(load_corpus(fixtures::data("empty.csv")), doctest::Contains("no articles"), InputError);
  }
  SUBCASE("duplicate id is listed") {
    CHECK_THROWS_WITH_AS(load_corpus(fixtures::data("dup.csv")), doctest::Contains("duplicate article ids: p1"),
                         InputError);
  }
  SUBCASE("malformed row names file, line and field") {
    try {
      load_corpus(fixtures::data("badrow.csv"));
      FAIL("expected an error");
    } catch (const InputError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("badrow.csv:3") != std::string::npos);
      CHECK(msg.find("'year'") != std::string::npos);
    }
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_corpus(fixtures::data("nope.csv")), InputError); }
  SUBCASE("wrong field count") {
    fixtures::TempDir tmp;
    const auto p = tmp.write("a.csv",
                             "id,year,language,keywords,authoring_countries,studied_countries,abstract,fulltext_ref\n"
                             "x,2000,fr,a,FR\n");
    CHECK_THROWS_WITH_AS(load_corpus(p), doctest::Contains("a.csv:2"), InputError);
  }
  SUBCASE("bad country shape") {
    fixtures::TempDir tmp;
    const auto p = tmp.write("a.csv",
                             "id,year,language,keywords,authoring_countries,studied_countries,abstract,fulltext_ref\n"
                             "x,2000,fr,a,FRA,,,\n");
    CHECK_THROWS_WITH_AS(load_corpus(p), doctest::Contains("authoring_countries"), InputError);
  }
  SUBCASE("self citation and duplicate citation") {
    fixtures::TempDir tmp;
    const auto a = tmp.write("a.csv",
                             "id,year,language,keywords,authoring_countries,studied_countries,abstract,fulltext_ref\n"
                             "x,2000,fr,a,FR,,,\n");
    const auto c1 = tmp.write("c1.csv", "citing_id,cited_id,depth,abstract\nx,x,1,\n");
    CHECK_THROWS_WITH_AS(load_corpus(a, c1), doctest::Contains("self-citation"), InputError);
    const auto c2 = tmp.write("c2.csv", "citing_id,cited_id,depth,abstract\ny,x,1,\ny,x,1,\n");
    CHECK_THROWS_WITH_AS(load_corpus(a, c2), doctest::Contains("duplicate citation"), InputError);
    const auto c3 = tmp.write("c3.csv", "citing_id,cited_id,depth,abstract\ny,x,3,\n");
    CHECK_THROWS_WITH_AS(load_corpus(a, c3), doctest::Contains("depth"), InputError);
  }
}

TEST_CASE("normalization: keywords lowercased and trimmed, countries uppercased, unknown codes warned") {
  const auto c = load_corpus(fixtures::data("messy.csv"));
  const auto& a = c.articles()[0];
  CHECK(a.language == "fr");
  CHECK(a.keywords == std::vector<std::string>{"ville", "modèle"});
  CHECK(a.authoring_countries == std::vector<std::string>{"FR", "BE"});
  CHECK(a.studied_countries == std::vector<std::string>{"XK"});
  REQUIRE(c.provenance().warnings.size() == 1);
  CHECK(c.provenance().warnings[0].find("XK") != std::string::npos);
}

TEST_CASE("snapshot round trip reproduces the corpus field for field") {
  const auto c = load_corpus(fixtures::data("articles10.csv"), fixtures::data("citations10.csv"));
  const auto j = corpus_to_json(c);
  CHECK(j.at("format_version") == 1);
  const auto back = corpus_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back == c);
  CHECK(corpus_to_json(back).dump() == j.dump());
  CHECK(back.content_digest() == c.content_digest());

  auto wrong = j;
  wrong["format_version"] = 2;
  CHECK_THROWS_AS(corpus_from_json(wrong), InputError);
}

TEST_CASE("geo_flow_matrix: reciprocity and multi-tag articles") {
  SUBCASE("FR->VN and VN->FR are reciprocal") {
    const auto c = fixtures::corpus({fixtures::article("1", {"a"}, {"FR"}, {"VN"}),
                                     fixtures::article("2", {"a"}, {"VN"}, {"FR"})});
    const auto m = geo_flow_matrix(c);
    CHECK(m.at("FR", "VN") == 1);
    CHECK(m.at("VN", "FR") == 1);
    CHECK(m.reciprocal("FR", "VN"));
    CHECK(m.reciprocal("VN", "FR"));
  }
  SUBCASE("authoring {FR, BE} studied {SN}") {
    const auto c = fixtures::corpus({fixtures::article("1", {"a"}, {"FR", "BE"}, {"SN"})});
    const auto m = geo_flow_matrix(c);
    CHECK(m.at("FR", "SN") == 1);
    CHECK(m.at("BE", "SN") == 1);
    CHECK(m.total() == 2);
    CHECK_FALSE(m.reciprocal("FR", "SN"));
  }
  SUBCASE("articles without studied countries do not flow") {
    const auto c = fixtures::corpus({fixtures::article("1", {"a"}, {"FR"}, {})});
    CHECK(geo_flow_matrix(c).total() == 0);
  }
}

TEST_CASE("geo_flow_matrix on a 20-article random fixture equals a nested-loop oracle") {
  const std::vector<std::string> pool = {"FR", "DE", "VN", "SN", "BR", "US", "GB"};
  Rng rng(42);
  std::vector<Article> arts;
  for (int i = 0; i < 20; ++i) {
    auto pick = [&](std::size_t max) {
      std::vector<std::string> v;
      const std::size_t n = rng.below(max + 1);
      for (std::size_t k = 0; k < n; ++k) {
        const auto& c = pool[rng.below(pool.size())];
        if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(c);
      }
      return v;
    };
    auto auth = pick(3);
    if (auth.empty()) auth.push_back("FR");
    arts.push_back(fixtures::article("a" + std::to_string(i), {"k"}, auth, pick(3)));
  }
  const auto c = fixtures::corpus(arts);
  const auto m = geo_flow_matrix(c);

  std::size_t expected_total = 0;
  for (const auto& o : pool)
    for (const auto& s : pool) {
      std::size_t n = 0;
      for (const auto& a : arts) {
        const bool has_o = std::find(a.authoring_countries.begin(), a.authoring_countries.end(), o) !=
                           a.authoring_countries.end();
        const bool has_s =
            std::find(a.studied_countries.begin(), a.studied_countries.end(), s) != a.studied_countries.end();
        n += has_o && has_s;
      }
      CHECK(m.at(o, s) == n);
    }
  for (const auto& a : arts) expected_total += a.authoring_countries.size() * a.studied_countries.size();
  CHECK(m.total() == expected_total);
}
