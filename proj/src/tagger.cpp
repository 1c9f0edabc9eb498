#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "semcorpus/common.hpp"
#include "semcorpus/text.hpp"
#include "semcorpus/topic_model.hpp"

namespace semcorpus {
namespace {

struct Entry {
  const char* lemma;
  Pos pos;
};

using Lexicon = std::map<std::string, Entry, std::less<>>;

const Lexicon& french() {
  static const Lexicon lex = {
      {"le", {"le", Pos::Determiner}},       {"la", {"le", Pos::Determiner}},
      {"les", {"le", Pos::Determiner}},      {"l", {"le", Pos::Determiner}},
      {"un", {"un", Pos::Determiner}},       {"une", {"un", Pos::Determiner}},
      {"des", {"un", Pos::Determiner}},      {"du", {"du", Pos::Determiner}},
      {"ce", {"ce", Pos::Determiner}},       {"cette", {"ce", Pos::Determiner}},
      {"ces", {"ce", Pos::Determiner}},      {"son", {"son", Pos::Determiner}},
      {"sa", {"son", Pos::Determiner}},      {"ses", {"son", Pos::Determiner}},
      {"leur", {"leur", Pos::Determiner}},   {"leurs", {"leur", Pos::Determiner}},
      {"est", {"être", Pos::Verb}},          {"sont", {"être", Pos::Verb}},
      {"être", {"être", Pos::Verb}},         {"était", {"être", Pos::Verb}},
      {"a", {"avoir", Pos::Verb}},           {"ont", {"avoir", Pos::Verb}},
      {"avoir", {"avoir", Pos::Verb}},       {"fait", {"faire", Pos::Verb}},
      {"font", {"faire", Pos::Verb}},        {"étudie", {"étudier", Pos::Verb}},
      {"étudient", {"étudier", Pos::Verb}},  {"analyse", {"analyser", Pos::Verb}},
      {"analysent", {"analyser", Pos::Verb}}, {"montre", {"montrer", Pos::Verb}},
      {"montrent", {"montrer", Pos::Verb}},  {"propose", {"proposer", Pos::Verb}},
      {"de", {"de", Pos::Preposition}},      {"d", {"de", Pos::Preposition}},
      {"à", {"à", Pos::Preposition}},        {"au", {"au", Pos::Preposition}},
      {"aux", {"au", Pos::Preposition}},     {"en", {"en", Pos::Preposition}},
      {"dans", {"dans", Pos::Preposition}},  {"par", {"par", Pos::Preposition}},
      {"pour", {"pour", Pos::Preposition}},  {"sur", {"sur", Pos::Preposition}},
      {"avec", {"avec", Pos::Preposition}},  {"entre", {"entre", Pos::Preposition}},
      {"et", {"et", Pos::Conjunction}},      {"ou", {"ou", Pos::Conjunction}},
      {"mais", {"mais", Pos::Conjunction}},  {"que", {"que", Pos::Conjunction}},
      {"il", {"il", Pos::Pronoun}},          {"elle", {"elle", Pos::Pronoun}},
      {"ils", {"il", Pos::Pronoun}},         {"nous", {"nous", Pos::Pronoun}},
      {"on", {"on", Pos::Pronoun}},          {"se", {"se", Pos::Pronoun}},
      {"qui", {"qui", Pos::Pronoun}},        {"très", {"très", Pos::Adverb}},
      {"plus", {"plus", Pos::Adverb}},       {"ne", {"ne", Pos::Adverb}},
      {"pas", {"pas", Pos::Adverb}},         {"urbain", {"urbain", Pos::Adjective}},
      {"urbaine", {"urbain", Pos::Adjective}}, {"urbains", {"urbain", Pos::Adjective}},
      {"urbaines", {"urbain", Pos::Adjective}}, {"grand", {"grand", Pos::Adjective}},
      {"grande", {"grand", Pos::Adjective}}, {"grands", {"grand", Pos::Adjective}},
      {"nouveau", {"nouveau", Pos::Adjective}}, {"nouvelle", {"nouveau", Pos::Adjective}},
      {"spatial", {"spatial", Pos::Adjective}}, {"spatiale", {"spatial", Pos::Adjective}},
      {"spatiaux", {"spatial", Pos::Adjective}}, {"géographique", {"géographique", Pos::Adjective}},
      {"géographiques", {"géographique", Pos::Adjective}}, {"social", {"social", Pos::Adjective}},
      {"sociale", {"social", Pos::Adjective}}, {"sociaux", {"social", Pos::Adjective}},
  };
  return lex;
}

const Lexicon& english() {
  static const Lexicon lex = {
      {"the", {"the", Pos::Determiner}},      {"a", {"a", Pos::Determiner}},
      {"an", {"a", Pos::Determiner}},         {"this", {"this", Pos::Determiner}},
      {"these", {"this", Pos::Determiner}},   {"that", {"that", Pos::Determiner}},
      {"those", {"that", Pos::Determiner}},   {"its", {"its", Pos::Determiner}},
      {"their", {"their", Pos::Determiner}},  {"is", {"be", Pos::Verb}},
      {"are", {"be", Pos::Verb}},             {"was", {"be", Pos::Verb}},
      {"were", {"be", Pos::Verb}},            {"be", {"be", Pos::Verb}},
      {"has", {"have", Pos::Verb}},           {"have", {"have", Pos::Verb}},
      {"had", {"have", Pos::Verb}},           {"studies", {"study", Pos::Verb}},
      {"study", {"study", Pos::Verb}},        {"shows", {"show", Pos::Verb}},
      {"show", {"show", Pos::Verb}},          {"analyses", {"analyse", Pos::Verb}},
      {"proposes", {"propose", Pos::Verb}},   {"uses", {"use", Pos::Verb}},
      {"of", {"of", Pos::Preposition}},       {"in", {"in", Pos::Preposition}},
      {"on", {"on", Pos::Preposition}},       {"for", {"for", Pos::Preposition}},
      {"with", {"with", Pos::Preposition}},   {"to", {"to", Pos::Preposition}},
      {"by", {"by", Pos::Preposition}},       {"from", {"from", Pos::Preposition}},
      {"between", {"between", Pos::Preposition}}, {"and", {"and", Pos::Conjunction}},
      {"or", {"or", Pos::Conjunction}},       {"but", {"but", Pos::Conjunction}},
      {"it", {"it", Pos::Pronoun}},           {"they", {"they", Pos::Pronoun}},
      {"we", {"we", Pos::Pronoun}},           {"which", {"which", Pos::Pronoun}},
      {"very", {"very", Pos::Adverb}},        {"not", {"not", Pos::Adverb}},
      {"also", {"also", Pos::Adverb}},        {"urban", {"urban", Pos::Adjective}},
      {"spatial", {"spatial", Pos::Adjective}}, {"large", {"large", Pos::Adjective}},
      {"new", {"new", Pos::Adjective}},       {"social", {"social", Pos::Adjective}},
      {"geographical", {"geographical", Pos::Adjective}},
  };
  return lex;
}

std::string singular(const std::string& w, const std::string& language) {
  if (w.size() <= 3) return w;
  if (language == "en") {
    if (w.ends_with("ies")) return w.substr(0, w.size() - 3) + "y";
    if (w.ends_with("ss")) return w;
    if (w.ends_with('s')) return w.substr(0, w.size() - 1);
    return w;
  }
  if (language == "fr") {
    if (w.ends_with("aux")) return w.substr(0, w.size() - 3) + "al";
    if (w.ends_with('s') || w.ends_with('x')) return w.substr(0, w.size() - 1);
  }
  return w;
}

}  // namespace

Pos parse_pos(const std::string& raw) {
  std::string tag = raw;
  for (auto& c : tag) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  const auto head = tag.substr(0, tag.find(':'));
  static const std::map<std::string, Pos> exact = {
      {"NOUN", Pos::Noun},        {"PROPN", Pos::Noun},        {"NOM", Pos::Noun},          {"NAM", Pos::Noun},
      {"DET", Pos::Determiner},   {"DT", Pos::Determiner},     {"PDT", Pos::Determiner},    {"WDT", Pos::Determiner},
      {"VERB", Pos::Verb},        {"AUX", Pos::Verb},          {"VER", Pos::Verb},          {"MD", Pos::Verb},
      {"ADJ", Pos::Adjective},    {"ADV", Pos::Adverb},        {"WRB", Pos::Adverb},        {"PRON", Pos::Pronoun},
      {"PRO", Pos::Pronoun},      {"WP", Pos::Pronoun},        {"ADP", Pos::Preposition},   {"PRP", Pos::Preposition},
      {"IN", Pos::Preposition},   {"TO", Pos::Preposition},    {"CONJ", Pos::Conjunction},  {"CCONJ", Pos::Conjunction},
      {"SCONJ", Pos::Conjunction}, {"KON", Pos::Conjunction},  {"CC", Pos::Conjunction},    {"NUM", Pos::Numeral},
      {"CD", Pos::Numeral},       {"PUNCT", Pos::Punctuation}, {"PUN", Pos::Punctuation},   {"SENT", Pos::Punctuation},
      {"X", Pos::Other},          {"SYM", Pos::Other},         {"INTJ", Pos::Other},        {"PART", Pos::Other},
      {"ABR", Pos::Other},        {"INT", Pos::Other},         {"FW", Pos::Other},          {"UH", Pos::Other},
      {"POS", Pos::Other},        {"RP", Pos::Other},          {"EX", Pos::Pronoun},
  };
  if (const auto it = exact.find(head); it != exact.end()) return it->second;
  // Penn-style prefixes: NN*, VB*, JJ*, RB*, PRP*
  if (tag.starts_with("NN")) return Pos::Noun;
  if (tag.starts_with("VB") || tag.starts_with("VV") || tag.starts_with("VH")) return Pos::Verb;
  if (tag.starts_with("JJ")) return Pos::Adjective;
  if (tag.starts_with("RB")) return Pos::Adverb;
  if (tag.starts_with("PP") || tag.starts_with("WP")) return Pos::Pronoun;
  throw InputError("unknown part-of-speech tag '" + raw + "'");
}

std::string pos_name(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "NOUN";
    case Pos::Determiner: return "DET";
    case Pos::Verb: return "VERB";
    case Pos::Adjective: return "ADJ";
    case Pos::Adverb: return "ADV";
    case Pos::Pronoun: return "PRON";
    case Pos::Preposition: return "ADP";
    case Pos::Conjunction: return "CONJ";
    case Pos::Numeral: return "NUM";
    case Pos::Punctuation: return "PUNCT";
    case Pos::Other: return "X";
  }
  return "X";
}

FallbackTagger::FallbackTagger(std::string language) : language_(std::move(language)) {}

Token FallbackTagger::tag(const std::string& word) const {
  const std::string w = text::utf8_lower(word);
  const Lexicon* lex = language_ == "fr" ? &french() : language_ == "en" ? &english() : nullptr;
  if (lex) {
    if (const auto it = lex->find(w); it != lex->end()) return {word, it->second.lemma, it->second.pos};
  }
  if (!w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return {word, w, Pos::Numeral};
  return {word, singular(w, language_), Pos::Noun};
}

std::vector<Token> FallbackTagger::tag_text(const std::string& body) const {
  std::vector<Token> out;
  for (const auto& w : text::tokenize(body)) {
    if (w.empty()) {
      out.push_back({".", ".", Pos::Punctuation});
      continue;
    }
    out.push_back(tag(w));
  }
  return out;
}

std::vector<std::vector<Token>> read_token_streams(const std::filesystem::path& path, const FallbackTagger& fallback) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open token stream " + path.string());
  std::vector<std::vector<Token>> docs(1);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!docs.back().empty()) docs.emplace_back();
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, '\t')) f.push_back(item);
    const auto where = path.string() + ":" + std::to_string(lineno);
    if (f.size() == 1) {
      docs.back().push_back(fallback.tag(f[0]));
    } else if (f.size() == 3) {
      if (f[1].empty()) throw InputError(where + ": empty lemma");
      try {
        docs.back().push_back({f[0], f[1], parse_pos(f[2])});
      } catch (const InputError& e) {
        throw InputError(where + ": " + e.what());
      }
    } else {
      throw InputError(where + ": expected surface<TAB>lemma<TAB>pos");
    }
  }
  if (docs.back().empty()) docs.pop_back();
  return docs;
}

std::vector<Token> read_fulltext(const std::string& ref, const FallbackTagger& fallback) {
  std::string path = ref;
  std::size_t index = 0;
  if (const auto hash = ref.rfind('#'); hash != std::string::npos) {
    path = ref.substr(0, hash);
    try {
      index = std::stoul(ref.substr(hash + 1));
    } catch (const std::exception&) {
      throw InputError("bad fulltext reference '" + ref + "'");
    }
  }
  const auto docs = read_token_streams(path, fallback);
  if (index >= docs.size())
    throw InputError("fulltext reference '" + ref + "': file holds " + std::to_string(docs.size()) + " documents");
  return docs[index];
}

}  // namespace semcorpus
