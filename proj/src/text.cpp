#include "semcorpus/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace semcorpus::text {
namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

/// Decodes one code point; invalid bytes are returned as themselves.
std::uint32_t decode(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0 && cont(1) >= 0) {
    const std::uint32_t cp = ((b0 & 0x1F) << 6) | static_cast<std::uint32_t>(cont(1));
    i += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) >= 0 && cont(2) >= 0) {
    const std::uint32_t cp = ((b0 & 0x0F) << 12) | (static_cast<std::uint32_t>(cont(1)) << 6) |
                             static_cast<std::uint32_t>(cont(2));
    i += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) >= 0 && cont(2) >= 0 && cont(3) >= 0) {
    const std::uint32_t cp = ((b0 & 0x07) << 18) | (static_cast<std::uint32_t>(cont(1)) << 12) |
                             (static_cast<std::uint32_t>(cont(2)) << 6) | static_cast<std::uint32_t>(cont(3));
    i += 4;
    return cp;
  }
  ++i;
  return b0;
}

std::uint32_t lower(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x139 && cp <= 0x148 && cp % 2 == 1) return cp + 1;
  if (cp >= 0x14A && cp <= 0x177 && cp % 2 == 0) return cp + 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E && cp % 2 == 1) return cp + 1;
  return cp;
}

bool is_word_char(std::uint32_t cp) {
  if (cp >= 'a' && cp <= 'z') return true;
  if (cp >= 'A' && cp <= 'Z') return true;
  if (cp >= '0' && cp <= '9') return true;
  // letters above ASCII; excludes Latin-1 punctuation and symbols
  if (cp >= 0xC0 && cp != 0xD7 && cp != 0xF7 && !(cp >= 0x2000 && cp <= 0x206F)) return true;
  return false;
}

bool is_space(std::uint32_t cp) { return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0xA0; }

bool is_intraword_break(std::uint32_t cp) { return cp == '\'' || cp == '-' || cp == 0x2019; }

// Kept sorted for binary search.
constexpr std::array<std::string_view, 120> kEnglish = {
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any", "are", "as",
    "at", "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can", "could",
    "did", "do", "does", "doing", "down", "during", "each", "few", "for", "from", "further", "had", "has",
    "have", "having", "he", "her", "here", "hers", "him", "his", "how", "however", "i", "if", "in", "into",
    "is", "it", "its", "itself", "may", "more", "most", "much", "must", "my", "no", "nor", "not", "of", "off",
    "on", "once", "one", "only", "or", "other", "our", "out", "over", "own", "s", "same", "she", "should",
    "so", "some", "such", "than", "that", "the", "their", "them", "then", "there", "these", "they", "this",
    "those", "through", "thus", "to", "too", "two", "under", "until", "up", "upon", "very", "was", "we",
    "were", "what", "when", "where", "which", "while", "who", "why", "will", "with", "within"};

constexpr std::array<std::string_view, 102> kFrench = {
    "a", "afin", "ai", "ainsi", "alors", "au", "aucun", "aussi", "autre", "aux", "avec", "avoir", "c", "ce",
    "ceci", "cela", "celle", "celles", "celui", "ces", "cet", "cette", "ceux", "chaque", "comme", "d", "dans",
    "de", "depuis", "des", "donc", "dont", "du", "elle", "elles", "en", "entre", "est", "et", "etc", "eux",
    "fait", "il", "ils", "j", "je", "l", "la", "le", "les", "leur", "leurs", "lors", "lui", "m", "mais", "me",
    "même", "mêmes", "n", "ne", "ni", "nos", "notre", "nous", "on", "ont", "ou", "où", "par", "parmi", "pas",
    "peu", "plus", "pour", "qu", "que", "quel", "quelle", "qui", "s", "sa", "sans", "se", "selon", "ses",
    "si", "son", "sont", "sous", "sur", "t", "ta", "te", "tous", "tout", "toute", "toutes", "un", "une", "y",
    "être"};

}  // namespace

std::string utf8_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) append_utf8(out, lower(decode(s, i)));
  return out;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  auto boundary = [&] {
    flush();
    if (!out.empty() && !out.back().empty()) out.emplace_back();
  };
  std::size_t i = 0;
  while (i < s.size()) {
    const std::uint32_t cp = decode(s, i);
    if (is_word_char(cp)) {
      append_utf8(cur, lower(cp));
    } else if (is_space(cp) || is_intraword_break(cp)) {
      flush();
    } else {
      boundary();
    }
  }
  flush();
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

bool is_stopword(std::string_view word, std::string_view language) {
  if (language == "en") return std::binary_search(kEnglish.begin(), kEnglish.end(), word);
  if (language == "fr") return std::binary_search(kFrench.begin(), kFrench.end(), word);
  return false;
}

}  // namespace semcorpus::text
