#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace semcorpus::text {

/// Lowercases ASCII plus the Latin-1 Supplement and Latin Extended-A
/// uppercase letters; other code points pass through unchanged.
std::string utf8_lower(std::string_view s);

/// Lowercased word tokens. Punctuation and whitespace separate tokens; a
/// boundary marker (empty string) is emitted where punctuation occurred so
/// callers can avoid n-grams that span sentence breaks. Apostrophes and
/// hyphens inside a word split it.
std::vector<std::string> tokenize(std::string_view s);

/// Bundled stop-word list for a 2-letter language code (en, fr; others empty).
bool is_stopword(std::string_view word, std::string_view language);

}  // namespace semcorpus::text
