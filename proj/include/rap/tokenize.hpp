#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rap {

// A word token with its character span [begin, end) in the source text.
struct Token {
  std::string text;
  size_t begin = 0;
  size_t end = 0;

  bool operator==(const Token &) const = default;
};

// Splits on whitespace and punctuation boundaries. Tokens are maximal runs
// of characters that are neither ASCII whitespace nor ASCII punctuation;
// bytes >= 0x80 (UTF-8 continuation/lead bytes) count as word characters.
// Punctuation is a separator, not a token. Original case and spans are kept.
std::vector<Token> tokenize(std::string_view text);

// Lowercased token strings, as used for lexicon lookup and for indexing
// and querying the reference store. Same segmentation as tokenize().
std::vector<std::string> term_tokens(std::string_view text);

// Maximal runs of non-whitespace characters. This is the token granularity
// of prompt masks; punctuation stays attached (e.g. "[SEP]" is one token).
std::vector<std::string> whitespace_tokens(std::string_view text);

std::string to_lower(std::string_view s);

} // namespace rap
