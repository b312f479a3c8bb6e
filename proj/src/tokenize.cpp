#include "rap/tokenize.hpp"

#include <cctype>

namespace rap {

namespace {

inline bool is_space(unsigned char c) { return std::isspace(c) != 0; }

inline bool is_word_char(unsigned char c) {
  if (c >= 0x80)
    return true;
  return std::isalnum(c) != 0;
}

} // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (!is_word_char(c)) {
      ++i;
      continue;
    }
    size_t begin = i;
    while (i < text.size() && is_word_char(static_cast<unsigned char>(text[i])))
      ++i;
    tokens.push_back(
        Token{std::string(text.substr(begin, i - begin)), begin, i});
  }
  return tokens;
}

std::vector<std::string> term_tokens(std::string_view text) {
  std::vector<std::string> terms;
  for (const Token &t : tokenize(text))
    terms.push_back(to_lower(t.text));
  return terms;
}

std::vector<std::string> whitespace_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    if (is_space(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    size_t begin = i;
    while (i < text.size() && !is_space(static_cast<unsigned char>(text[i])))
      ++i;
    tokens.emplace_back(text.substr(begin, i - begin));
  }
  return tokens;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char &c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

} // namespace rap
