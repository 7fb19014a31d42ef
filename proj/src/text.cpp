/*
 * Copyright 2026 The modaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "modaudit/text.hpp"

#include <cctype>

namespace modaudit {

namespace {

bool IsWordChar(unsigned char c) { return std::isalnum(c) != 0; }

bool IsSpaceOnly(std::string_view s) {
  for (unsigned char c : s) {
    if (std::isspace(c) == 0) return false;
  }
  return !s.empty();
}

char LowerChar(unsigned char c) {
  return static_cast<char>(std::tolower(c));
}

struct WordSpan {
  std::size_t begin;
  std::size_t end;
};

std::vector<WordSpan> WordSpans(std::string_view text) {
  std::vector<WordSpan> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    if (IsWordChar(static_cast<unsigned char>(text[i]))) {
      std::size_t j = i + 1;
      while (j < text.size() &&
             IsWordChar(static_cast<unsigned char>(text[j]))) {
        ++j;
      }
      spans.push_back({i, j});
      i = j;
    } else {
      ++i;
    }
  }
  return spans;
}

std::vector<std::string> SplitTokenWords(std::string_view token_lower) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < token_lower.size()) {
    while (i < token_lower.size() && token_lower[i] == ' ') ++i;
    std::size_t j = i;
    while (j < token_lower.size() && token_lower[j] != ' ') ++j;
    if (j > i) words.emplace_back(token_lower.substr(i, j - i));
    i = j;
  }
  return words;
}

bool WordEqualsLower(std::string_view text, WordSpan span,
                     std::string_view word_lower) {
  if (span.end - span.begin != word_lower.size()) return false;
  for (std::size_t k = 0; k < word_lower.size(); ++k) {
    if (LowerChar(static_cast<unsigned char>(text[span.begin + k])) !=
        word_lower[k]) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string AsciiLower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(LowerChar(c));
  return out;
}

CasePattern ClassifyCase(std::string_view site) {
  int alpha = 0;
  int upper = 0;
  bool first_alpha_upper = false;
  for (unsigned char c : site) {
    if (std::isalpha(c) != 0) {
      if (alpha == 0) first_alpha_upper = std::isupper(c) != 0;
      ++alpha;
      if (std::isupper(c) != 0) ++upper;
    }
  }
  if (alpha >= 2 && upper == alpha) return CasePattern::kUpper;
  if (first_alpha_upper) return CasePattern::kTitle;
  return CasePattern::kLower;
}

std::string ApplyCase(CasePattern pattern, std::string_view replacement_lower) {
  std::string out(replacement_lower);
  switch (pattern) {
    case CasePattern::kLower:
      break;
    case CasePattern::kTitle:
      for (char& c : out) {
        if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
          c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
          break;
        }
      }
      break;
    case CasePattern::kUpper:
      for (char& c : out) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      }
      break;
  }
  return out;
}

std::vector<TokenMatch> FindWholeWord(std::string_view text,
                                      std::string_view token_lower) {
  std::vector<TokenMatch> matches;
  const std::vector<std::string> token_words = SplitTokenWords(token_lower);
  if (token_words.empty()) return matches;
  const std::vector<WordSpan> spans = WordSpans(text);
  std::size_t i = 0;
  while (i + token_words.size() <= spans.size()) {
    bool ok = WordEqualsLower(text, spans[i], token_words[0]);
    for (std::size_t w = 1; ok && w < token_words.size(); ++w) {
      // Consecutive token words must be separated by whitespace only.
      const std::size_t gap_begin = spans[i + w - 1].end;
      const std::size_t gap_end = spans[i + w].begin;
      ok = IsSpaceOnly(text.substr(gap_begin, gap_end - gap_begin)) &&
           WordEqualsLower(text, spans[i + w], token_words[w]);
    }
    if (ok) {
      matches.push_back({spans[i].begin, spans[i + token_words.size() - 1].end});
      i += token_words.size();
    } else {
      ++i;
    }
  }
  return matches;
}

bool ContainsWholeWord(std::string_view text, std::string_view token_lower) {
  return !FindWholeWord(text, token_lower).empty();
}

Substitution SubstituteWholeWord(std::string_view text,
                                 std::string_view from_lower,
                                 std::string_view to_lower) {
  Substitution result;
  const std::vector<TokenMatch> matches = FindWholeWord(text, from_lower);
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  for (const TokenMatch& m : matches) {
    out.append(text.substr(pos, m.begin - pos));
    const std::string_view site = text.substr(m.begin, m.end - m.begin);
    out.append(ApplyCase(ClassifyCase(site), to_lower));
    pos = m.end;
  }
  out.append(text.substr(pos));
  result.text = std::move(out);
  result.sites = matches.size();
  return result;
}

std::vector<std::string> LowerWords(std::string_view text) {
  std::vector<std::string> words;
  for (const WordSpan& span : WordSpans(text)) {
    words.push_back(AsciiLower(text.substr(span.begin, span.end - span.begin)));
  }
  return words;
}

int WhitespaceWordCount(std::string_view text) {
  int count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    if (std::isspace(c) != 0) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

bool IsValidUtf8(std::string_view text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    std::size_t extra;
    unsigned int min_cp;
    unsigned int cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      min_cp = 0x80;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      min_cp = 0x800;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      min_cp = 0x10000;
      cp = c & 0x07;
    } else {
      return false;
    }
    for (std::size_t k = 1; k <= extra; ++k) {
      if (i + k >= n) return false;
      const unsigned char cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min_cp) return false;                  // overlong
    if (cp > 0x10FFFF) return false;                // out of range
    if (cp >= 0xD800 && cp <= 0xDFFF) return false; // surrogate
    i += extra + 1;
  }
  return true;
}

}  // namespace modaudit
