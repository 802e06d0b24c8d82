#pragma once

// Rule-based sentence segmentation for poem text.
//
// A unit ends at a terminal mark (. ? ! possibly repeated, then optional
// closing quotes/brackets) that is followed by whitespace or end of input,
// unless the mark is a lone '.' closing a known abbreviation. The CJK marks
// 。？！ end a unit whatever follows them. Every newline also ends the pending
// unit, which splits unpunctuated poem lines and makes blank lines act as
// separators.
//
// Offsets are byte offsets into the UTF-8 input.

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace poemotion {

struct Sentence {
  std::size_t id = 0;
  std::string text;
  std::pair<std::size_t, std::size_t> char_span{0, 0};  // [begin, end)

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string raw_text;
  std::vector<Sentence> sentences;
};

namespace detail {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool is_ascii_terminal(char c) { return c == '.' || c == '?' || c == '!'; }

// Length of a CJK terminal mark at `pos`, or 0.
inline std::size_t cjk_terminal_at(std::string_view s, std::size_t pos) {
  static constexpr std::array<std::string_view, 3> kMarks = {
      "\xE3\x80\x82",   // 。
      "\xEF\xBC\x9F",   // ？
      "\xEF\xBC\x81"};  // ！
  for (auto m : kMarks)
    if (s.substr(pos, m.size()) == m) return m.size();
  return 0;
}

// Length of a closing quote or bracket at `pos`, or 0.
inline std::size_t closer_at(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return 0;
  char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  static constexpr std::array<std::string_view, 6> kClosers = {
      "\xE2\x80\x9D",   // ”
      "\xE2\x80\x99",   // ’
      "\xC2\xBB",       // »
      "\xE3\x80\x8D",   // 」
      "\xE3\x80\x8F",   // 』
      "\xEF\xBC\x89"};  // ）
  for (auto m : kClosers)
    if (s.substr(pos, m.size()) == m) return m.size();
  return 0;
}

inline std::size_t skip_closers(std::string_view s, std::size_t pos) {
  while (std::size_t len = closer_at(s, pos)) pos += len;
  return pos;
}

inline bool is_abbreviation(std::string_view token) {
  static constexpr std::array<std::string_view, 11> kAbbrev = {
      "mr.", "mrs.", "dr.", "st.", "vs.", "etc.",
      "e.g.", "i.e.", "prof.", "sr.", "jr."};
  while (!token.empty() && (token.front() == '(' || token.front() == '"' ||
                            token.front() == '\'' || token.front() == '['))
    token.remove_prefix(1);
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(c >= 'A' && c <= 'Z' ? c + ('a' - 'A') : c);
  });
  return std::find(kAbbrev.begin(), kAbbrev.end(), lower) != kAbbrev.end();
}

}  // namespace detail

inline Document segment_sentences(std::string_view raw) {
  Document doc;
  doc.raw_text = std::string(raw);
  constexpr auto npos = std::string_view::npos;

  std::size_t pending = npos;
  auto emit = [&](std::size_t end) {
    while (end > pending && detail::is_ascii_space(raw[end - 1])) --end;
    Sentence s;
    s.id = doc.sentences.size();
    s.char_span = {pending, end};
    s.text = std::string(raw.substr(pending, end - pending));
    doc.sentences.push_back(std::move(s));
    pending = npos;
  };

  std::size_t i = 0;
  const std::size_t n = raw.size();
  while (i < n) {
    const char c = raw[i];
    if (c == '\n') {
      if (pending != npos) emit(i);
      ++i;
      continue;
    }
    if (detail::is_ascii_space(c)) {
      ++i;
      continue;
    }
    if (pending == npos) pending = i;

    if (detail::is_ascii_terminal(c)) {
      std::size_t run_end = i;
      while (run_end < n && detail::is_ascii_terminal(raw[run_end])) ++run_end;
      const std::size_t after = detail::skip_closers(raw, run_end);
      if (after == n || detail::is_ascii_space(raw[after])) {
        bool abbreviation = false;
        if (c == '.' && run_end == i + 1) {
          std::size_t tok = i;
          while (tok > pending && !detail::is_ascii_space(raw[tok - 1])) --tok;
          abbreviation = detail::is_abbreviation(raw.substr(tok, i + 1 - tok));
        }
        if (!abbreviation) emit(after);
        i = after;
      } else {
        i = run_end;
      }
      continue;
    }
    if (std::size_t len = detail::cjk_terminal_at(raw, i)) {
      std::size_t end = i + len;
      for (;;) {
        if (std::size_t more = detail::cjk_terminal_at(raw, end)) {
          end += more;
        } else if (end < n && detail::is_ascii_terminal(raw[end])) {
          ++end;
        } else {
          break;
        }
      }
      end = detail::skip_closers(raw, end);
      emit(end);
      i = end;
      continue;
    }
    ++i;
  }
  if (pending != npos) emit(n);
  return doc;
}

}  // namespace poemotion
