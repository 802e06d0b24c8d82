#pragma once

// CoNLL-U ingestion. Only the columns needed for phrase extraction are kept:
// ID, FORM, LEMMA, UPOS, HEAD and DEPREL.

#include <charconv>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poemotion/error.hpp"

namespace poemotion {

struct DepToken {
  int id = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string upos;
  int head = 0;  // 0 = root
  std::string deprel;

  friend bool operator==(const DepToken&, const DepToken&) = default;
};

struct DepSentence {
  std::vector<DepToken> tokens;
  std::optional<std::string> text_hint;
  std::size_t first_line = 0;  // line number of the block's first line

  const DepToken& token(int id) const { return tokens.at(static_cast<std::size_t>(id - 1)); }

  friend bool operator==(const DepSentence& a, const DepSentence& b) {
    return a.tokens == b.tokens && a.text_hint == b.text_hint;
  }
};

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// Checks root count, head range and acyclicity. `lines[i]` is the input
// line of token i+1.
inline void validate_tree(const DepSentence& sent, const std::vector<std::size_t>& lines) {
  const int n = static_cast<int>(sent.tokens.size());
  int root = 0;
  for (int i = 0; i < n; ++i) {
    const DepToken& t = sent.tokens[static_cast<std::size_t>(i)];
    const std::size_t line = lines[static_cast<std::size_t>(i)];
    if (t.head < 0 || t.head > n)
      throw TreeError("head " + std::to_string(t.head) + " out of range for token " +
                          std::to_string(t.id),
                      line);
    if (t.head == t.id) throw TreeError("token " + std::to_string(t.id) + " is its own head", line);
    if (t.head == 0) {
      if (root != 0) throw TreeError("multiple roots (tokens " + std::to_string(root) + " and " +
                                         std::to_string(t.id) + ")",
                                     line);
      root = t.id;
    }
  }
  if (root == 0) throw TreeError("sentence has no root", sent.first_line);

  // Walk up from each token; more than n steps means a cycle.
  for (int i = 0; i < n; ++i) {
    int cur = sent.tokens[static_cast<std::size_t>(i)].id;
    for (int steps = 0; cur != 0; ++steps) {
      if (steps > n)
        throw TreeError("cycle through token " + std::to_string(i + 1),
                        lines[static_cast<std::size_t>(i)]);
      cur = sent.tokens[static_cast<std::size_t>(cur - 1)].head;
    }
  }
}

}  // namespace detail

/// Parses a CoNLL-U stream. Comment lines, multiword-token rows and empty
/// nodes are skipped; a `# text = ...` comment becomes the sentence's
/// text_hint. Accepts LF or CRLF line endings.
inline std::vector<DepSentence> parse_conllu(std::istream& in) {
  std::vector<DepSentence> out;
  DepSentence cur;
  std::vector<std::size_t> cur_lines;
  bool open = false;

  auto flush = [&] {
    if (!cur.tokens.empty()) {
      detail::validate_tree(cur, cur_lines);
      out.push_back(std::move(cur));
    }
    cur = DepSentence{};
    cur_lines.clear();
    open = false;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      flush();
      continue;
    }
    if (!open) {
      cur.first_line = line_no;
      open = true;
    }
    if (line.front() == '#') {
      constexpr std::string_view kText = "# text = ";
      if (line.substr(0, kText.size()) == kText)
        cur.text_hint = std::string(line.substr(kText.size()));
      continue;
    }
    auto cols = detail::split_tabs(line);
    if (cols.size() != 10)
      throw FormatError("expected 10 tab-separated columns, found " + std::to_string(cols.size()),
                        line_no);
    if (cols[0].find('-') != std::string_view::npos || cols[0].find('.') != std::string_view::npos)
      continue;
    auto id = detail::parse_int(cols[0]);
    if (!id) throw FormatError("non-integer token id '" + std::string(cols[0]) + "'", line_no);
    auto head = detail::parse_int(cols[6]);
    if (!head) throw FormatError("non-integer head '" + std::string(cols[6]) + "'", line_no);
    const int expected = static_cast<int>(cur.tokens.size()) + 1;
    if (*id != expected)
      throw FormatError("token id " + std::to_string(*id) + " out of sequence (expected " +
                            std::to_string(expected) + ")",
                        line_no);
    cur.tokens.push_back(DepToken{*id, std::string(cols[1]), std::string(cols[2]),
                                  std::string(cols[3]), *head, std::string(cols[7])});
    cur_lines.push_back(line_no);
  }
  flush();
  return out;
}

}  // namespace poemotion
