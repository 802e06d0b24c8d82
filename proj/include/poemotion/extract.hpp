#pragma once

// Noun- and verb-phrase extraction over dependency trees.

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "poemotion/conllu.hpp"
#include "poemotion/text_ingest.hpp"

namespace poemotion {

enum class SegmentKind { NounPhrase, VerbPhrase };

inline std::string_view to_string(SegmentKind k) {
  return k == SegmentKind::NounPhrase ? "NounPhrase" : "VerbPhrase";
}

struct SemanticSegment {
  std::size_t id = 0;
  std::string text;
  SegmentKind kind = SegmentKind::NounPhrase;
  std::size_t sentence_id = 0;
  std::vector<int> token_ids;  // sorted ascending

  int first_token() const { return token_ids.empty() ? 0 : token_ids.front(); }

  friend bool operator==(const SemanticSegment&, const SemanticSegment&) = default;
};

namespace detail {

inline std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + ('a' - 'A'));
  return out;
}

template <std::size_t N>
bool rel_in(std::string_view deprel, const std::array<std::string_view, N>& set) {
  const std::string rel = lower_ascii(deprel);
  return std::find(set.begin(), set.end(), rel) != set.end();
}

inline constexpr std::array<std::string_view, 5> kNounHeadRels = {"nsubj", "nsubj:pass", "obj",
                                                                  "dobj", "iobj"};
inline constexpr std::array<std::string_view, 7> kNounModifierRels = {
    "det", "amod", "compound", "nmod", "nummod", "poss", "case"};
inline constexpr std::array<std::string_view, 2> kVerbHeadRels = {"root", "conj"};
inline constexpr std::array<std::string_view, 4> kVerbObjectRels = {"obj", "dobj", "iobj", "xcomp"};

using Children = std::vector<std::vector<int>>;

inline Children children_of(const DepSentence& s) {
  Children kids(s.tokens.size() + 1);
  for (const auto& t : s.tokens) kids[static_cast<std::size_t>(t.head)].push_back(t.id);
  return kids;
}

// Adds `id` and every descendant reachable through edges accepted by `follow`.
template <typename Pred>
void collect(const DepSentence& s, const Children& kids, int id, Pred follow, std::vector<int>& out) {
  out.push_back(id);
  for (int child : kids[static_cast<std::size_t>(id)])
    if (follow(s.token(child).deprel)) collect(s, kids, child, follow, out);
}

inline SemanticSegment make_segment(const DepSentence& s, std::size_t sentence_id, SegmentKind kind,
                                    std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  SemanticSegment seg;
  seg.kind = kind;
  seg.sentence_id = sentence_id;
  for (int id : ids) {
    if (!seg.text.empty()) seg.text += ' ';
    seg.text += s.token(id).form;
  }
  seg.token_ids = std::move(ids);
  return seg;
}

}  // namespace detail

/// Runs phrase extraction over one validated dependency tree.
///
/// Noun phrases: every subject/object head plus dependents reached through
/// det/amod/compound/nmod/nummod/poss/case. Verb phrases: every VERB with
/// deprel root or conj, plus the full subtrees of its obj/dobj/iobj/xcomp
/// dependents. Segments with identical token sets are emitted once. Output is
/// ordered by first token id, then token list, then kind. Segment ids are
/// left at 0; the pool assigns them.
inline std::vector<SemanticSegment> extract_segments(const DepSentence& sentence,
                                                     std::size_t sentence_id) {
  using namespace detail;
  const Children kids = children_of(sentence);
  std::vector<SemanticSegment> out;

  auto push_unique = [&](SemanticSegment seg) {
    for (const auto& existing : out)
      if (existing.token_ids == seg.token_ids) return;
    out.push_back(std::move(seg));
  };

  for (const auto& t : sentence.tokens) {
    if (!rel_in(t.deprel, kNounHeadRels)) continue;
    std::vector<int> ids;
    collect(sentence, kids, t.id,
            [](std::string_view rel) { return rel_in(rel, kNounModifierRels); }, ids);
    push_unique(make_segment(sentence, sentence_id, SegmentKind::NounPhrase, std::move(ids)));
  }
  for (const auto& t : sentence.tokens) {
    if (t.upos != "VERB" || !rel_in(t.deprel, kVerbHeadRels)) continue;
    std::vector<int> ids{t.id};
    for (int child : kids[static_cast<std::size_t>(t.id)])
      if (rel_in(sentence.token(child).deprel, kVerbObjectRels))
        collect(sentence, kids, child, [](std::string_view) { return true; }, ids);
    push_unique(make_segment(sentence, sentence_id, SegmentKind::VerbPhrase, std::move(ids)));
  }

  std::stable_sort(out.begin(), out.end(), [](const SemanticSegment& a, const SemanticSegment& b) {
    if (a.token_ids != b.token_ids) return a.token_ids < b.token_ids;
    return a.kind < b.kind;
  });
  return out;
}

/// Fallback when no parse is available: one NounPhrase per sentence whose
/// tokens are the sentence's whitespace-separated words.
inline SemanticSegment whole_sentence_segment(const Sentence& sentence) {
  SemanticSegment seg;
  seg.kind = SegmentKind::NounPhrase;
  seg.sentence_id = sentence.id;
  std::string_view rest(sentence.text);
  int next_id = 1;
  while (!rest.empty()) {
    std::size_t b = 0;
    while (b < rest.size() && detail::is_ascii_space(rest[b])) ++b;
    std::size_t e = b;
    while (e < rest.size() && !detail::is_ascii_space(rest[e])) ++e;
    if (e > b) {
      if (!seg.text.empty()) seg.text += ' ';
      seg.text.append(rest.substr(b, e - b));
      seg.token_ids.push_back(next_id++);
    }
    rest.remove_prefix(e);
  }
  return seg;
}

}  // namespace poemotion
