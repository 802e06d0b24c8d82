#pragma once

// Valence/arousal scoring and circumplex quadrant classification.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "poemotion/conllu.hpp"
#include "poemotion/error.hpp"
#include "poemotion/extract.hpp"

namespace poemotion {

enum class Quadrant { Excitement, Anger, Sadness, Relaxation, Neutral };

inline constexpr Quadrant kStrokeQuadrants[] = {Quadrant::Excitement, Quadrant::Anger,
                                                Quadrant::Sadness, Quadrant::Relaxation};

inline std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::Excitement: return "excitement";
    case Quadrant::Anger: return "anger";
    case Quadrant::Sadness: return "sadness";
    case Quadrant::Relaxation: return "relaxation";
    case Quadrant::Neutral: return "neutral";
  }
  return "neutral";
}

inline std::optional<Quadrant> quadrant_from_string(std::string_view s) {
  for (Quadrant q : {Quadrant::Excitement, Quadrant::Anger, Quadrant::Sadness,
                     Quadrant::Relaxation, Quadrant::Neutral})
    if (to_string(q) == s) return q;
  return std::nullopt;
}

struct VadValue {
  double valence = 0.0;
  double arousal = 0.0;

  friend bool operator==(const VadValue&, const VadValue&) = default;
};

struct VadLexicon {
  std::unordered_map<std::string, VadValue> entries;

  const VadValue* find(const std::string& word) const {
    auto it = entries.find(word);
    return it == entries.end() ? nullptr : &it->second;
  }
};

inline bool in_unit_range(double x) { return x >= -1.0 && x <= 1.0; }

namespace detail {

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

}  // namespace detail

/// Reads `word<TAB>valence<TAB>arousal` rows. Blank and `#` lines are
/// skipped; a repeated word keeps its last values.
inline VadLexicon load_lexicon(std::istream& in) {
  VadLexicon lex;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto cols = detail::split_tabs(line);
    if (cols.size() != 3)
      throw FormatError("expected 3 tab-separated columns, found " + std::to_string(cols.size()),
                        line_no);
    auto v = detail::parse_double(cols[1]);
    auto a = detail::parse_double(cols[2]);
    if (!v || !a) throw FormatError("non-numeric valence or arousal", line_no);
    if (!in_unit_range(*v) || !in_unit_range(*a))
      throw RangeError("valence and arousal must lie in [-1, 1]", line_no);
    lex.entries[detail::lower_ascii(cols[0])] = VadValue{*v, *a};
  }
  return lex;
}

/// Maximal runs of letters, lowercased. Bytes >= 0x80 count as letters so
/// non-Latin words stay whole.
inline std::vector<std::string> alphabetic_words(std::string_view text) {
  auto is_letter = [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
  };
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_letter(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && is_letter(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) words.push_back(detail::lower_ascii(text.substr(i, j - i)));
    i = j;
  }
  return words;
}

/// Mean valence/arousal of the lexicon words found in the text; (0, 0) when
/// nothing matches.
inline VadValue score_text_lexicon(std::string_view text, const VadLexicon& lexicon) {
  double v = 0.0, a = 0.0;
  std::size_t hits = 0;
  for (const auto& w : alphabetic_words(text)) {
    if (const VadValue* e = lexicon.find(w)) {
      v += e->valence;
      a += e->arousal;
      ++hits;
    }
  }
  if (hits == 0) return {};
  return {std::clamp(v / static_cast<double>(hits), -1.0, 1.0),
          std::clamp(a / static_cast<double>(hits), -1.0, 1.0)};
}

inline VadValue score_segment_lexicon(const SemanticSegment& segment, const VadLexicon& lexicon) {
  return score_text_lexicon(segment.text, lexicon);
}

namespace detail {
inline void check_vad(double valence, double arousal) {
  if (!in_unit_range(valence) || !in_unit_range(arousal))
    throw DomainError("valence and arousal must lie in [-1, 1]");
}
}  // namespace detail

/// Euclidean distance of (valence, arousal) from the neutral origin.
inline double intensity(double valence, double arousal) {
  detail::check_vad(valence, arousal);
  return std::sqrt(valence * valence + arousal * arousal);
}

/// Zero valence or arousal counts as the non-negative side; only the exact
/// origin is Neutral.
inline Quadrant classify_quadrant(double valence, double arousal) {
  detail::check_vad(valence, arousal);
  if (valence == 0.0 && arousal == 0.0) return Quadrant::Neutral;
  if (arousal >= 0.0) return valence >= 0.0 ? Quadrant::Excitement : Quadrant::Anger;
  return valence >= 0.0 ? Quadrant::Relaxation : Quadrant::Sadness;
}

struct EmotionScore {
  double valence = 0.0;
  double arousal = 0.0;
  double intensity = 0.0;             // [0, sqrt 2]
  double normalized_intensity = 0.0;  // intensity / sqrt 2
  Quadrant quadrant = Quadrant::Neutral;

  friend bool operator==(const EmotionScore&, const EmotionScore&) = default;
};

inline EmotionScore make_emotion_score(double valence, double arousal) {
  EmotionScore s;
  s.valence = valence;
  s.arousal = arousal;
  s.intensity = intensity(valence, arousal);
  s.normalized_intensity = std::min(1.0, s.intensity / std::sqrt(2.0));
  s.quadrant = classify_quadrant(valence, arousal);
  return s;
}

}  // namespace poemotion
