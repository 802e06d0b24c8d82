#pragma once

// Segment pooling and TextRank importance ranking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poemotion/error.hpp"
#include "poemotion/extract.hpp"

namespace poemotion {

inline constexpr std::size_t kEmbeddingDim = 256;

using Embedding = std::vector<double>;
using Embedder = std::function<Embedding(std::string_view)>;

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace detail {

// Splits UTF-8 into code-point byte slices. Malformed bytes stand alone.
inline std::vector<std::string_view> utf8_chars(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto lead = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (lead >= 0xF0 && lead < 0xF8) len = 4;
    else if (lead >= 0xE0) len = lead < 0xF0 ? 3 : 1;
    else if (lead >= 0xC0) len = 2;
    if (i + len > s.size()) len = 1;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace detail

/// Hashed character-trigram embedding. Text is ASCII-lowercased, trimmed and
/// whitespace runs collapse to one space; each trigram of code points is
/// bucketed by FNV-1a(utf8 bytes) mod 256, counted, then L2-normalized.
/// Fewer than three characters gives the zero vector.
inline Embedding embed_segment(std::string_view text) {
  std::string norm;
  bool pending_space = false;
  for (char c : text) {
    if (detail::is_ascii_space(c)) {
      pending_space = !norm.empty();
      continue;
    }
    if (pending_space) norm += ' ';
    pending_space = false;
    norm += (c >= 'A' && c <= 'Z') ? static_cast<char>(c + ('a' - 'A')) : c;
  }

  Embedding v(kEmbeddingDim, 0.0);
  const auto chars = detail::utf8_chars(norm);
  if (chars.size() < 3) return v;
  for (std::size_t i = 0; i + 3 <= chars.size(); ++i) {
    const std::size_t begin = static_cast<std::size_t>(chars[i].data() - norm.data());
    const std::size_t end = static_cast<std::size_t>(chars[i + 2].data() - norm.data()) +
                            chars[i + 2].size();
    v[fnv1a64(std::string_view(norm).substr(begin, end - begin)) % kEmbeddingDim] += 1.0;
  }
  const double norm2 = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  for (double& x : v) x /= norm2;
  return v;
}

/// Cosine similarity; 0 when either vector is zero.
inline double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Dense symmetric similarity graph, row-major weights.
struct SegmentGraph {
  std::size_t n = 0;
  std::vector<double> weights;
  std::vector<std::size_t> node_ids;

  double& at(std::size_t i, std::size_t j) { return weights[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return weights[i * n + j]; }

  static SegmentGraph zeros(std::size_t n) {
    SegmentGraph g;
    g.n = n;
    g.weights.assign(n * n, 0.0);
    g.node_ids.resize(n);
    std::iota(g.node_ids.begin(), g.node_ids.end(), std::size_t{0});
    return g;
  }
};

/// Complete graph with weights max(0, cosine) and an empty diagonal.
inline SegmentGraph build_graph(std::span<const SemanticSegment> pool,
                                const Embedder& embed = embed_segment) {
  if (pool.empty()) throw EmptyPool("cannot build a graph over an empty segment pool");
  std::vector<Embedding> vecs;
  vecs.reserve(pool.size());
  for (const auto& s : pool) vecs.push_back(embed(s.text));

  SegmentGraph g = SegmentGraph::zeros(pool.size());
  for (std::size_t i = 0; i < g.n; ++i) {
    g.node_ids[i] = pool[i].id;
    for (std::size_t j = i + 1; j < g.n; ++j) {
      const double w = std::clamp(cosine(vecs[i], vecs[j]), 0.0, 1.0);
      g.at(i, j) = w;
      g.at(j, i) = w;
    }
  }
  return g;
}

struct TextRankOptions {
  double damping = 0.85;
  double tol = 1e-8;
  int max_iter = 200;
};

struct TextRankResult {
  std::vector<double> scores;
  int iterations = 0;
  bool converged = false;
  double last_delta = 0.0;  // L1 change of the final iteration
};

/// Weighted PageRank. Rows with no outgoing weight spread their mass
/// uniformly. Starts from the uniform vector and stops when the L1 change
/// drops below `tol` or after `max_iter` iterations.
inline TextRankResult textrank_scores(const SegmentGraph& g, TextRankOptions opt = {}) {
  if (!(opt.damping > 0.0 && opt.damping < 1.0))
    throw DomainError("damping must lie in (0, 1)");
  TextRankResult r;
  const std::size_t n = g.n;
  if (n == 0) {
    r.converged = true;
    return r;
  }
  const double nn = static_cast<double>(n);
  std::vector<double> row_sum(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) row_sum[j] += g.at(j, k);

  std::vector<double> s(n, 1.0 / nn), next(n);
  while (r.iterations < opt.max_iter) {
    double dangling = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (row_sum[j] == 0.0) dangling += s[j];
    for (std::size_t i = 0; i < n; ++i) {
      double acc = dangling / nn;
      for (std::size_t j = 0; j < n; ++j)
        if (row_sum[j] != 0.0) acc += g.at(j, i) / row_sum[j] * s[j];
      next[i] = (1.0 - opt.damping) / nn + opt.damping * acc;
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - s[i]);
    s.swap(next);
    ++r.iterations;
    r.last_delta = delta;
    if (delta < opt.tol) {
      r.converged = true;
      break;
    }
  }
  r.scores = std::move(s);
  return r;
}

struct ScoredSegment {
  SemanticSegment segment;
  double score = 0.0;
};

using RankedPool = std::vector<ScoredSegment>;

/// max(1, ceil(keep_ratio * n)). A 1e-9 slack absorbs products such as
/// 0.7 * 10 landing just above an integer.
inline std::size_t keep_count(std::size_t n, double keep_ratio) {
  if (!(keep_ratio > 0.0 && keep_ratio <= 1.0))
    throw RatioOutOfRange("keep ratio must lie in (0, 1]");
  const auto k = static_cast<std::size_t>(std::ceil(keep_ratio * static_cast<double>(n) - 1e-9));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

/// Highest-scoring segments, best first. Exact ties go to the segment that
/// appears earlier in the poem.
inline std::vector<ScoredSegment> select_top(const RankedPool& pool, double keep_ratio = 0.5) {
  const std::size_t k = keep_count(pool.size(), keep_ratio);
  std::vector<ScoredSegment> sorted(pool.begin(), pool.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const ScoredSegment& a, const ScoredSegment& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.segment.sentence_id != b.segment.sentence_id)
      return a.segment.sentence_id < b.segment.sentence_id;
    return a.segment.first_token() < b.segment.first_token();
  });
  sorted.resize(std::min(k, sorted.size()));
  return sorted;
}

}  // namespace poemotion
