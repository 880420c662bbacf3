#pragma once

// String similarity primitives behind the disambiguation filters. All
// functions work on code points; the std::string_view overloads decode UTF-8.

#include <algorithm>
#include <cstddef>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "graphled/utf8.hpp"

namespace graphled {

using CharSet = std::set<char32_t>;

inline std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, subst});
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  return levenshtein_distance(utf8::decode(a), utf8::decode(b));
}

inline std::size_t lcs_length(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::size_t lcs_length(std::string_view a, std::string_view b) {
  return lcs_length(utf8::decode(a), utf8::decode(b));
}

struct MatchBlock {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;

  friend bool operator==(const MatchBlock&, const MatchBlock&) = default;
};

namespace detail {

// Longest block a[i..i+k) == b[j..j+k) inside the given ranges that contains
// no junk character, then widened by equal junk characters on both sides.
// Ties resolve to the smallest i, then the smallest j.
inline MatchBlock longest_match(std::u32string_view a, std::u32string_view b, const CharSet& junk,
                                std::size_t alo, std::size_t ahi, std::size_t blo, std::size_t bhi) {
  MatchBlock best{alo, blo, 0};
  const std::size_t width = bhi - blo;
  std::vector<std::size_t> prev(width + 1, 0), cur(width + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      const std::size_t col = j - blo + 1;
      if (a[i] == b[j] && !junk.contains(b[j])) {
        cur[col] = prev[col - 1] + 1;
        if (cur[col] > best.size) best = {i + 1 - cur[col], j + 1 - cur[col], cur[col]};
      } else {
        cur[col] = 0;
      }
    }
    std::swap(prev, cur);
  }
  while (best.a > alo && best.b > blo && junk.contains(b[best.b - 1]) && a[best.a - 1] == b[best.b - 1]) {
    --best.a;
    --best.b;
    ++best.size;
  }
  while (best.a + best.size < ahi && best.b + best.size < bhi && junk.contains(b[best.b + best.size]) &&
         a[best.a + best.size] == b[best.b + best.size]) {
    ++best.size;
  }
  return best;
}

}  // namespace detail

// Ratcliff/Obershelp block decomposition in the given argument order, sorted
// by position. Matches the difflib algorithm with autojunk disabled.
inline std::vector<MatchBlock> matching_blocks(std::u32string_view a, std::u32string_view b,
                                               const CharSet& junk = {}) {
  std::vector<MatchBlock> blocks;
  struct Range {
    std::size_t alo, ahi, blo, bhi;
  };
  std::vector<Range> pending{{0, a.size(), 0, b.size()}};
  while (!pending.empty()) {
    const Range r = pending.back();
    pending.pop_back();
    if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
    const MatchBlock m = detail::longest_match(a, b, junk, r.alo, r.ahi, r.blo, r.bhi);
    if (m.size == 0) continue;
    blocks.push_back(m);
    pending.push_back({r.alo, m.a, r.blo, m.b});
    pending.push_back({m.a + m.size, r.ahi, m.b + m.size, r.bhi});
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const MatchBlock& x, const MatchBlock& y) { return x.a < y.a; });
  // Collapse blocks that touch in both sequences, as difflib does.
  std::vector<MatchBlock> merged;
  for (const auto& m : blocks) {
    if (!merged.empty() && merged.back().a + merged.back().size == m.a && merged.back().b + merged.back().size == m.b) {
      merged.back().size += m.size;
    } else {
      merged.push_back(m);
    }
  }
  return merged;
}

// Total matched characters M. The greedy decomposition depends on argument
// order, so M is the larger of the two orders; this makes the ratio symmetric.
inline std::size_t matched_characters(std::u32string_view a, std::u32string_view b,
                                      const CharSet& junk = {}) {
  auto total = [&](std::u32string_view x, std::u32string_view y) {
    std::size_t m = 0;
    for (const auto& blk : matching_blocks(x, y, junk)) m += blk.size;
    return m;
  };
  return std::max(total(a, b), total(b, a));
}

inline double sequence_matcher_ratio(std::u32string_view a, std::u32string_view b,
                                     const CharSet& junk = {}) {
  if (a.empty() && b.empty()) return 1.0;
  const auto m = matched_characters(a, b, junk);
  return 2.0 * static_cast<double>(m) / static_cast<double>(a.size() + b.size());
}

inline double sequence_matcher_ratio(std::string_view a, std::string_view b, const CharSet& junk = {}) {
  return sequence_matcher_ratio(utf8::decode(a), utf8::decode(b), junk);
}

}  // namespace graphled
