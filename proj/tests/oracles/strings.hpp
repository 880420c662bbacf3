#pragma once

// Brute-force reference implementations. Deliberately naive: they share no
// code with the library and are only usable on tiny inputs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>

namespace oracle {

// Top-down memoised edit distance.
inline std::size_t levenshtein(const std::u32string& a, const std::u32string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    std::size_t best = std::min(d(i - 1, j) + 1, d(i, j - 1) + 1);
    best = std::min(best, d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1));
    memo[{i, j}] = best;
    return best;
  };
  return d(a.size(), b.size());
}

inline bool is_subsequence(const std::u32string& sub, const std::u32string& s) {
  std::size_t k = 0;
  for (char32_t c : s) {
    if (k < sub.size() && sub[k] == c) ++k;
  }
  return k == sub.size();
}

// Longest subsequence of the shorter string that embeds in the longer one,
// by enumerating every subset of positions.
inline std::size_t lcs(const std::u32string& a, const std::u32string& b) {
  const std::u32string& s = a.size() <= b.size() ? a : b;
  const std::u32string& t = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << s.size()); ++mask) {
    std::u32string sub;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (mask & (1u << i)) sub += s[i];
    }
    if (sub.size() > best && is_subsequence(sub, t)) best = sub.size();
  }
  return best;
}

// Ratcliff/Obershelp as in Python's difflib without autojunk: scan every
// (i, j, k) for the longest junk-free common block (smallest i, then j),
// grow it over equal junk characters on both sides, recurse left and right.
inline std::size_t matched(const std::u32string& a, const std::u32string& b, const std::set<char32_t>& junk) {
  std::function<std::size_t(std::size_t, std::size_t, std::size_t, std::size_t)> go =
      [&](std::size_t alo, std::size_t ahi, std::size_t blo, std::size_t bhi) -> std::size_t {
    std::size_t bi = alo, bj = blo, bk = 0;
    for (std::size_t i = alo; i < ahi; ++i) {
      for (std::size_t j = blo; j < bhi; ++j) {
        std::size_t k = 0;
        while (i + k < ahi && j + k < bhi && a[i + k] == b[j + k] && !junk.contains(b[j + k])) ++k;
        if (k > bk) std::tie(bi, bj, bk) = std::make_tuple(i, j, k);
      }
    }
    while (bi > alo && bj > blo && junk.contains(b[bj - 1]) && a[bi - 1] == b[bj - 1]) {
      --bi;
      --bj;
      ++bk;
    }
    while (bi + bk < ahi && bj + bk < bhi && junk.contains(b[bj + bk]) && a[bi + bk] == b[bj + bk]) ++bk;
    if (bk == 0) return 0;
    return bk + go(alo, bi, blo, bj) + go(bi + bk, ahi, bj + bk, bhi);
  };
  return go(0, a.size(), 0, b.size());
}

inline double sequence_ratio(const std::u32string& a, const std::u32string& b, const std::set<char32_t>& junk = {}) {
  if (a.empty() && b.empty()) return 1.0;
  const std::size_t m = std::max(matched(a, b, junk), matched(b, a, junk));
  return 2.0 * static_cast<double>(m) / static_cast<double>(a.size() + b.size());
}

}  // namespace oracle
