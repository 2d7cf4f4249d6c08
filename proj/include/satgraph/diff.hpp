#pragma once

// Token-level minimal edit script via longest common subsequence.

#include <cstdint>
#include <string>
#include <vector>

#include "satgraph/error.hpp"
#include "satgraph/model.hpp"

namespace satgraph {

using Tokens = std::vector<std::string>;

// Hunks are maximal runs of non-matching tokens between two matches. A run
// with only deletions is a delete, only insertions an insert, both a replace.
// position is the index in `a` where the hunk starts.
inline std::vector<TextEdit> diff_tokens(const Tokens& a, const Tokens& b) {
  size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
  size_t suffix = 0;
  while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
    ++suffix;
  }
  const size_t n = a.size() - prefix - suffix;
  const size_t m = b.size() - prefix - suffix;

  // lcs[i][j] = LCS length of a[prefix+i..] and b[prefix+j..] within the middle.
  std::vector<std::uint32_t> lcs((n + 1) * (m + 1), 0);
  auto at = [&](size_t i, size_t j) -> std::uint32_t& { return lcs[i * (m + 1) + j]; };
  for (size_t i = n; i-- > 0;) {
    for (size_t j = m; j-- > 0;) {
      at(i, j) = a[prefix + i] == b[prefix + j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
    }
  }

  std::vector<TextEdit> out;
  TextEdit cur;
  bool open = false;
  auto flush = [&] {
    if (!open) return;
    if (cur.tokens_a.empty()) cur.op = EditOp::kInsert;
    else if (cur.tokens_b.empty()) cur.op = EditOp::kDelete;
    else cur.op = EditOp::kReplace;
    out.push_back(std::move(cur));
    cur = TextEdit{};
    open = false;
  };
  auto begin = [&](size_t pos) {
    if (!open) {
      cur.position = pos;
      open = true;
    }
  };
  size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[prefix + i] == b[prefix + j]) {
      flush();
      ++i;
      ++j;
    } else if (j == m || (i < n && at(i + 1, j) >= at(i, j + 1))) {
      begin(prefix + i);
      cur.tokens_a.push_back(a[prefix + i]);
      ++i;
    } else {
      begin(prefix + i);
      cur.tokens_b.push_back(b[prefix + j]);
      ++j;
    }
  }
  flush();
  return out;
}

// Applies an edit script produced against `a`. Throws InvalidArgument when
// the script does not fit `a`.
inline Tokens apply_edits(const Tokens& a, const std::vector<TextEdit>& edits) {
  Tokens out;
  size_t i = 0;
  for (const auto& e : edits) {
    if (e.position < i || e.position > a.size()) {
      fail(ErrorCode::kInvalidArgument, "edit position out of order or range");
    }
    out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.begin() + static_cast<std::ptrdiff_t>(e.position));
    i = e.position;
    for (const auto& t : e.tokens_a) {
      if (i >= a.size() || a[i] != t) fail(ErrorCode::kInvalidArgument, "edit does not match source tokens");
      ++i;
    }
    out.insert(out.end(), e.tokens_b.begin(), e.tokens_b.end());
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  return out;
}

}  // namespace satgraph
