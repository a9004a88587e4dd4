// SPDX-License-Identifier: Apache-2.0
#include "irbench/text/rouge.hpp"

#include <algorithm>

namespace irbench::text {
namespace {

bool is_word(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_inner(unsigned char c) { return c == ':' || c == '/' || c == '-' || c == '.' || c == '_'; }

void flush(std::string& cur, Tokens& out) {
  std::size_t b = 0, e = cur.size();
  while (b < e && is_inner(static_cast<unsigned char>(cur[b]))) ++b;
  while (e > b && is_inner(static_cast<unsigned char>(cur[e - 1]))) --e;
  if (e > b) out.push_back(cur.substr(b, e - b));
  cur.clear();
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string cur;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word(c)) {
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
    } else if (is_inner(c)) {
      cur.push_back(ch);
    } else {
      flush(cur, out);
    }
  }
  flush(cur, out);
  return out;
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  if (a.empty() || b.empty()) return 0;
  const Tokens& outer = a.size() >= b.size() ? a : b;
  const Tokens& inner = a.size() >= b.size() ? b : a;
  std::vector<std::size_t> prev(inner.size() + 1, 0), row(inner.size() + 1, 0);
  for (const auto& x : outer) {
    for (std::size_t j = 1; j <= inner.size(); ++j) {
      row[j] = x == inner[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], row[j - 1]);
    }
    std::swap(prev, row);
  }
  return prev[inner.size()];
}

double rouge_l(const Tokens& reference, const Tokens& candidate) {
  const std::size_t total = reference.size() + candidate.size();
  const std::size_t l = lcs_length(reference, candidate);
  if (l == 0) return 0.0;
  // Same value as 2PR/(P+R) with P = L/|candidate|, R = L/|reference|, but
  // exact at representable boundaries such as 21/50.
  return 2.0 * static_cast<double>(l) / static_cast<double>(total);
}

}  // namespace irbench::text
