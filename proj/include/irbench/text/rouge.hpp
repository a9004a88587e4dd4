// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace irbench::text {

using Tokens = std::vector<std::string>;

// Lowercases ASCII and splits on whitespace and punctuation. ':', '/', '-',
// '.' and '_' are kept inside a token (ARNs, IPs, event names survive whole)
// but stripped from its edges. Bytes >= 0x80 count as word characters.
Tokens tokenize(std::string_view text);

std::size_t lcs_length(const Tokens& a, const Tokens& b);

// ROUGE-L F1 = 2PR/(P+R) = 2L/(|a|+|b|); 0 when either side is empty.
double rouge_l(const Tokens& reference, const Tokens& candidate);

inline double rouge_l(std::string_view reference, std::string_view candidate) {
  return rouge_l(tokenize(reference), tokenize(candidate));
}

}  // namespace irbench::text
