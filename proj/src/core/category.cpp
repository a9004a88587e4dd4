// SPDX-License-Identifier: Apache-2.0
#include "irbench/core/category.hpp"

#include <string>

#include "irbench/core/errors.hpp"

namespace irbench {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::brute_force: return "brute_force";
    case Category::unauthorized_access: return "unauthorized_access";
    case Category::misconfiguration: return "misconfiguration";
    case Category::malicious_file_execution: return "malicious_file_execution";
  }
  return "brute_force";
}

std::string_view display_name(Category c) {
  switch (c) {
    case Category::brute_force: return "Brute Force";
    case Category::unauthorized_access: return "Unauthorized Access";
    case Category::misconfiguration: return "Misconfiguration";
    case Category::malicious_file_execution: return "Malicious File Execution";
  }
  return "Brute Force";
}

Category category_from_string(std::string_view text) {
  for (Category c : kAllCategories) {
    if (to_string(c) == text) return c;
  }
  throw ValidationError("category", "unknown category '" + std::string(text) + "'");
}

std::string_view to_string(Verdict v) { return v == Verdict::TP ? "TP" : "FP"; }

Verdict verdict_from_string(std::string_view text) {
  if (text == "TP") return Verdict::TP;
  if (text == "FP") return Verdict::FP;
  throw ValidationError("verdict", "unknown verdict '" + std::string(text) + "'");
}

}  // namespace irbench
