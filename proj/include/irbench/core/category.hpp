// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string_view>

namespace irbench {

enum class Category { brute_force, unauthorized_access, misconfiguration, malicious_file_execution };

inline constexpr std::array<Category, 4> kAllCategories = {
    Category::brute_force, Category::unauthorized_access, Category::misconfiguration,
    Category::malicious_file_execution};

std::string_view to_string(Category c);
// Human-readable row label ("Brute Force").
std::string_view display_name(Category c);
// Throws ValidationError("category", ...) for unknown names.
Category category_from_string(std::string_view text);

enum class Verdict { TP, FP };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view text);

}  // namespace irbench
