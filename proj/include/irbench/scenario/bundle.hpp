// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "irbench/scenario/execute.hpp"

namespace irbench::scenario {

inline constexpr const char* kCaseFile = "case.json";
inline constexpr const char* kEventsFile = "events.jsonl";
inline constexpr const char* kAlertFile = "alert.json";
inline constexpr const char* kGroundTruthFile = "ground_truth.json";

ojson manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const ojson& j);

// File name -> contents, exactly as written to disk.
std::map<std::string, std::string> serialize_bundle(const CaseBundle& b);
CaseBundle parse_bundle(const std::map<std::string, std::string>& files);

void write_bundle(const CaseBundle& b, const std::filesystem::path& dir);

// Reads a bundle directory. With with_ground_truth == false the ground truth
// file is never opened; this is the view investigation tools work from.
CaseBundle read_bundle(const std::filesystem::path& dir, bool with_ground_truth = true);

// Cross-file consistency: alert triggers, evidence event ids and evidence
// ARNs resolve. Returns the problems found, empty when consistent.
std::vector<std::string> check_bundle(const CaseBundle& b);

}  // namespace irbench::scenario
