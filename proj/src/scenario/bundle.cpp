// SPDX-License-Identifier: Apache-2.0
#include "irbench/scenario/bundle.hpp"

#include "irbench/cloud/serialize.hpp"
#include "irbench/core/errors.hpp"
#include "irbench/telemetry/jsonl.hpp"

namespace irbench::scenario {

ojson manifest_to_json(const Manifest& m) {
  return {{"case_id", m.case_id},
          {"scenario_id", m.scenario_id},
          {"category", std::string(to_string(m.category))},
          {"seed", std::to_string(m.seed)},
          {"lineage", m.lineage},
          {"rulebook_version", m.rulebook_version}};
}

Manifest manifest_from_json(const ojson& j) {
  Manifest m;
  m.case_id = get_string(j, "case_id");
  m.scenario_id = get_string(j, "scenario_id");
  m.category = category_from_string(get_string(j, "category"));
  try {
    m.seed = std::stoull(get_string(j, "seed"));
  } catch (const std::logic_error&) {
    throw ParseError("field 'seed' must be a decimal string");
  }
  m.lineage = get_strings(j, "lineage");
  m.rulebook_version = get_string(j, "rulebook_version");
  return m;
}

std::map<std::string, std::string> serialize_bundle(const CaseBundle& b) {
  ojson case_doc{{"manifest", manifest_to_json(b.manifest)},
                 {"environment", cloud::environment_to_json(b.environment)}};
  return {{kCaseFile, dump_document(case_doc)},
          {kEventsFile, telemetry::serialize_log(b.log)},
          {kAlertFile, dump_document(alert_to_json(b.alert))},
          {kGroundTruthFile, dump_document(ground_truth_to_json(b.ground_truth))}};
}

namespace {

const std::string& file(const std::map<std::string, std::string>& files, const char* name) {
  const auto it = files.find(name);
  if (it == files.end()) throw ParseError(std::string("bundle is missing ") + name);
  return it->second;
}

}  // namespace

CaseBundle parse_bundle(const std::map<std::string, std::string>& files) {
  CaseBundle b;
  const ojson case_doc = parse_document(file(files, kCaseFile), kCaseFile);
  b.manifest = manifest_from_json(field(case_doc, "manifest"));
  b.environment = cloud::environment_from_json(field(case_doc, "environment"));
  try {
    b.log = telemetry::parse_log(file(files, kEventsFile));
  } catch (const ParseError& e) {
    throw ParseError(std::string(kEventsFile) + ": " + e.what());
  }
  b.alert = alert_from_json(parse_document(file(files, kAlertFile), kAlertFile));
  if (files.count(kGroundTruthFile)) {
    b.ground_truth = ground_truth_from_json(parse_document(file(files, kGroundTruthFile), kGroundTruthFile));
  }
  return b;
}

void write_bundle(const CaseBundle& b, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, contents] : serialize_bundle(b)) write_file_atomic(dir / name, contents);
}

CaseBundle read_bundle(const std::filesystem::path& dir, bool with_ground_truth) {
  std::map<std::string, std::string> files;
  for (const char* name : {kCaseFile, kEventsFile, kAlertFile}) files[name] = read_file(dir / name);
  if (with_ground_truth) files[kGroundTruthFile] = read_file(dir / kGroundTruthFile);
  return parse_bundle(files);
}

std::vector<std::string> check_bundle(const CaseBundle& b) {
  std::vector<std::string> problems;
  if (b.alert.description.empty()) problems.push_back("alert description is empty");
  for (const auto& id : b.alert.triggering_event_ids) {
    if (!b.log.find(id)) problems.push_back("alert trigger " + id + " not in log");
  }
  for (const auto& f : b.ground_truth.findings) {
    if (f.novel && f.evidence.empty()) problems.push_back(f.finding_id + ": novel finding without evidence");
    for (const auto& e : f.evidence) {
      if (e.kind == EvidenceKind::event_id && !b.log.find(e.value)) {
        problems.push_back(f.finding_id + ": event " + e.value + " not in log");
      } else if (e.kind == EvidenceKind::arn) {
        try {
          Arn::parse(e.value);
        } catch (const ParseError&) {
          problems.push_back(f.finding_id + ": unparsable ARN " + e.value);
        }
      }
    }
  }
  if (!cloud::dangling_references(b.environment).empty()) problems.push_back("environment has dangling references");
  return problems;
}

}  // namespace irbench::scenario
