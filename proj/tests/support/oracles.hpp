// SPDX-License-Identifier: Apache-2.0
// Reference implementations the library is checked against. They are
// written from the documented semantics, not from the library code, and
// favour obviousness over speed.
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "irbench/core/rng.hpp"
#include "irbench/scenario/spec.hpp"
#include "irbench/telemetry/event_log.hpp"
#include "irbench/telemetry/query.hpp"

namespace irbench::oracle {

inline const std::string kAccount = "111122223333";

inline std::vector<Arn> sample_users() {
  return {Arn::iam_user(kAccount, "alice"), Arn::iam_user(kAccount, "bob"), Arn::iam_user(kAccount, "carol"),
          Arn::iam_user(kAccount, "deploy-bot")};
}
inline std::vector<Arn> sample_roles() {
  return {Arn::iam_role(kAccount, "Admin"), Arn::iam_role(kAccount, "ReadOnly")};
}
inline std::vector<std::string> sample_buckets() { return {"finance-data", "web-assets", "logs-archive"}; }
inline std::vector<std::string> sample_keys() { return {"AKIAAAAA1111", "AKIABBBB2222", "ASIACCCC3333"}; }
inline std::vector<std::string> sample_names() {
  return {"ConsoleLogin", "GetObject", "ListBuckets", "AssumeRole", "CreateUser", "SendCommand", "ListUsers"};
}

template <typename T>
const T& any_of(Rng& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

// Time-ordered log with ties, mixed identities and resource parameters.
inline telemetry::EventLog random_log(Rng& rng, std::size_t n, Timestamp start = 1'700'000'000'000) {
  telemetry::EventLog log;
  Timestamp t = start;
  const auto users = sample_users();
  const auto roles = sample_roles();
  for (std::size_t i = 0; i < n; ++i) {
    t += rng.chance(1, 4) ? 0 : rng.between(1, 5000);
    telemetry::CloudEvent e;
    e.event_id = "ev-" + std::to_string(i);
    e.event_time = t;
    e.event_name = any_of(rng, sample_names());
    e.event_source = "test.amazonaws.com";
    e.region = "us-east-1";
    e.source_ip = "10.0.0." + std::to_string(rng.below(5));
    switch (rng.below(3)) {
      case 0:
        e.user_identity.kind = telemetry::IdentityKind::iam_user;
        e.user_identity.arn = any_of(rng, users);
        if (rng.chance(1, 2)) e.user_identity.access_key_id = any_of(rng, sample_keys());
        break;
      case 1:
        e.user_identity.kind = telemetry::IdentityKind::assumed_role;
        e.user_identity.arn = any_of(rng, roles);
        e.user_identity.access_key_id = any_of(rng, sample_keys());
        break;
      default:
        break;
    }
    if (rng.chance(1, 2)) e.request_parameters["bucketName"] = any_of(rng, sample_buckets());
    if (rng.chance(1, 3)) e.request_parameters["userName"] = any_of(rng, users).resource_name();
    if (rng.chance(1, 4)) e.request_parameters["roleArn"] = any_of(rng, roles).render();
    if (rng.chance(1, 5)) e.response_elements["userArn"] = any_of(rng, users).render();
    log.append(std::move(e));
  }
  return log;
}

inline telemetry::EventQuery random_query(Rng& rng, const telemetry::EventLog& log) {
  telemetry::EventQuery q = telemetry::whole_log_query(log);
  if (!log.empty() && rng.chance(1, 2)) {
    const Timestamp lo = log[0].event_time, hi = log[log.size() - 1].event_time + 1;
    Timestamp a = rng.between(lo - 10, hi + 10), b = rng.between(lo - 10, hi + 10);
    if (a > b) std::swap(a, b);
    q.start = a;
    q.end = b;
  }
  if (rng.chance(1, 3)) q.event_name = any_of(rng, sample_names());
  if (rng.chance(1, 3)) {
    switch (rng.below(3)) {
      case 0: q.principal = any_of(rng, sample_users()).render(); break;
      case 1: q.principal = any_of(rng, sample_roles()).render(); break;
      default: q.principal = any_of(rng, sample_keys()); break;
    }
  }
  if (rng.chance(1, 3)) {
    switch (rng.below(3)) {
      case 0: q.resource = Arn::bucket(kAccount, any_of(rng, sample_buckets())); break;
      case 1: q.resource = any_of(rng, sample_users()); break;
      default: q.resource = any_of(rng, sample_roles()); break;
    }
  }
  q.max_results = static_cast<int>(rng.between(1, 60));
  return q;
}

// The parameter under which an event names this resource by short name.
inline std::string short_name_key(const Arn& r) {
  if (r.service == "s3" && r.resource_path.size() == 1) return "bucketName";
  if (r.service == "iam" && r.resource_type() == "user") return "userName";
  if (r.service == "iam" && r.resource_type() == "role") return "roleName";
  if (r.service == "ec2" && r.resource_type() == "instance") return "instanceId";
  if (r.service == "ec2" && r.resource_type() == "security-group") return "groupId";
  return "";
}

inline bool names(const telemetry::FieldMap& fields, const Arn& r) {
  const std::string full = r.render();
  for (const auto& [k, v] : fields) {
    if (v == full) return true;
  }
  const std::string key = short_name_key(r);
  auto it = fields.find(key);
  return !key.empty() && it != fields.end() && it->second == r.resource_name();
}

// Linear scan over every event; returns matching ids in log order.
inline std::vector<std::string> scan_query(const telemetry::EventLog& log, const telemetry::EventQuery& q) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& e = log[i];
    if (e.event_time < q.start || e.event_time >= q.end) continue;
    if (q.event_name && *q.event_name != e.event_name) continue;
    if (q.principal) {
      const bool arn = e.user_identity.arn && e.user_identity.arn->render() == *q.principal;
      const bool key = e.user_identity.access_key_id == q.principal;
      if (!arn && !key) continue;
    }
    if (q.resource && !names(e.request_parameters, *q.resource) && !names(e.response_elements, *q.resource)) continue;
    out.push_back(e.event_id);
  }
  return out;
}

// Memoised recursion over suffixes; a different formulation from the
// library's table.
inline std::size_t brute_lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size() || j == b.size()) return 0;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = a[i] == b[j] ? 1 + self(self, i + 1, j + 1) : std::max(self(self, i + 1, j), self(self, i, j + 1));
    memo[key] = best;
    return best;
  };
  return rec(rec, 0, 0);
}

inline double brute_rouge(const std::vector<std::string>& ref, const std::vector<std::string>& cand) {
  if (ref.empty() || cand.empty()) return 0.0;
  const double l = static_cast<double>(brute_lcs(ref, cand));
  if (l == 0) return 0.0;
  const double p = l / cand.size(), r = l / ref.size();
  return 2 * p * r / (p + r);
}

// Lowercase alphanumeric words, so tokenization leaves them untouched.
inline std::vector<std::string> random_words(Rng& rng, std::size_t n, std::size_t vocabulary) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(rng.below(vocabulary)));
  return out;
}

inline std::string join(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

// Valid step DAG: dependencies point to earlier steps and every dependent
// starts after its dependencies' last repetition.
inline std::vector<scenario::AttackStep> random_dag(Rng& rng, std::size_t n) {
  std::vector<scenario::AttackStep> steps;
  for (std::size_t i = 0; i < n; ++i) {
    scenario::AttackStep s;
    s.step_id = "s" + std::to_string(i);
    s.action = {cloud::ActionType::ListBuckets, {}};
    s.repeat = static_cast<int>(rng.between(1, 4));
    s.interval = s.repeat > 1 ? rng.between(1, 120'000) : 0;
    DurationMs earliest = 0;
    if (i > 0) {
      const auto deps = rng.below(3);
      for (std::uint64_t d = 0; d < deps; ++d) {
        const auto& dep = steps[rng.below(i)];
        if (std::find(s.depends_on.begin(), s.depends_on.end(), dep.step_id) != s.depends_on.end()) continue;
        s.depends_on.push_back(dep.step_id);
        earliest = std::max(earliest, dep.last_offset() + 1);
      }
    }
    s.offset = earliest + rng.between(0, 3'600'000);
    steps.push_back(std::move(s));
  }
  return steps;
}

}  // namespace irbench::oracle
