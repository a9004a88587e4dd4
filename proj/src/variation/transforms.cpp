// SPDX-License-Identifier: Apache-2.0
#include "irbench/variation/transforms.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace irbench::variation {

using scenario::AttackStep;
using scenario::ScenarioSpec;
using A = cloud::ActionType;

std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::rename_resources: return "rename_resources";
    case Transform::shift_region: return "shift_region";
    case Transform::shift_timeline: return "shift_timeline";
    case Transform::swap_technique: return "swap_technique";
  }
  return "?";
}

Transform transform_from_string(std::string_view text) {
  for (auto t : {Transform::rename_resources, Transform::shift_region, Transform::shift_timeline,
                 Transform::swap_technique}) {
    if (to_string(t) == text) return t;
  }
  throw ValidationError("transforms", "unknown transform '" + std::string(text) + "'");
}

namespace {

constexpr std::array<std::string_view, 16> kFirst = {
    "a", "b", "c", "d", "e", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s"};
constexpr std::array<std::string_view, 16> kLast = {
    "moreno", "lindqvist", "achebe", "tanaka", "kovacs", "oduya", "marchetti", "dubois",
    "sorensen", "ibrahim", "castillo", "yamada", "petrov", "mensah", "varga", "holm"};
constexpr std::array<std::string_view, 12> kTeams = {
    "orion", "atlas", "vega", "lyra", "draco", "cygnus", "hydra", "pavo", "corvus", "lynx",
    "carina", "aquila"};
constexpr std::array<std::string_view, 10> kRoles = {
    "runner", "agent", "operator", "worker", "relay", "broker", "loader", "svc", "daemon",
    "bridge"};
constexpr std::array<std::string_view, 8> kBuckets = {
    "vault", "store", "depot", "drop", "cache", "share", "lake", "bin"};
constexpr std::array<std::string_view, 12> kKeyWords = {
    "batch", "record", "dump", "bundle", "slice", "report", "table", "sheet", "chunk", "part",
    "block", "entry"};
constexpr std::array<std::string_view, 8> kRegions = {
    "us-east-1", "us-east-2", "us-west-2", "eu-west-1", "eu-central-1", "ap-southeast-2",
    "ap-northeast-1", "ca-central-1"};

template <std::size_t N>
std::string pick(Rng& rng, const std::array<std::string_view, N>& words) {
  return std::string(words[rng.below(N)]);
}

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
}

// Replaces whole-name occurrences only, longest names first.
std::string replace_names(const std::string& text, const std::vector<std::pair<std::string, std::string>>& by_length) {
  std::string out = text;
  for (const auto& [from, to] : by_length) {
    std::size_t pos = 0;
    while ((pos = out.find(from, pos)) != std::string::npos) {
      const std::size_t end = pos + from.size();
      const bool left = pos == 0 || !name_char(out[pos - 1]);
      const bool right = end == out.size() || !name_char(out[end]);
      if (left && right) {
        out.replace(pos, from.size(), to);
        pos += to.size();
      } else {
        pos = end;
      }
    }
  }
  return out;
}

bool is_alpha_word(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
}

// Rewrites the alphabetic segments of an object key, keeping separators,
// numbers, "{rep}" and the extension.
std::string rename_key(const std::string& key, std::map<std::string, std::string>& words, Rng& rng,
                       std::set<std::string>& used) {
  const auto dot = key.rfind('.');
  const std::string stem = dot == std::string::npos ? key : key.substr(0, dot);
  const std::string ext = dot == std::string::npos ? "" : key.substr(dot);
  std::string out;
  std::string seg;
  const auto flush = [&] {
    if (is_alpha_word(seg)) {
      auto it = words.find(seg);
      if (it == words.end()) {
        std::string w;
        do {
          w = pick(rng, kKeyWords) + rng.chars("abcdefghijklmnopqrstuvwxyz", 2);
        } while (!used.insert(w).second);
        it = words.emplace(seg, w).first;
      }
      out += it->second;
    } else {
      out += seg;
    }
    seg.clear();
  };
  for (std::size_t i = 0; i < stem.size(); ++i) {
    const char c = stem[i];
    if (c == '{') {
      flush();
      const auto close = stem.find('}', i);
      out += stem.substr(i, close - i + 1);
      i = close;
    } else if (c == '/' || c == '-' || c == '_' || std::isdigit(static_cast<unsigned char>(c))) {
      flush();
      out += c;
    } else {
      seg += c;
    }
  }
  flush();
  return out + ext;
}

enum class NameKind { person, service, role, bucket, group_id, group_name, instance_id, instance_name };

}  // namespace

std::vector<std::string> resource_names(const ScenarioSpec& spec) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  const auto add = [&](const std::string& n) {
    if (!n.empty() && seen.insert(n).second) out.push_back(n);
  };
  const auto& e = spec.env_spec;
  for (const auto& u : e.users) add(u.name);
  for (const auto& r : e.roles) add(r.name);
  for (const auto& b : e.buckets) add(b.name);
  for (const auto& g : e.security_groups) {
    add(g.group_id);
    add(g.name);
  }
  for (const auto& i : e.instances) {
    add(i.instance_id);
    add(i.name);
  }
  for (const auto& s : spec.steps) {
    if (s.action.type == A::CreateUser) {
      if (auto it = s.action.params.find("userName"); it != s.action.params.end()) add(it->second);
    }
  }
  return out;
}

ScenarioSpec rename_resources(const ScenarioSpec& spec, Rng& rng, RenameMap* map_out) {
  const auto originals = resource_names(spec);
  std::map<std::string, NameKind> kinds;
  const auto& e = spec.env_spec;
  for (const auto& u : e.users) kinds[u.name] = u.name.find('.') != std::string::npos ? NameKind::person : NameKind::service;
  for (const auto& r : e.roles) kinds[r.name] = NameKind::role;
  for (const auto& b : e.buckets) kinds[b.name] = NameKind::bucket;
  for (const auto& g : e.security_groups) {
    kinds[g.group_id] = NameKind::group_id;
    kinds[g.name] = NameKind::group_name;
  }
  for (const auto& i : e.instances) {
    kinds[i.instance_id] = NameKind::instance_id;
    kinds[i.name] = NameKind::instance_name;
  }
  for (const auto& n : originals) kinds.try_emplace(n, NameKind::service);

  std::set<std::string> used(originals.begin(), originals.end());
  const auto leaks = [&](const std::string& alias) {
    return std::any_of(originals.begin(), originals.end(),
                       [&](const std::string& o) { return alias.find(o) != std::string::npos; });
  };
  RenameMap map;
  for (const auto& n : originals) {
    std::string alias;
    do {
      switch (kinds[n]) {
        case NameKind::person: alias = pick(rng, kFirst) + "." + pick(rng, kLast); break;
        case NameKind::service: alias = pick(rng, kTeams) + "-" + pick(rng, kRoles) + "-" + rng.hex(4); break;
        case NameKind::role: alias = pick(rng, kTeams) + "-" + pick(rng, kRoles) + "-role-" + rng.hex(3); break;
        case NameKind::bucket: alias = pick(rng, kTeams) + "-" + pick(rng, kBuckets) + "-" + rng.hex(6); break;
        case NameKind::group_id: alias = "sg-" + rng.hex(17); break;
        case NameKind::group_name: alias = pick(rng, kTeams) + "-sg-" + rng.hex(4); break;
        case NameKind::instance_id: alias = "i-" + rng.hex(17); break;
        case NameKind::instance_name: alias = pick(rng, kTeams) + "-node-" + std::to_string(rng.between(1, 40)); break;
      }
    } while (leaks(alias) || !used.insert(alias).second);
    map[n] = alias;
  }

  std::vector<std::pair<std::string, std::string>> by_length(map.begin(), map.end());
  std::stable_sort(by_length.begin(), by_length.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  const auto sub = [&](const std::string& s) { return replace_names(s, by_length); };
  const auto exact = [&](const std::string& s) {
    auto it = map.find(s);
    return it == map.end() ? s : it->second;
  };
  std::map<std::string, std::string> key_words;
  std::set<std::string> used_words;

  ScenarioSpec out = spec;
  auto& env = out.env_spec;
  for (auto& u : env.users) u.name = exact(u.name);
  for (auto& r : env.roles) {
    r.name = exact(r.name);
    for (auto& t : r.trusted) t.name = exact(t.name);
  }
  for (auto& b : env.buckets) {
    b.name = exact(b.name);
    for (auto& o : b.objects) o.key = rename_key(o.key, key_words, rng, used_words);
  }
  for (auto& g : env.security_groups) {
    g.group_id = exact(g.group_id);
    g.name = exact(g.name);
  }
  for (auto& i : env.instances) {
    i.instance_id = exact(i.instance_id);
    i.name = exact(i.name);
    if (i.profile_role) i.profile_role = exact(*i.profile_role);
    for (auto& g : i.security_groups) g = exact(g);
  }
  for (auto& s : out.steps) {
    s.actor.user = exact(s.actor.user);
    s.actor.role = exact(s.actor.role);
    s.actor.credential = sub(s.actor.credential);
    for (auto& [k, v] : s.action.params) {
      v = k == "key" ? rename_key(v, key_words, rng, used_words) : sub(v);
    }
  }
  if (map_out) *map_out = std::move(map);
  return out;
}

ScenarioSpec shift_region(const ScenarioSpec& spec, const std::string& region) {
  ScenarioSpec out = spec;
  out.env_spec.region = region;
  return out;
}

ScenarioSpec shift_timeline(const ScenarioSpec& spec, DurationMs delta) {
  ScenarioSpec out = spec;
  out.start_time += delta;
  out.env_spec.provisioned_at += delta;
  return out;
}

const std::vector<TechniqueSwap>& technique_swaps() {
  using C = Category;
  static const std::vector<TechniqueSwap> table = [] {
    const std::vector<TechniqueSwap> pairs = {
        {A::GetObject, A::SelectObjectContent, {C::unauthorized_access, C::misconfiguration, C::malicious_file_execution}},
        {A::ListObjects, A::ListObjectsV2, {C::unauthorized_access, C::misconfiguration, C::malicious_file_execution}},
        {A::ListUsers, A::GetAccountAuthorizationDetails, {C::brute_force, C::unauthorized_access}},
        {A::AuthorizeSecurityGroupIngress, A::ModifySecurityGroupRules, {C::misconfiguration, C::malicious_file_execution}},
        {A::SendCommand, A::CreateAssociation, {C::malicious_file_execution}},
    };
    std::vector<TechniqueSwap> both;
    for (const auto& p : pairs) {
      both.push_back(p);
      both.push_back({p.to, p.from, p.categories});
    }
    return both;
  }();
  return table;
}

ScenarioSpec swap_technique(const ScenarioSpec& spec, Rng& rng) {
  std::map<A, A> options;
  for (const auto& sw : technique_swaps()) {
    if (std::find(sw.categories.begin(), sw.categories.end(), spec.category) == sw.categories.end()) continue;
    for (const auto& s : spec.steps) {
      if (!s.triggers_alert && s.action.type == sw.from) options.emplace(sw.from, sw.to);
    }
  }
  if (options.empty()) {
    throw TransformError(Transform::swap_technique,
                         "no registered alternative technique for any step of '" + spec.scenario_id + "'");
  }
  auto it = options.begin();
  std::advance(it, static_cast<long>(rng.below(options.size())));
  ScenarioSpec out = spec;
  for (auto& s : out.steps) {
    if (!s.triggers_alert && s.action.type == it->first) s.action.type = it->second;
  }
  return out;
}

ScenarioSpec apply_transform(const ScenarioSpec& spec, Transform t, Rng& rng) {
  switch (t) {
    case Transform::rename_resources: return rename_resources(spec, rng);
    case Transform::shift_region: {
      std::string region;
      do {
        region = pick(rng, kRegions);
      } while (region == spec.env_spec.region);
      return shift_region(spec, region);
    }
    case Transform::shift_timeline: {
      const DurationMs delta = rng.between(-240, 240) * kDay + rng.between(0, 24 * 60 - 1) * kMinute +
                               rng.between(0, 59) * kSecond;
      return shift_timeline(spec, delta);
    }
    case Transform::swap_technique: return swap_technique(spec, rng);
  }
  return spec;
}

std::vector<ScenarioSpec> generate_variations(const VariationPlan& plan) {
  if (plan.count < 1) throw ValidationError("count", "must be >= 1");
  if (plan.transforms.empty()) throw ValidationError("transforms", "must not be empty");
  std::vector<ScenarioSpec> out;
  for (int i = 0; i < plan.count; ++i) {
    Rng rng(mix64(plan.rng_seed ^ mix64(static_cast<std::uint64_t>(i) + 1)));
    ScenarioSpec s = plan.seed_case;
    for (auto t : plan.transforms) {
      s = apply_transform(s, t, rng);
      s.lineage.emplace_back(to_string(t));
    }
    s.scenario_id = plan.seed_case.scenario_id + "-v" + std::to_string(i + 1);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace irbench::variation
