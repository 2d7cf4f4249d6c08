#pragma once

// Primitives that take formal ids. All are pure reads over a frozen store.

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "satgraph/canonical.hpp"
#include "satgraph/diff.hpp"
#include "satgraph/store.hpp"
#include "satgraph/text.hpp"

namespace satgraph {

inline const std::string kCanonicalAspect = "canonical";

inline Json get_entity(const GraphStore& s, EntityKind kind, const EntityId& id) {
  switch (kind) {
    case EntityKind::kItem: return to_json(s.item(id));
    case EntityKind::kTheme: return to_json(s.theme(id));
    case EntityKind::kVersion: return to_json(s.version(id));
    case EntityKind::kAction: return to_json(s.action(id));
  }
  fail(ErrorCode::kInvalidArgument, "unknown entity kind");
}

inline const Version& get_valid_version(const GraphStore& s, const EntityId& item_id, Date t) {
  s.item(item_id);
  const Version* v = s.lookup_valid_version(item_id, t);
  if (!v) {
    fail(ErrorCode::kNoValidVersion, "item '" + item_id + "' has no version valid on " + t.iso(),
         {{"item_id", item_id}, {"timestamp", t.iso()}});
  }
  return *v;
}

inline const TextUnit& get_text_for_version(const GraphStore& s, const EntityId& version_id,
                                            const std::string& language) {
  s.version(version_id);
  const TextUnit* t = s.text_unit(version_id, language, kCanonicalAspect);
  if (!t || t->source_node_type != NodeType::kVersion) {
    fail(ErrorCode::kNoTextUnit, "version '" + version_id + "' has no canonical text in '" + language + "'",
         {{"version_id", version_id}, {"language", language}});
  }
  return *t;
}

// Pre-order descendants of root (root excluded). depth <= 0 or absent means
// unbounded. DAG kinds report each node once, at its first visit.
inline std::vector<EntityId> get_hierarchy(const GraphStore& s, HierarchyKind kind, const EntityId& root,
                                           std::optional<int> depth) {
  std::function<const std::vector<EntityId>&(const EntityId&)> children;
  switch (kind) {
    case HierarchyKind::kItem:
      s.item(root);
      children = [&](const EntityId& id) -> const std::vector<EntityId>& { return s.item(id).children; };
      break;
    case HierarchyKind::kTheme:
      s.theme(root);
      children = [&](const EntityId& id) -> const std::vector<EntityId>& { return s.theme_children(id); };
      break;
    case HierarchyKind::kVersion:
      s.version(root);
      children = [&](const EntityId& id) -> const std::vector<EntityId>& { return s.version_children(id); };
      break;
    case HierarchyKind::kItemType:
      s.item_type(root);
      children = [&](const EntityId& id) -> const std::vector<EntityId>& { return s.item_type_children(id); };
      break;
  }
  const int limit = depth && *depth > 0 ? *depth : -1;
  std::vector<EntityId> out;
  std::unordered_set<EntityId> seen{root};
  // Explicit stack of (node, level) keeps deep item trees off the call stack.
  std::vector<std::pair<const EntityId*, int>> stack;
  auto push_children = [&](const EntityId& id, int level) {
    if (limit >= 0 && level >= limit) return;
    const auto& ch = children(id);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.emplace_back(&*it, level + 1);
  };
  push_children(root, 0);
  while (!stack.empty()) {
    auto [id, level] = stack.back();
    stack.pop_back();
    if (!seen.insert(*id).second) continue;
    out.push_back(*id);
    push_children(*id, level);
  }
  return out;
}

inline std::vector<Item> get_item_ancestors(const GraphStore& s, const EntityId& item_id) {
  std::vector<Item> out;
  const Item* cur = &s.item(item_id);
  while (cur->parent) {
    const Item& p = s.item(*cur->parent);
    if (p.kind == ItemKind::kWork) break;
    out.push_back(p);
    cur = &p;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline std::vector<Theme> get_themes_for_item(const GraphStore& s, const EntityId& item_id) {
  s.item(item_id);
  std::vector<Theme> out;
  for (const Theme* t : s.themes_with_member(item_id)) out.push_back(*t);
  return out;
}

inline std::vector<Action> get_item_history(const GraphStore& s, const EntityId& item_id) {
  s.item(item_id);
  std::vector<Action> out;
  for (const Action* a : s.actions_for_item(item_id)) out.push_back(*a);
  return out;
}

inline CausalTrace trace_causality(const GraphStore& s, const EntityId& version_id) {
  s.version(version_id);
  const Action* created = s.producer_of(version_id);
  if (!created) {
    fail(ErrorCode::kMissingProvenance, "no action produces version '" + version_id + "'",
         {{"version_id", version_id}});
  }
  CausalTrace out{*created, std::nullopt};
  if (const Action* t = s.terminator_of(version_id)) out.terminating_action = *t;
  return out;
}

inline std::vector<Version> get_versions_in_interval(const GraphStore& s, const std::vector<EntityId>& item_ids,
                                                     Date start, Date end) {
  if (item_ids.empty()) fail(ErrorCode::kInvalidArgument, "item_ids must name at least one item");
  if (end < start) {
    fail(ErrorCode::kInvalidInterval, "start_date " + start.iso() + " is after end_date " + end.iso(),
         {{"start_date", start.iso()}, {"end_date", end.iso()}});
  }
  for (const auto& id : item_ids) s.item(id);
  std::vector<const Version*> hits;
  std::set<EntityId> done;
  for (const auto& id : item_ids) {
    if (!done.insert(id).second) continue;
    for (const Version* v : s.versions_of(id)) {
      if (v->validity_interval.start > end) break;
      if (v->validity_interval.overlaps_closed(start, end)) hits.push_back(v);
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Version* a, const Version* b) {
    return std::tie(a->validity_interval.start, a->item, a->id) < std::tie(b->validity_interval.start, b->item, b->id);
  });
  std::vector<Version> out;
  for (const Version* v : hits) out.push_back(*v);
  return out;
}

// Items whose versions list `version_id` as a parent.
inline std::set<EntityId> child_components(const GraphStore& s, const EntityId& version_id) {
  std::set<EntityId> out;
  for (const auto& child : s.version_children(version_id)) out.insert(s.version(child).item);
  return out;
}

inline TextDiffReport compare_versions(const GraphStore& s, const EntityId& a_id, const EntityId& b_id) {
  const Version& a = s.version(a_id);
  const Version& b = s.version(b_id);
  if (a_id == b_id) fail(ErrorCode::kInvalidArgument, "compareVersions needs two distinct versions");
  if (a.item != b.item) {
    fail(ErrorCode::kDifferentItems, "versions '" + a_id + "' and '" + b_id + "' belong to different items",
         {{"item_a", a.item}, {"item_b", b.item}});
  }
  std::optional<std::string> language;
  for (const TextUnit* t : s.texts_of(a_id)) {  // sorted by language
    if (t->aspect != kCanonicalAspect || t->source_node_type != NodeType::kVersion) continue;
    if (s.text_unit(b_id, t->language, kCanonicalAspect)) {
      language = t->language;
      break;
    }
  }
  if (!language) {
    fail(ErrorCode::kNoComparableText, "versions '" + a_id + "' and '" + b_id + "' share no canonical language",
         {{"version_a", a_id}, {"version_b", b_id}});
  }
  TextDiffReport r;
  r.version_a = a_id;
  r.version_b = b_id;
  r.language = *language;
  r.textual_edits = diff_tokens(text::whitespace_tokens(s.text_unit(a_id, *language, kCanonicalAspect)->content),
                                text::whitespace_tokens(s.text_unit(b_id, *language, kCanonicalAspect)->content));
  const auto ca = child_components(s, a_id);
  const auto cb = child_components(s, b_id);
  std::vector<std::pair<EntityId, StructuralChangeKind>> changes;
  for (const auto& x : cb) {
    if (!ca.count(x)) changes.emplace_back(x, StructuralChangeKind::kComponentAdded);
  }
  for (const auto& x : ca) {
    if (!cb.count(x)) changes.emplace_back(x, StructuralChangeKind::kComponentRemoved);
  }
  std::sort(changes.begin(), changes.end());
  for (auto& [item, kind] : changes) r.structural_changes.push_back({kind, item});
  return r;
}

inline std::vector<Action> get_actions_by_source(const GraphStore& s, const EntityId& work_id,
                                                 const std::optional<std::vector<std::string>>& action_types) {
  const Item& w = s.item(work_id);
  if (w.kind != ItemKind::kWork) {
    fail(ErrorCode::kNotAWork, "item '" + work_id + "' is not a Work", {{"item_id", work_id}});
  }
  std::set<std::string> types;
  if (action_types) types.insert(action_types->begin(), action_types->end());
  std::vector<Action> out;
  for (const Action* a : s.actions_by_source_work(work_id)) {
    if (!action_types || types.count(a->type)) out.push_back(*a);
  }
  return out;
}

inline TimeInterval get_temporal_coverage(const GraphStore& s, const EntityId& item_id) {
  s.item(item_id);
  const auto& vs = s.versions_of(item_id);
  if (vs.empty()) fail(ErrorCode::kNoVersions, "item '" + item_id + "' has no versions", {{"item_id", item_id}});
  TimeInterval out{vs.front()->validity_interval.start, std::nullopt};
  bool open = false;
  for (const Version* v : vs) {
    if (!v->validity_interval.end) open = true;
    else if (!out.end || *out.end < *v->validity_interval.end) out.end = v->validity_interval.end;
  }
  if (open) out.end.reset();
  return out;
}

inline std::vector<std::string> get_available_languages(const GraphStore& s) { return s.languages(); }

inline std::vector<std::string> get_supported_action_types(const GraphStore& s) {
  std::set<std::string> types(s.corpus().ontology.action_types.begin(), s.corpus().ontology.action_types.end());
  return {types.begin(), types.end()};
}

inline std::vector<Theme> get_root_themes(const GraphStore& s) {
  std::vector<Theme> out;
  for (const Theme* t : s.root_themes()) out.push_back(*t);
  return out;
}

// ---------------------------------------------------------------------------
// Batch variants: misses are dropped, order of found inputs is kept.

inline Json get_batch(const GraphStore& s, EntityKind kind, const std::vector<EntityId>& ids) {
  Json out = Json::array();
  for (const auto& id : ids) {
    switch (kind) {
      case EntityKind::kItem:
        if (auto* p = s.find_item(id)) out.push_back(to_json(*p));
        break;
      case EntityKind::kTheme:
        if (auto* p = s.find_theme(id)) out.push_back(to_json(*p));
        break;
      case EntityKind::kVersion:
        if (auto* p = s.find_version(id)) out.push_back(to_json(*p));
        break;
      case EntityKind::kAction:
        if (auto* p = s.find_action(id)) out.push_back(to_json(*p));
        break;
    }
  }
  return out;
}

inline std::vector<Version> get_batch_valid_versions(const GraphStore& s, const std::vector<EntityId>& item_ids,
                                                     Date t) {
  std::vector<Version> out;
  for (const auto& id : item_ids) {
    if (!s.find_item(id)) continue;
    if (const Version* v = s.lookup_valid_version(id, t)) out.push_back(*v);
  }
  return out;
}

struct TextUnitRequest {
  NodeType source_node_type = NodeType::kVersion;
  EntityId source_node_id;
  std::string language;
  std::optional<std::vector<std::string>> aspects;
};

inline std::vector<TextUnit> get_batch_text_units(const GraphStore& s, const std::vector<TextUnitRequest>& requests) {
  std::vector<TextUnit> out;
  static const std::vector<std::string> kDefaultAspects{kCanonicalAspect};
  for (const auto& r : requests) {
    for (const auto& aspect : r.aspects ? *r.aspects : kDefaultAspects) {
      const TextUnit* t = s.text_unit(r.source_node_id, r.language, aspect);
      if (t && t->source_node_type == r.source_node_type) out.push_back(*t);
    }
  }
  return out;
}

}  // namespace satgraph
