#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "satgraph/canonical.hpp"
#include "satgraph/model.hpp"

namespace satgraph {

struct Violation {
  std::string invariant;
  std::vector<EntityId> ids;  // offending ids; ids[0] is the sort key
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view invariant) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.invariant == invariant; });
  }
};

inline Json to_json(const Violation& v) {
  Json j = Json::object();
  j["invariant"] = v.invariant;
  j["ids"] = id_list(v.ids);
  j["message"] = v.message;
  return j;
}

inline Json to_json(const ValidationReport& r) {
  Json j = Json::object();
  j["ok"] = r.ok();
  j["violations"] = to_json_list(r.violations);
  return j;
}

namespace detail {

class ReportBuilder {
 public:
  void add(std::string invariant, std::vector<EntityId> ids, std::string message) {
    out_.push_back({std::move(invariant), std::move(ids), std::move(message)});
  }

  ValidationReport finish() {
    std::sort(out_.begin(), out_.end(), [](const Violation& a, const Violation& b) {
      const EntityId& ia = a.ids.empty() ? kEmpty : a.ids[0];
      const EntityId& ib = b.ids.empty() ? kEmpty : b.ids[0];
      return std::tie(a.invariant, ia, a.ids, a.message) < std::tie(b.invariant, ib, b.ids, b.message);
    });
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return {std::move(out_)};
  }

 private:
  inline static const EntityId kEmpty;
  std::vector<Violation> out_;
};

template <typename T>
std::unordered_map<EntityId, const T*> index_by_id(const std::vector<T>& xs) {
  std::unordered_map<EntityId, const T*> out;
  for (const auto& x : xs) out.emplace(x.id, &x);
  return out;
}

template <typename T>
void check_ids(const std::vector<T>& xs, const char* kind, ReportBuilder& r) {
  std::map<EntityId, int> seen;
  for (const auto& x : xs) {
    if (x.id.empty()) r.add("id-nonempty", {x.id}, std::string(kind) + " with empty id");
    ++seen[x.id];
  }
  for (const auto& [id, n] : seen) {
    if (n > 1 && !id.empty()) r.add("id-unique", {id}, std::string(kind) + " id used " + std::to_string(n) + " times");
  }
}

// Reports every node that lies on a cycle of the parent relation.
inline void check_acyclic(const std::vector<EntityId>& nodes,
                          const std::function<std::vector<EntityId>(const EntityId&)>& parents_of,
                          const std::string& invariant, ReportBuilder& r) {
  enum class Mark { kNone, kActive, kDone };
  std::unordered_map<EntityId, Mark> mark;
  std::set<EntityId> on_cycle;
  std::vector<EntityId> stack;
  std::function<void(const EntityId&)> visit = [&](const EntityId& n) {
    mark[n] = Mark::kActive;
    stack.push_back(n);
    for (const auto& p : parents_of(n)) {
      const Mark m = mark.count(p) ? mark[p] : Mark::kNone;
      if (m == Mark::kActive) {
        auto it = std::find(stack.begin(), stack.end(), p);
        on_cycle.insert(it, stack.end());
      } else if (m == Mark::kNone) {
        visit(p);
      }
    }
    stack.pop_back();
    mark[n] = Mark::kDone;
  };
  for (const auto& n : nodes) {
    if (!mark.count(n)) visit(n);
  }
  for (const auto& n : on_cycle) r.add(invariant, {n}, "node lies on a cycle");
}

}  // namespace detail

// Checks every corpus invariant. Violations are data: the report is empty iff
// the corpus is acceptable, and is sorted by (invariant, first offending id).
inline ValidationReport validate_corpus(const Corpus& c) {
  detail::ReportBuilder r;
  detail::check_ids(c.items, "item", r);
  detail::check_ids(c.themes, "theme", r);
  detail::check_ids(c.versions, "version", r);
  detail::check_ids(c.actions, "action", r);
  detail::check_ids(c.text_units, "text unit", r);
  detail::check_ids(c.ontology.item_types, "item type", r);

  const auto items = detail::index_by_id(c.items);
  const auto themes = detail::index_by_id(c.themes);
  const auto versions = detail::index_by_id(c.versions);
  const auto actions = detail::index_by_id(c.actions);
  const auto item_types = detail::index_by_id(c.ontology.item_types);
  const std::set<std::string> action_types(c.ontology.action_types.begin(), c.ontology.action_types.end());

  // Items: forest rooted at Works with consistent back-pointers.
  for (const auto& i : c.items) {
    if (i.kind == ItemKind::kWork && i.parent) {
      r.add("work-has-no-parent", {i.id, *i.parent}, "a Work must not have a parent");
    }
    if (i.kind == ItemKind::kWorkComponent && !i.parent) {
      r.add("component-has-parent", {i.id}, "a WorkComponent must have a parent");
    }
    if (i.parent && !items.count(*i.parent)) {
      r.add("item-parent-exists", {i.id, *i.parent}, "parent item does not exist");
    }
    if (i.parent && items.count(*i.parent)) {
      const auto& siblings = items.at(*i.parent)->children;
      if (std::find(siblings.begin(), siblings.end(), i.id) == siblings.end()) {
        r.add("item-children-consistent", {i.id, *i.parent}, "parent does not list this item as a child");
      }
    }
    std::set<EntityId> seen_children;
    for (const auto& ch : i.children) {
      auto it = items.find(ch);
      if (it == items.end()) {
        r.add("item-children-consistent", {i.id, ch}, "child item does not exist");
      } else if (it->second->parent != i.id) {
        r.add("item-children-consistent", {i.id, ch}, "child does not point back to this parent");
      }
      if (!seen_children.insert(ch).second) {
        r.add("item-children-consistent", {i.id, ch}, "child listed twice");
      }
    }
    if (!item_types.count(i.type_id)) {
      r.add("item-type-exists", {i.id, i.type_id}, "type_id is not in the item-type taxonomy");
    }
  }
  {
    std::vector<EntityId> ids;
    for (const auto& i : c.items) ids.push_back(i.id);
    detail::check_acyclic(
        ids,
        [&](const EntityId& id) -> std::vector<EntityId> {
          auto it = items.find(id);
          if (it == items.end() || !it->second->parent || !items.count(*it->second->parent)) return {};
          return {*it->second->parent};
        },
        "item-forest-acyclic", r);
  }

  // Item-type taxonomy.
  for (const auto& t : c.ontology.item_types) {
    for (const auto& p : t.parents) {
      if (!item_types.count(p)) r.add("item-type-parent-exists", {t.id, p}, "parent item type does not exist");
    }
  }
  {
    std::vector<EntityId> ids;
    for (const auto& t : c.ontology.item_types) ids.push_back(t.id);
    detail::check_acyclic(
        ids,
        [&](const EntityId& id) -> std::vector<EntityId> {
          std::vector<EntityId> out;
          auto it = item_types.find(id);
          if (it == item_types.end()) return out;
          for (const auto& p : it->second->parents) {
            if (item_types.count(p)) out.push_back(p);
          }
          return out;
        },
        "item-type-dag-acyclic", r);
  }

  // Themes: DAG with consistent parent/child lists.
  for (const auto& t : c.themes) {
    for (const auto& p : t.parents) {
      auto it = themes.find(p);
      if (it == themes.end()) {
        r.add("theme-parent-exists", {t.id, p}, "parent theme does not exist");
      } else if (std::find(it->second->children.begin(), it->second->children.end(), t.id) ==
                 it->second->children.end()) {
        r.add("theme-links-consistent", {t.id, p}, "parent theme does not list this theme as a child");
      }
    }
    for (const auto& ch : t.children) {
      auto it = themes.find(ch);
      if (it == themes.end()) {
        r.add("theme-child-exists", {t.id, ch}, "child theme does not exist");
      } else if (std::find(it->second->parents.begin(), it->second->parents.end(), t.id) ==
                 it->second->parents.end()) {
        r.add("theme-links-consistent", {t.id, ch}, "child theme does not list this theme as a parent");
      }
    }
    for (const auto& m : t.members) {
      if (!items.count(m)) r.add("theme-member-exists", {t.id, m}, "member item does not exist");
    }
  }
  {
    std::vector<EntityId> ids;
    for (const auto& t : c.themes) ids.push_back(t.id);
    detail::check_acyclic(
        ids,
        [&](const EntityId& id) -> std::vector<EntityId> {
          std::vector<EntityId> out;
          auto it = themes.find(id);
          if (it == themes.end()) return out;
          for (const auto& p : it->second->parents) {
            if (themes.count(p)) out.push_back(p);
          }
          return out;
        },
        "theme-dag-acyclic", r);
  }

  // Versions: per-item disjoint half-open intervals, one open end at most.
  std::map<EntityId, std::vector<const Version*>> by_item;
  for (const auto& v : c.versions) {
    auto item_it = items.find(v.item);
    if (item_it == items.end()) {
      r.add("version-item-exists", {v.id, v.item}, "version refers to a missing item");
    } else {
      by_item[v.item].push_back(&v);
    }
    const auto& iv = v.validity_interval;
    if (iv.end && !(iv.start < *iv.end)) {
      r.add("version-interval-order", {v.id}, "validity start must precede end");
    }
    const bool is_work = item_it != items.end() && item_it->second->kind == ItemKind::kWork;
    if (is_work && !v.parents.empty()) {
      r.add("work-version-no-parents", {v.id}, "a Work's version must not have parent versions");
    }
    for (const auto& p : v.parents) {
      auto pit = versions.find(p);
      if (pit == versions.end()) {
        r.add("version-parent-exists", {v.id, p}, "parent version does not exist");
      } else if (!is_work && item_it != items.end() && pit->second->item != item_it->second->parent) {
        r.add("version-parent-structure", {v.id, p},
              "parent version must belong to the structural parent of this version's item");
      }
    }
  }
  for (auto& [item, vs] : by_item) {
    std::vector<EntityId> open;
    for (const auto* v : vs) {
      if (!v->validity_interval.end) open.push_back(v->id);
    }
    if (open.size() > 1) {
      std::sort(open.begin(), open.end());
      std::vector<EntityId> ids{item};
      ids.insert(ids.end(), open.begin(), open.end());
      r.add("open-ended-version-uniqueness", ids, "more than one open-ended version");
    }
    std::sort(vs.begin(), vs.end(), [](const Version* a, const Version* b) {
      return std::tie(a->validity_interval.start, a->id) < std::tie(b->validity_interval.start, b->id);
    });
    for (size_t i = 0; i < vs.size(); ++i) {
      for (size_t j = i + 1; j < vs.size(); ++j) {
        if (vs[j]->validity_interval.start > vs[i]->validity_interval.start &&
            vs[i]->validity_interval.end && *vs[i]->validity_interval.end <= vs[j]->validity_interval.start) {
          break;  // sorted by start: later versions cannot overlap vs[i] either
        }
        if (vs[i]->validity_interval.overlaps(vs[j]->validity_interval)) {
          r.add("version-interval-disjoint", {std::min(vs[i]->id, vs[j]->id), std::max(vs[i]->id, vs[j]->id)},
                "validity intervals of the same item overlap");
        }
      }
    }
  }

  // Actions: alignment of dates with the versions they touch.
  std::map<EntityId, std::vector<EntityId>> producers, terminators;
  for (const auto& a : c.actions) {
    if (a.produces_version) producers[*a.produces_version].push_back(a.id);
    if (a.terminates_version) terminators[*a.terminates_version].push_back(a.id);
    if (!action_types.count(a.type)) {
      r.add("action-type-supported", {a.id}, "action type '" + a.type + "' is not declared");
    }
    if (!a.terminates_version && !a.produces_version) {
      r.add("action-has-effect", {a.id}, "action neither terminates nor produces a version");
    }
    if (!versions.count(a.source_version)) {
      r.add("action-version-exists", {a.id, a.source_version}, "source version does not exist");
    }
    const Version* produced = nullptr;
    const Version* terminated = nullptr;
    if (a.produces_version) {
      auto it = versions.find(*a.produces_version);
      if (it == versions.end()) {
        r.add("action-version-exists", {a.id, *a.produces_version}, "produced version does not exist");
      } else {
        produced = it->second;
        if (produced->validity_interval.start != a.date) {
          r.add("action-produces-start-alignment", {a.id, produced->id},
                "produced version must start on the action date");
        }
      }
    }
    if (a.terminates_version) {
      auto it = versions.find(*a.terminates_version);
      if (it == versions.end()) {
        r.add("action-version-exists", {a.id, *a.terminates_version}, "terminated version does not exist");
      } else {
        terminated = it->second;
        if (terminated->validity_interval.end != a.date) {
          r.add("action-terminates-end-alignment", {a.id, terminated->id},
                "terminated version must end on the action date");
        }
      }
    }
    if (produced && terminated && produced->item != terminated->item) {
      r.add("action-same-item", {a.id, terminated->id, produced->id},
            "terminated and produced versions belong to different items");
    }
  }

  for (auto* m : {&producers, &terminators}) {
    const bool prod = m == &producers;
    for (auto& [vid, ids] : *m) {
      if (ids.size() < 2) continue;
      std::sort(ids.begin(), ids.end());
      std::vector<EntityId> all{vid};
      all.insert(all.end(), ids.begin(), ids.end());
      r.add(prod ? "version-single-producer" : "version-single-terminator", all,
            prod ? "version is produced by more than one action" : "version is terminated by more than one action");
    }
  }

  // TextUnits.
  std::map<std::tuple<EntityId, std::string, std::string>, std::vector<std::string>> slots;
  for (const auto& t : c.text_units) {
    bool exists = false;
    switch (t.source_node_type) {
      case NodeType::kItem: exists = items.count(t.source_node_id) > 0; break;
      case NodeType::kTheme: exists = themes.count(t.source_node_id) > 0; break;
      case NodeType::kVersion: exists = versions.count(t.source_node_id) > 0; break;
      case NodeType::kAction: exists = actions.count(t.source_node_id) > 0; break;
    }
    if (!exists) {
      r.add("textunit-source-exists", {t.id, t.source_node_id},
            "source node does not exist as a " + std::string(to_string(t.source_node_type)));
    }
    slots[{t.source_node_id, t.language, t.aspect}].push_back(t.id);
  }
  for (auto& [key, ids] : slots) {
    if (ids.size() > 1) {
      std::sort(ids.begin(), ids.end());
      r.add("textunit-unique-aspect", ids, "more than one text unit for (" + std::get<0>(key) + ", " +
                                               std::get<1>(key) + ", " + std::get<2>(key) + ")");
    }
  }
  return r.finish();
}

}  // namespace satgraph
