#pragma once

// Frozen, indexed graph store. Built once from a validated corpus; every
// accessor afterwards is a const read, so a store can be shared freely
// between threads.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "satgraph/canonical.hpp"
#include "satgraph/digest.hpp"
#include "satgraph/model.hpp"
#include "satgraph/text.hpp"
#include "satgraph/validate.hpp"

namespace satgraph {

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report)
      : Error(ErrorCode::kValidationFailed, summary(report),
              {{"violations", std::to_string(report.violations.size())}}),
        report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

 private:
  static std::string summary(const ValidationReport& r) {
    std::string s = "corpus violates " + std::to_string(r.violations.size()) + " invariant check(s)";
    if (!r.violations.empty()) s += "; first: " + r.violations.front().invariant;
    return s;
  }
  ValidationReport report_;
};

struct StoreCounts {
  size_t items = 0, themes = 0, versions = 0, actions = 0, text_units = 0;
  friend bool operator==(const StoreCounts&, const StoreCounts&) = default;
};

class GraphStore {
 public:
  using Ptr = std::shared_ptr<const GraphStore>;

  // Throws DuplicateId if any entity kind repeats an id, else
  // ValidationFailed (as ValidationError) if any other invariant fails.
  static Ptr load(Corpus corpus) {
    ValidationReport report = validate_corpus(corpus);
    for (const auto& v : report.violations) {
      if (v.invariant == "id-unique") {
        fail(ErrorCode::kDuplicateId, "duplicate id '" + v.ids.front() + "': " + v.message, {{"id", v.ids.front()}});
      }
    }
    if (!report.ok()) throw ValidationError(std::move(report));
    return Ptr(new GraphStore(std::move(corpus)));
  }

  GraphStore(const GraphStore&) = delete;
  GraphStore& operator=(const GraphStore&) = delete;

  const Corpus& corpus() const { return corpus_; }
  const std::string& digest() const { return digest_; }
  StoreCounts counts() const {
    return {corpus_.items.size(), corpus_.themes.size(), corpus_.versions.size(), corpus_.actions.size(),
            corpus_.text_units.size()};
  }

  const Item* find_item(const EntityId& id) const { return find(items_, id); }
  const Theme* find_theme(const EntityId& id) const { return find(themes_, id); }
  const Version* find_version(const EntityId& id) const { return find(versions_, id); }
  const Action* find_action(const EntityId& id) const { return find(actions_, id); }
  const ItemType* find_item_type(const EntityId& id) const { return find(item_types_, id); }

  const Item& item(const EntityId& id) const { return require(find_item(id), "item", id); }
  const Theme& theme(const EntityId& id) const { return require(find_theme(id), "theme", id); }
  const Version& version(const EntityId& id) const { return require(find_version(id), "version", id); }
  const Action& action(const EntityId& id) const { return require(find_action(id), "action", id); }
  const ItemType& item_type(const EntityId& id) const { return require(find_item_type(id), "item type", id); }

  // Versions of an item sorted by validity start.
  const std::vector<const Version*>& versions_of(const EntityId& item_id) const {
    return lookup(versions_by_item_, item_id);
  }

  // Binary search on start, then an end check. Per-item intervals are
  // disjoint, so the last version starting at or before t is the only
  // candidate.
  const Version* lookup_valid_version(const EntityId& item_id, Date t) const {
    const auto& vs = versions_of(item_id);
    auto it = std::upper_bound(vs.begin(), vs.end(), t,
                               [](Date d, const Version* v) { return d < v->validity_interval.start; });
    if (it == vs.begin()) return nullptr;
    const Version* v = *(it - 1);
    return v->validity_interval.contains(t) ? v : nullptr;
  }

  const std::vector<EntityId>& theme_children(const EntityId& id) const { return lookup(theme_children_, id); }
  const std::vector<EntityId>& item_type_children(const EntityId& id) const {
    return lookup(item_type_children_, id);
  }
  // Versions listing `id` as a parent, in the child items' document order.
  const std::vector<EntityId>& version_children(const EntityId& id) const { return lookup(version_children_, id); }
  const std::vector<const Theme*>& themes_with_member(const EntityId& item_id) const {
    return lookup(themes_by_member_, item_id);
  }

  const EntityId& root_work(const EntityId& item_id) const { return root_work_.at(item_id); }

  const Action* producer_of(const EntityId& version_id) const { return find(producer_, version_id); }
  const Action* terminator_of(const EntityId& version_id) const { return find(terminator_, version_id); }
  // Actions touching any version of the item, sorted by (date, id).
  const std::vector<const Action*>& actions_for_item(const EntityId& item_id) const {
    return lookup(actions_by_item_, item_id);
  }
  // Actions whose source version lies inside the Work's tree, sorted by (date, id).
  const std::vector<const Action*>& actions_by_source_work(const EntityId& work_id) const {
    return lookup(actions_by_source_work_, work_id);
  }

  const TextUnit* text_unit(const EntityId& source_id, const std::string& language, const std::string& aspect) const {
    auto it = text_slots_.find(std::tie(source_id, language, aspect));
    return it == text_slots_.end() ? nullptr : it->second;
  }
  // Text units attached to a node, sorted by (language, aspect).
  const std::vector<const TextUnit*>& texts_of(const EntityId& source_id) const {
    return lookup(texts_by_source_, source_id);
  }
  size_t text_index(const TextUnit* t) const { return static_cast<size_t>(t - corpus_.text_units.data()); }
  const std::vector<std::string>& text_tokens(const TextUnit* t) const { return text_tokens_[text_index(t)]; }
  // Text-unit indices whose content contains the word token, ascending.
  const std::vector<size_t>& postings(const std::string& token) const { return lookup(postings_, token); }

  const std::vector<std::string>& languages() const { return languages_; }
  const std::vector<const Theme*>& root_themes() const { return root_themes_; }

 private:
  explicit GraphStore(Corpus corpus) : corpus_(std::move(corpus)) {
    digest_ = sha256_hex(canonical_dump(to_json(corpus_)));
    for (const auto& i : corpus_.items) items_.emplace(i.id, &i);
    for (const auto& t : corpus_.themes) themes_.emplace(t.id, &t);
    for (const auto& v : corpus_.versions) versions_.emplace(v.id, &v);
    for (const auto& a : corpus_.actions) actions_.emplace(a.id, &a);
    for (const auto& t : corpus_.ontology.item_types) item_types_.emplace(t.id, &t);
    build_structure();
    build_actions();
    build_texts();
  }

  void build_structure() {
    for (const auto& i : corpus_.items) {
      const Item* cur = &i;
      while (cur->parent) cur = items_.at(*cur->parent);
      root_work_.emplace(i.id, cur->id);
    }
    for (const auto& v : corpus_.versions) versions_by_item_[v.item].push_back(&v);
    for (auto& [item, vs] : versions_by_item_) {
      std::sort(vs.begin(), vs.end(), [](const Version* a, const Version* b) {
        return a->validity_interval.start < b->validity_interval.start;
      });
    }

    // Version children follow the document order of their items.
    std::unordered_map<EntityId, size_t> position;
    for (const auto& i : corpus_.items) {
      for (size_t k = 0; k < i.children.size(); ++k) position[i.children[k]] = k;
    }
    std::unordered_map<EntityId, std::vector<const Version*>> vchildren;
    for (const auto& v : corpus_.versions) {
      for (const auto& p : v.parents) vchildren[p].push_back(&v);
    }
    for (auto& [parent, vs] : vchildren) {
      std::sort(vs.begin(), vs.end(), [&](const Version* a, const Version* b) {
        return std::make_tuple(position[a->item], a->validity_interval.start, std::cref(a->id)) <
               std::make_tuple(position[b->item], b->validity_interval.start, std::cref(b->id));
      });
      auto& out = version_children_[parent];
      for (const auto* v : vs) out.push_back(v->id);
    }

    for (const auto& t : corpus_.themes) {
      auto& out = theme_children_[t.id];
      out = t.children;
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      for (const auto& m : t.members) {
        auto& list = themes_by_member_[m];
        if (std::find(list.begin(), list.end(), &t) == list.end()) list.push_back(&t);
      }
      if (t.parents.empty()) root_themes_.push_back(&t);
    }
    for (auto& [m, list] : themes_by_member_) std::sort(list.begin(), list.end(), by_id<Theme>);
    std::sort(root_themes_.begin(), root_themes_.end(), by_id<Theme>);

    for (const auto& t : corpus_.ontology.item_types) {
      item_type_children_.try_emplace(t.id);
      for (const auto& p : t.parents) item_type_children_[p].push_back(t.id);
    }
    for (auto& [id, ch] : item_type_children_) {
      std::sort(ch.begin(), ch.end());
      ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
    }
  }

  void build_actions() {
    for (const auto& a : corpus_.actions) {
      std::set<EntityId> touched;
      if (a.produces_version) {
        producer_.emplace(*a.produces_version, &a);
        touched.insert(versions_.at(*a.produces_version)->item);
      }
      if (a.terminates_version) {
        terminator_.emplace(*a.terminates_version, &a);
        touched.insert(versions_.at(*a.terminates_version)->item);
      }
      for (const auto& item : touched) actions_by_item_[item].push_back(&a);
      const EntityId& source_item = versions_.at(a.source_version)->item;
      actions_by_source_work_[root_work_.at(source_item)].push_back(&a);
    }
    auto by_date = [](const Action* x, const Action* y) { return std::tie(x->date, x->id) < std::tie(y->date, y->id); };
    for (auto& [k, list] : actions_by_item_) std::sort(list.begin(), list.end(), by_date);
    for (auto& [k, list] : actions_by_source_work_) std::sort(list.begin(), list.end(), by_date);
  }

  void build_texts() {
    std::set<std::string> langs;
    text_tokens_.reserve(corpus_.text_units.size());
    for (size_t k = 0; k < corpus_.text_units.size(); ++k) {
      const TextUnit& t = corpus_.text_units[k];
      text_slots_.emplace(std::make_tuple(t.source_node_id, t.language, t.aspect), &t);
      texts_by_source_[t.source_node_id].push_back(&t);
      langs.insert(t.language);
      text_tokens_.push_back(text::word_tokens(t.content));
      std::set<std::string> distinct(text_tokens_.back().begin(), text_tokens_.back().end());
      for (const auto& tok : distinct) postings_[tok].push_back(k);
    }
    for (auto& [src, list] : texts_by_source_) {
      std::sort(list.begin(), list.end(), [](const TextUnit* a, const TextUnit* b) {
        return std::tie(a->language, a->aspect) < std::tie(b->language, b->aspect);
      });
    }
    languages_.assign(langs.begin(), langs.end());
  }

  template <typename T>
  static bool by_id(const T* a, const T* b) {
    return a->id < b->id;
  }

  template <typename M>
  static typename M::mapped_type find(const M& m, const EntityId& id) {
    auto it = m.find(id);
    return it == m.end() ? nullptr : it->second;
  }

  template <typename M>
  static const typename M::mapped_type& lookup(const M& m, const typename M::key_type& key) {
    static const typename M::mapped_type kEmpty{};
    auto it = m.find(key);
    return it == m.end() ? kEmpty : it->second;
  }

  template <typename T>
  static const T& require(const T* p, const char* kind, const EntityId& id) {
    if (!p) fail(ErrorCode::kNotFound, std::string(kind) + " '" + id + "' not found", {{"id", id}, {"kind", kind}});
    return *p;
  }

  Corpus corpus_;
  std::string digest_;
  std::unordered_map<EntityId, const Item*> items_;
  std::unordered_map<EntityId, const Theme*> themes_;
  std::unordered_map<EntityId, const Version*> versions_;
  std::unordered_map<EntityId, const Action*> actions_;
  std::unordered_map<EntityId, const ItemType*> item_types_;

  std::unordered_map<EntityId, EntityId> root_work_;
  std::unordered_map<EntityId, std::vector<const Version*>> versions_by_item_;
  std::unordered_map<EntityId, std::vector<EntityId>> version_children_;
  std::unordered_map<EntityId, std::vector<EntityId>> theme_children_;
  std::unordered_map<EntityId, std::vector<EntityId>> item_type_children_;
  std::unordered_map<EntityId, std::vector<const Theme*>> themes_by_member_;
  std::vector<const Theme*> root_themes_;

  std::unordered_map<EntityId, const Action*> producer_;
  std::unordered_map<EntityId, const Action*> terminator_;
  std::unordered_map<EntityId, std::vector<const Action*>> actions_by_item_;
  std::unordered_map<EntityId, std::vector<const Action*>> actions_by_source_work_;

  std::map<std::tuple<EntityId, std::string, std::string>, const TextUnit*, std::less<>> text_slots_;
  std::unordered_map<EntityId, std::vector<const TextUnit*>> texts_by_source_;
  std::vector<std::vector<std::string>> text_tokens_;
  std::unordered_map<std::string, std::vector<size_t>> postings_;
  std::vector<std::string> languages_;
};

}  // namespace satgraph
