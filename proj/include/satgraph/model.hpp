#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "satgraph/date.hpp"
#include "satgraph/error.hpp"

namespace satgraph {

// Canonical identifier (URN-like). Lexicographic order on ids is the
// engine-wide tie-break order.
using EntityId = std::string;

// Scalar metadata value. Dates travel as ISO 8601 strings.
using MetadataValue = std::variant<bool, std::int64_t, double, std::string>;
using Metadata = std::map<std::string, MetadataValue>;

enum class ItemKind { kWork, kWorkComponent };
enum class NodeType { kItem, kTheme, kVersion, kAction };
// Kinds addressable by getEntity / getBatch.
enum class EntityKind { kItem, kTheme, kVersion, kAction };
// Kinds traversable by getHierarchy.
enum class HierarchyKind { kItem, kTheme, kVersion, kItemType };

inline constexpr std::string_view to_string(ItemKind k) {
  return k == ItemKind::kWork ? "Work" : "WorkComponent";
}

inline constexpr std::string_view to_string(NodeType t) {
  switch (t) {
    case NodeType::kItem: return "Item";
    case NodeType::kTheme: return "Theme";
    case NodeType::kVersion: return "Version";
    case NodeType::kAction: return "Action";
  }
  return "Item";
}

inline constexpr std::string_view to_string(HierarchyKind k) {
  switch (k) {
    case HierarchyKind::kItem: return "Item";
    case HierarchyKind::kTheme: return "Theme";
    case HierarchyKind::kVersion: return "Version";
    case HierarchyKind::kItemType: return "ItemType";
  }
  return "Item";
}

inline ItemKind parse_item_kind(std::string_view s) {
  if (s == "Work") return ItemKind::kWork;
  if (s == "WorkComponent") return ItemKind::kWorkComponent;
  fail(ErrorCode::kInvalidArgument, "unknown item kind '" + std::string(s) + "'");
}

inline NodeType parse_node_type(std::string_view s) {
  if (s == "Item") return NodeType::kItem;
  if (s == "Theme") return NodeType::kTheme;
  if (s == "Version") return NodeType::kVersion;
  if (s == "Action") return NodeType::kAction;
  fail(ErrorCode::kInvalidArgument, "unknown node type '" + std::string(s) + "'");
}

inline EntityKind parse_entity_kind(std::string_view s) {
  return static_cast<EntityKind>(parse_node_type(s));
}

inline HierarchyKind parse_hierarchy_kind(std::string_view s) {
  if (s == "Item") return HierarchyKind::kItem;
  if (s == "Theme") return HierarchyKind::kTheme;
  if (s == "Version") return HierarchyKind::kVersion;
  if (s == "ItemType") return HierarchyKind::kItemType;
  fail(ErrorCode::kInvalidArgument, "unknown hierarchy kind '" + std::string(s) + "'");
}

struct Item {
  EntityId id;
  ItemKind kind = ItemKind::kWorkComponent;
  EntityId type_id;
  std::string label;
  std::optional<std::string> uri;
  std::optional<EntityId> parent;
  std::vector<EntityId> children;  // document order
  Metadata metadata;
};

struct Theme {
  EntityId id;
  std::string label;
  std::optional<std::string> uri;
  std::vector<EntityId> parents;
  std::vector<EntityId> children;
  std::vector<EntityId> members;
  Metadata metadata;
};

struct Version {
  EntityId id;
  EntityId item;
  TimeInterval validity_interval;
  std::optional<std::string> uri;
  std::vector<EntityId> parents;
  Metadata metadata;
};

struct Action {
  EntityId id;
  std::string type;
  Date date;
  EntityId source_version;
  std::optional<EntityId> terminates_version;
  std::optional<EntityId> produces_version;
  Metadata metadata;
};

struct TextUnit {
  std::string id;
  NodeType source_node_type = NodeType::kVersion;
  EntityId source_node_id;
  std::string language;
  std::string aspect;
  std::string content;
};

struct ItemType {
  EntityId id;
  std::string label;
  std::vector<EntityId> parents;
};

struct Ontology {
  std::vector<std::string> action_types;
  std::vector<ItemType> item_types;

  static Ontology defaults() { return {{"Amendment", "Creation", "Revocation"}, {}}; }
};

struct Corpus {
  std::vector<Item> items;
  std::vector<Theme> themes;
  std::vector<Version> versions;
  std::vector<Action> actions;
  std::vector<TextUnit> text_units;
  Ontology ontology = Ontology::defaults();
};

struct RankedCandidate {
  EntityId id;
  double confidence = 0.0;
};

struct ScoredTextUnit {
  TextUnit text_unit;
  double score = 0.0;
};

struct ScoredItem {
  Item item;
  double score = 0.0;
};

struct CausalTrace {
  Action creating_action;
  std::optional<Action> terminating_action;
};

enum class EditOp { kInsert, kDelete, kReplace };
enum class StructuralChangeKind { kComponentAdded, kComponentRemoved };

struct TextEdit {
  EditOp op = EditOp::kInsert;
  size_t position = 0;  // token index in A
  std::vector<std::string> tokens_a;
  std::vector<std::string> tokens_b;
  friend bool operator==(const TextEdit&, const TextEdit&) = default;
};

struct StructuralChange {
  StructuralChangeKind change = StructuralChangeKind::kComponentAdded;
  EntityId item;
  friend bool operator==(const StructuralChange&, const StructuralChange&) = default;
};

struct TextDiffReport {
  EntityId version_a;
  EntityId version_b;
  std::string language;
  std::vector<TextEdit> textual_edits;
  std::vector<StructuralChange> structural_changes;
};

inline constexpr std::string_view to_string(EditOp op) {
  switch (op) {
    case EditOp::kInsert: return "insert";
    case EditOp::kDelete: return "delete";
    case EditOp::kReplace: return "replace";
  }
  return "insert";
}

inline constexpr std::string_view to_string(StructuralChangeKind k) {
  return k == StructuralChangeKind::kComponentAdded ? "component_added" : "component_removed";
}

}  // namespace satgraph
