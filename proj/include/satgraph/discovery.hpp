#pragma once

// Probabilistic entry points: reference resolvers and hybrid search. Scores
// are ordinal similarity values in [0, 1], not calibrated probabilities.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "satgraph/canonical.hpp"
#include "satgraph/scoring.hpp"
#include "satgraph/store.hpp"
#include "satgraph/text.hpp"

namespace satgraph {

// ---------------------------------------------------------------------------
// Metadata predicates
//
//   {"key": value}                  equals
//   {"key": {"eq": value}}          equals
//   {"key": {"in": [v1, v2]}}       membership
//   {"key": {">=": value, "<": v}}  range; several operators are ANDed
//
// A missing key or a value of a different type fails the predicate.

enum class PredicateOp { kEq, kIn, kLt, kLe, kGt, kGe };

struct Predicate {
  PredicateOp op = PredicateOp::kEq;
  std::vector<MetadataValue> values;  // one value, or the candidates for kIn
};

using PredicateMap = std::map<std::string, std::vector<Predicate>>;

struct MetadataFilter {
  PredicateMap item;
  PredicateMap version;
};

inline MetadataValue metadata_value_from_json(const Json& j, const std::string& key) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  fail(ErrorCode::kInvalidArgument, "predicate value for '" + key + "' must be a scalar");
}

inline PredicateMap predicates_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "metadata filter must be an object");
  static const std::map<std::string, PredicateOp> kOps = {{"eq", PredicateOp::kEq}, {"in", PredicateOp::kIn},
                                                          {"<", PredicateOp::kLt},  {"<=", PredicateOp::kLe},
                                                          {">", PredicateOp::kGt},  {">=", PredicateOp::kGe}};
  PredicateMap out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const Json& spec = it.value();
    auto& preds = out[key];
    if (!spec.is_object()) {
      preds.push_back({PredicateOp::kEq, {metadata_value_from_json(spec, key)}});
      continue;
    }
    if (spec.empty()) fail(ErrorCode::kInvalidArgument, "empty predicate for '" + key + "'");
    for (auto p = spec.begin(); p != spec.end(); ++p) {
      auto op = kOps.find(p.key());
      if (op == kOps.end()) fail(ErrorCode::kInvalidArgument, "unknown predicate operator '" + p.key() + "'");
      Predicate pred{op->second, {}};
      if (pred.op == PredicateOp::kIn) {
        if (!p.value().is_array()) fail(ErrorCode::kInvalidArgument, "'in' for '" + key + "' needs a list");
        for (const auto& v : p.value()) pred.values.push_back(metadata_value_from_json(v, key));
      } else {
        pred.values.push_back(metadata_value_from_json(p.value(), key));
      }
      preds.push_back(std::move(pred));
    }
  }
  return out;
}

inline MetadataFilter metadata_filter_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "metadata_filter must be an object");
  StrictObject o(j, "metadata_filter");
  MetadataFilter f;
  if (o.has("item_metadata_filter")) f.item = predicates_from_json(o.raw("item_metadata_filter"));
  if (o.has("version_metadata_filter")) f.version = predicates_from_json(o.raw("version_metadata_filter"));
  try {
    o.finish();
  } catch (const Error& e) {
    fail(ErrorCode::kInvalidArgument, e.message());
  }
  return f;
}

namespace detail {

inline bool is_number(const MetadataValue& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

inline double as_double(const MetadataValue& v) {
  return std::holds_alternative<std::int64_t>(v) ? static_cast<double>(std::get<std::int64_t>(v))
                                                 : std::get<double>(v);
}

// -1/0/1, or nullopt when the values are not comparable.
inline std::optional<int> compare(const MetadataValue& a, const MetadataValue& b) {
  if (is_number(a) && is_number(b)) {
    if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
      const auto x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
      return x < y ? -1 : x > y ? 1 : 0;
    }
    const double x = as_double(a), y = as_double(b);
    return x < y ? -1 : x > y ? 1 : 0;
  }
  if (a.index() != b.index()) return std::nullopt;
  if (std::holds_alternative<std::string>(a)) {
    const int c = std::get<std::string>(a).compare(std::get<std::string>(b));
    return c < 0 ? -1 : c > 0 ? 1 : 0;
  }
  return std::get<bool>(a) == std::get<bool>(b) ? 0 : 1;  // booleans: equality only
}

inline bool holds(const Predicate& p, const MetadataValue& actual) {
  if (p.op == PredicateOp::kEq || p.op == PredicateOp::kIn) {
    return std::any_of(p.values.begin(), p.values.end(), [&](const MetadataValue& v) {
      auto c = compare(actual, v);
      return c && *c == 0;
    });
  }
  if (std::holds_alternative<bool>(actual) || std::holds_alternative<bool>(p.values[0])) return false;
  auto c = compare(actual, p.values[0]);
  if (!c) return false;
  switch (p.op) {
    case PredicateOp::kLt: return *c < 0;
    case PredicateOp::kLe: return *c <= 0;
    case PredicateOp::kGt: return *c > 0;
    case PredicateOp::kGe: return *c >= 0;
    default: return false;
  }
}

}  // namespace detail

inline bool matches(const PredicateMap& preds, const Metadata& m) {
  for (const auto& [key, list] : preds) {
    auto it = m.find(key);
    if (it == m.end()) return false;
    for (const auto& p : list) {
      if (!detail::holds(p, it->second)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Discovery context: store plus the configured scorer and fusion weights.

struct DiscoveryContext {
  const GraphStore& store;
  const SemanticScorer& scorer;
  FusionWeights weights{};
};

inline void sort_ranked(std::vector<RankedCandidate>& xs) {
  std::sort(xs.begin(), xs.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    return a.confidence != b.confidence ? a.confidence > b.confidence : a.id < b.id;
  });
}

inline void truncate(auto& xs, std::optional<int> top_k) {
  if (top_k && *top_k >= 0 && xs.size() > static_cast<size_t>(*top_k)) xs.resize(static_cast<size_t>(*top_k));
}

inline void check_top_k(std::optional<int> top_k) {
  if (top_k && *top_k < 0) fail(ErrorCode::kInvalidArgument, "top_k must be non-negative");
}

namespace detail {

inline std::vector<std::string> distinct(std::vector<std::string> xs) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto& x : xs) {
    if (seen.insert(x).second) out.push_back(std::move(x));
  }
  return out;
}

inline bool contains_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

// Exact normalized label match scores 1. Everything else is capped at 0.95:
// 0.6 * recall of query tokens over the label context, 0.3 * share of label
// tokens found in the query, 0.1 if the label occurs as a phrase.
inline double reference_score(const std::vector<std::string>& query, const std::string& normalized_query,
                              const std::string& label, const std::set<std::string>& context_tokens) {
  const std::vector<std::string> label_tokens = text::word_tokens(label);
  if (!label_tokens.empty() && text::normalize(label) == normalized_query) return 1.0;
  const auto q = distinct(query);
  size_t hit = 0;
  for (const auto& t : q) hit += context_tokens.count(t);
  if (hit == 0) return 0.0;
  const double recall = static_cast<double>(hit) / static_cast<double>(q.size());
  const std::set<std::string> qset(q.begin(), q.end());
  const auto ldistinct = distinct(label_tokens);
  size_t lhit = 0;
  for (const auto& t : ldistinct) lhit += qset.count(t);
  const double label_hit = ldistinct.empty() ? 0.0 : static_cast<double>(lhit) / static_cast<double>(ldistinct.size());
  const double phrase = contains_run(query, label_tokens) ? 1.0 : 0.0;
  return 0.95 * (0.6 * recall + 0.3 * label_hit + 0.1 * phrase);
}

inline std::vector<std::string> checked_reference(const std::string& reference_text) {
  if (reference_text.find_first_not_of(" \t\r\n") == std::string::npos) {
    fail(ErrorCode::kInvalidArgument, "reference_text must be non-empty");
  }
  return text::word_tokens(reference_text);
}

}  // namespace detail

inline constexpr int kDefaultResolverTopK = 3;
inline constexpr double kOutOfContextFactor = 0.8;

inline std::vector<RankedCandidate> resolve_item_reference(const GraphStore& s, const std::string& reference_text,
                                                           const std::optional<EntityId>& context_id,
                                                           std::optional<int> top_k) {
  check_top_k(top_k);
  const auto query = detail::checked_reference(reference_text);
  std::optional<EntityId> context_work;
  if (context_id) context_work = s.root_work(s.item(*context_id).id);
  std::vector<RankedCandidate> out;
  if (query.empty()) return out;
  const std::string nq = text::normalize(reference_text);
  for (const auto& item : s.corpus().items) {
    std::set<std::string> ctx;
    for (const Item* cur = &item;; cur = &s.item(*cur->parent)) {
      for (auto& t : text::word_tokens(cur->label)) ctx.insert(std::move(t));
      if (!cur->parent) break;
    }
    double score = detail::reference_score(query, nq, item.label, ctx);
    if (score <= 0.0) continue;
    if (context_work && s.root_work(item.id) != *context_work) score *= kOutOfContextFactor;
    out.push_back({item.id, score});
  }
  sort_ranked(out);
  truncate(out, top_k.value_or(kDefaultResolverTopK));
  return out;
}

inline std::vector<RankedCandidate> resolve_theme_reference(const GraphStore& s, const std::string& reference_text,
                                                            std::optional<int> top_k) {
  check_top_k(top_k);
  const auto query = detail::checked_reference(reference_text);
  std::vector<RankedCandidate> out;
  if (query.empty()) return out;
  const std::string nq = text::normalize(reference_text);
  for (const auto& theme : s.corpus().themes) {
    std::set<std::string> ctx;
    for (auto& t : text::word_tokens(theme.label)) ctx.insert(std::move(t));
    for (const TextUnit* tu : s.texts_of(theme.id)) {
      if (tu->source_node_type != NodeType::kTheme || tu->aspect != "description") continue;
      const auto& toks = s.text_tokens(tu);
      ctx.insert(toks.begin(), toks.end());
    }
    const double score = detail::reference_score(query, nq, theme.label, ctx);
    if (score > 0.0) out.push_back({theme.id, score});
  }
  sort_ranked(out);
  truncate(out, top_k.value_or(kDefaultResolverTopK));
  return out;
}

// ---------------------------------------------------------------------------
// Hybrid search

struct TextSearchRequest {
  std::optional<std::vector<EntityId>> version_ids;
  std::optional<std::vector<EntityId>> item_ids;
  std::optional<std::vector<EntityId>> theme_ids;
  std::optional<MetadataFilter> metadata_filter;
  std::optional<Date> timestamp;
  std::optional<std::string> semantic_query;
  std::optional<std::string> lexical_query;
  std::optional<std::string> language;
  std::optional<std::vector<std::string>> aspects;
  std::optional<int> top_k;
  std::optional<FusionWeights> weights;
};

struct ItemSearchRequest {
  std::optional<std::vector<EntityId>> item_ids;
  std::optional<std::vector<EntityId>> theme_ids;
  std::optional<PredicateMap> item_metadata_filter;
  std::optional<std::string> semantic_query;
  std::optional<std::string> lexical_query;
  std::optional<int> top_k;
  std::optional<FusionWeights> weights;
};

namespace detail {

class QueryScorer {
 public:
  QueryScorer(const DiscoveryContext& ctx, const std::optional<std::string>& lexical,
              const std::optional<std::string>& semantic, const std::optional<FusionWeights>& weights)
      : ctx_(ctx), semantic_(semantic), weights_(weights.value_or(ctx.weights)) {
    if (weights_.lexical < 0 || weights_.semantic < 0) {
      fail(ErrorCode::kInvalidArgument, "fusion weights must be non-negative");
    }
    if (lexical) lexical_tokens_ = text::word_tokens(*lexical);
    has_lexical_ = lexical.has_value();
  }

  bool has_query() const { return has_lexical_ || semantic_.has_value(); }

  // Fused score; scope-only searches score every candidate 1.
  double score(const TextUnit* t) const {
    if (!has_query()) return 1.0;
    std::optional<double> lex, sem;
    if (has_lexical_) lex = lexical_score(lexical_tokens_, ctx_.store.text_tokens(t));
    if (semantic_) sem = ctx_.scorer.score(*semantic_, t->content);
    return fuse(weights_, lex, sem);
  }

 private:
  const DiscoveryContext& ctx_;
  std::optional<std::string> semantic_;
  FusionWeights weights_;
  std::vector<std::string> lexical_tokens_;
  bool has_lexical_ = false;
};

inline std::set<EntityId> scoped_items(const GraphStore& s, const std::optional<std::vector<EntityId>>& item_ids,
                                       const std::optional<std::vector<EntityId>>& theme_ids) {
  std::set<EntityId> out;
  if (!item_ids && !theme_ids) {
    for (const auto& i : s.corpus().items) out.insert(i.id);
    return out;
  }
  for (const auto& id : item_ids.value_or(std::vector<EntityId>{})) {
    if (!s.find_item(id)) fail(ErrorCode::kUnknownId, "unknown item id '" + id + "'", {{"id", id}});
    out.insert(id);
  }
  for (const auto& id : theme_ids.value_or(std::vector<EntityId>{})) {
    const Theme* t = s.find_theme(id);
    if (!t) fail(ErrorCode::kUnknownId, "unknown theme id '" + id + "'", {{"id", id}});
    out.insert(t->members.begin(), t->members.end());
  }
  return out;
}

}  // namespace detail

// `now` is the pinned instant that stands in for an omitted timestamp.
inline std::vector<ScoredTextUnit> search_text_units(const DiscoveryContext& ctx, const TextSearchRequest& r,
                                                     Date now) {
  const GraphStore& s = ctx.store;
  check_top_k(r.top_k);
  if (r.version_ids && (r.item_ids || r.theme_ids || r.timestamp)) {
    fail(ErrorCode::kConflictingScope, "version_ids cannot be combined with item_ids, theme_ids or timestamp");
  }
  const bool has_scope = r.version_ids || r.item_ids || r.theme_ids || r.metadata_filter || r.timestamp;
  detail::QueryScorer scorer(ctx, r.lexical_query, r.semantic_query, r.weights);
  if (!scorer.has_query() && !has_scope) {
    fail(ErrorCode::kInvalidArgument, "searchTextUnits needs a query or a scope parameter");
  }

  std::vector<const Version*> versions;
  if (r.version_ids) {
    std::set<EntityId> seen;
    for (const auto& id : *r.version_ids) {
      const Version* v = s.find_version(id);
      if (!v) fail(ErrorCode::kUnknownId, "unknown version id '" + id + "'", {{"id", id}});
      if (seen.insert(id).second) versions.push_back(v);
    }
  } else {
    const Date t = r.timestamp.value_or(now);
    for (const auto& item : detail::scoped_items(s, r.item_ids, r.theme_ids)) {
      if (const Version* v = s.lookup_valid_version(item, t)) versions.push_back(v);
    }
  }

  static const std::vector<std::string> kDefaultAspects{"canonical"};
  const auto& aspects = r.aspects ? *r.aspects : kDefaultAspects;
  const std::set<std::string> aspect_set(aspects.begin(), aspects.end());
  std::vector<ScoredTextUnit> out;
  for (const Version* v : versions) {
    if (r.metadata_filter) {
      if (!matches(r.metadata_filter->item, s.item(v->item).metadata)) continue;
      if (!matches(r.metadata_filter->version, v->metadata)) continue;
    }
    for (const TextUnit* t : s.texts_of(v->id)) {
      if (t->source_node_type != NodeType::kVersion || !aspect_set.count(t->aspect)) continue;
      if (r.language && t->language != *r.language) continue;
      const double score = scorer.score(t);
      if (score > 0.0) out.push_back({*t, score});
    }
  }
  std::sort(out.begin(), out.end(), [](const ScoredTextUnit& a, const ScoredTextUnit& b) {
    return a.score != b.score ? a.score > b.score : a.text_unit.id < b.text_unit.id;
  });
  truncate(out, r.top_k);
  return out;
}

// Time-agnostic: an item matches through any text of any of its versions or
// through its own texts; its score is the best of those.
inline std::vector<ScoredItem> search_items(const DiscoveryContext& ctx, const ItemSearchRequest& r) {
  const GraphStore& s = ctx.store;
  check_top_k(r.top_k);
  detail::QueryScorer scorer(ctx, r.lexical_query, r.semantic_query, r.weights);
  if (!scorer.has_query() && !r.item_ids && !r.theme_ids && !r.item_metadata_filter) {
    fail(ErrorCode::kInvalidArgument, "searchItems needs a query, a scope or a filter");
  }
  std::vector<ScoredItem> out;
  for (const auto& id : detail::scoped_items(s, r.item_ids, r.theme_ids)) {
    const Item& item = s.item(id);
    if (r.item_metadata_filter && !matches(*r.item_metadata_filter, item.metadata)) continue;
    double best = 0.0;
    if (!scorer.has_query()) {
      best = 1.0;
    } else {
      auto consider = [&](const EntityId& source, NodeType type) {
        for (const TextUnit* t : s.texts_of(source)) {
          if (t->source_node_type == type) best = std::max(best, scorer.score(t));
        }
      };
      consider(id, NodeType::kItem);
      for (const Version* v : s.versions_of(id)) consider(v->id, NodeType::kVersion);
    }
    if (best > 0.0) out.push_back({item, best});
  }
  std::sort(out.begin(), out.end(), [](const ScoredItem& a, const ScoredItem& b) {
    return a.score != b.score ? a.score > b.score : a.item.id < b.item.id;
  });
  truncate(out, r.top_k);
  return out;
}

}  // namespace satgraph
