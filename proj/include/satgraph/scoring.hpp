#pragma once

// Lexical and semantic scorers. Every scorer is a pure function of its
// inputs, so ranked results are reproducible.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "satgraph/error.hpp"
#include "satgraph/text.hpp"

namespace satgraph {

// Longest run of consecutive query tokens that also occurs contiguously in
// the content.
inline size_t longest_phrase_run(const std::vector<std::string>& query, const std::vector<std::string>& content) {
  size_t best = 0;
  for (size_t p = 0; p < content.size(); ++p) {
    for (size_t s = 0; s < query.size(); ++s) {
      size_t k = 0;
      while (p + k < content.size() && s + k < query.size() && content[p + k] == query[s + k]) ++k;
      best = std::max(best, k);
    }
  }
  return best;
}

// 0.8 * (share of distinct query tokens present) + 0.2 * (longest phrase run
// / query length). A one-word query that matches scores 1.
inline double lexical_score(const std::vector<std::string>& query, const std::vector<std::string>& content) {
  if (query.empty() || content.empty()) return 0.0;
  const std::set<std::string> have(content.begin(), content.end());
  const std::set<std::string> want(query.begin(), query.end());
  size_t hit = 0;
  for (const auto& q : want) hit += have.count(q);
  if (hit == 0) return 0.0;
  const double overlap = static_cast<double>(hit) / static_cast<double>(want.size());
  const double phrase = static_cast<double>(longest_phrase_run(query, content)) / static_cast<double>(query.size());
  return 0.8 * overlap + 0.2 * phrase;
}

class SemanticScorer {
 public:
  virtual ~SemanticScorer() = default;
  // Pure: (query, content) -> [0, 1].
  virtual double score(std::string_view query, std::string_view content) const = 0;
  // A scorer that is not safe for concurrent calls returns true; the engine
  // then funnels its calls through a lock.
  virtual bool serialized() const { return false; }
};

// Cosine similarity of character-trigram count vectors over normalized text.
class TrigramScorer : public SemanticScorer {
 public:
  double score(std::string_view query, std::string_view content) const override {
    const auto a = trigrams(query);
    const auto b = trigrams(content);
    if (a.empty() || b.empty()) return 0.0;
    double dot = 0, na = 0, nb = 0;
    for (const auto& [g, n] : a) {
      na += double(n) * n;
      auto it = b.find(g);
      if (it != b.end()) dot += double(n) * it->second;
    }
    for (const auto& [g, n] : b) nb += double(n) * n;
    const double s = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(s, 0.0, 1.0);
  }

  static std::unordered_map<std::u32string, int> trigrams(std::string_view s) {
    std::unordered_map<std::u32string, int> out;
    const std::string n = text::normalize(s);
    if (n.empty()) return out;
    const std::u32string t = U" " + text::decode_utf8(n) + U" ";
    for (size_t i = 0; i + 3 <= t.size(); ++i) ++out[t.substr(i, 3)];
    return out;
  }
};

class LockedScorer : public SemanticScorer {
 public:
  explicit LockedScorer(std::shared_ptr<const SemanticScorer> inner) : inner_(std::move(inner)) {}
  double score(std::string_view q, std::string_view c) const override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_->score(q, c);
  }

 private:
  std::shared_ptr<const SemanticScorer> inner_;
  mutable std::mutex mu_;
};

// Scorers by name. "trigram" is always present.
class ScorerRegistry {
 public:
  ScorerRegistry() { add("trigram", std::make_shared<TrigramScorer>()); }

  void add(const std::string& name, std::shared_ptr<const SemanticScorer> scorer) {
    if (scorer->serialized()) scorer = std::make_shared<LockedScorer>(std::move(scorer));
    scorers_[name] = std::move(scorer);
  }

  std::shared_ptr<const SemanticScorer> get(const std::string& name) const {
    auto it = scorers_.find(name);
    if (it == scorers_.end()) fail(ErrorCode::kInvalidArgument, "no semantic scorer named '" + name + "'");
    return it->second;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : scorers_) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, std::shared_ptr<const SemanticScorer>> scorers_;
};

struct FusionWeights {
  double lexical = 0.5;
  double semantic = 0.5;
};

// Weighted mean over the queries actually given, weights renormalized.
inline double fuse(const FusionWeights& w, std::optional<double> lexical, std::optional<double> semantic) {
  double num = 0, den = 0;
  if (lexical) {
    num += w.lexical * *lexical;
    den += w.lexical;
  }
  if (semantic) {
    num += w.semantic * *semantic;
    den += w.semantic;
  }
  return den > 0 ? num / den : 0.0;
}

}  // namespace satgraph
