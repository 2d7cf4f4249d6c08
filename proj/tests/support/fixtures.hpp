#pragma once

#include <string>

#include "satgraph/corpus_io.hpp"

namespace satgraph::testing {

inline std::string data_path(const std::string& rel) { return std::string(SATGRAPH_DATA_DIR) + "/" + rel; }

inline const GraphStore::Ptr& mini_store() {
  static const GraphStore::Ptr s = GraphStore::load(load_corpus_dir(data_path("cf88-mini")));
  return s;
}

inline const GraphStore::Ptr& ext_store() {
  static const GraphStore::Ptr s = GraphStore::load(load_corpus_dir(data_path("cf88-ext")));
  return s;
}

inline Corpus mini_corpus() { return load_corpus_dir(data_path("cf88-mini")); }

}  // namespace satgraph::testing
