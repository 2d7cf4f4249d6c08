#pragma once

// Corpus directories and store snapshots on disk.
//
// A corpus directory holds items.json, themes.json, versions.json,
// actions.json and textunits.json (each a JSON list of records) plus an
// optional ontology.json. A snapshot is a single binary file:
//
//   magic "SATG" | u32 format version | u64 payload size | 32-byte sha256 | payload
//
// integers little-endian; the payload is the canonical JSON corpus document.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "satgraph/canonical.hpp"
#include "satgraph/digest.hpp"
#include "satgraph/store.hpp"

namespace satgraph {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read '" + p.string() + "'", {{"path", p.string()}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& p, std::string_view data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write '" + p.string() + "'", {{"path", p.string()}});
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) fail(ErrorCode::kIoError, "short write to '" + p.string() + "'", {{"path", p.string()}});
}

inline Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kParseError, what + ": " + e.what());
  }
}

inline Corpus load_corpus_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorCode::kIoError, "'" + dir.string() + "' is not a directory");
  auto section = [&](const char* file) { return parse_json(read_file(dir / file), file); };
  Corpus c;
  c.items = list_from_json<Item>(section("items.json"), "items.json", item_from_json);
  c.themes = list_from_json<Theme>(section("themes.json"), "themes.json", theme_from_json);
  c.versions = list_from_json<Version>(section("versions.json"), "versions.json", version_from_json);
  c.actions = list_from_json<Action>(section("actions.json"), "actions.json", action_from_json);
  c.text_units = list_from_json<TextUnit>(section("textunits.json"), "textunits.json", text_unit_from_json);
  if (fs::exists(dir / "ontology.json")) c.ontology = ontology_from_json(section("ontology.json"));
  return c;
}

inline void write_corpus_dir(const Corpus& c, const fs::path& dir) {
  fs::create_directories(dir);
  const Json j = to_json(c);
  write_file(dir / "items.json", j["items"].dump(2));
  write_file(dir / "themes.json", j["themes"].dump(2));
  write_file(dir / "versions.json", j["versions"].dump(2));
  write_file(dir / "actions.json", j["actions"].dump(2));
  write_file(dir / "textunits.json", j["textunits"].dump(2));
  write_file(dir / "ontology.json", j["ontology"].dump(2));
}

inline constexpr char kSnapshotMagic[4] = {'S', 'A', 'T', 'G'};
inline constexpr std::uint32_t kSnapshotFormat = 1;

namespace detail {

inline void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline std::uint64_t get_le(std::string_view in, size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[pos + i]);
  return v;
}

}  // namespace detail

inline std::string encode_snapshot(const GraphStore& store) {
  const std::string payload = canonical_dump(to_json(store.corpus()));
  const RawDigest d = sha256_raw(payload);
  std::string out(kSnapshotMagic, 4);
  detail::put_le(out, kSnapshotFormat, 4);
  detail::put_le(out, payload.size(), 8);
  out.append(reinterpret_cast<const char*>(d.data()), d.size());
  out += payload;
  return out;
}

inline GraphStore::Ptr decode_snapshot(std::string_view bytes) {
  constexpr size_t kHeader = 4 + 4 + 8 + 32;
  if (bytes.size() < kHeader || bytes.substr(0, 4) != std::string_view(kSnapshotMagic, 4)) {
    fail(ErrorCode::kParseError, "not a store snapshot");
  }
  const auto format = detail::get_le(bytes, 4, 4);
  if (format != kSnapshotFormat) {
    fail(ErrorCode::kParseError, "unsupported snapshot format " + std::to_string(format));
  }
  const auto size = detail::get_le(bytes, 8, 8);
  if (bytes.size() - kHeader != size) fail(ErrorCode::kParseError, "snapshot payload truncated");
  const std::string_view payload = bytes.substr(kHeader);
  const RawDigest d = sha256_raw(payload);
  if (!std::equal(d.begin(), d.end(), reinterpret_cast<const unsigned char*>(bytes.data()) + 16)) {
    fail(ErrorCode::kParseError, "snapshot checksum mismatch");
  }
  return GraphStore::load(corpus_from_json(parse_json(payload, "snapshot")));
}

inline void save_snapshot(const GraphStore& store, const fs::path& path) { write_file(path, encode_snapshot(store)); }
inline GraphStore::Ptr load_snapshot(const fs::path& path) { return decode_snapshot(read_file(path)); }

// Loads a corpus directory or a snapshot file, whichever the path names.
inline GraphStore::Ptr open_store(const fs::path& path) {
  if (fs::is_directory(path)) return GraphStore::load(load_corpus_dir(path));
  return load_snapshot(path);
}

}  // namespace satgraph
