#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "satgraph/error.hpp"

namespace satgraph {

inline constexpr std::string_view kDigestAlgorithm = "sha256";

using RawDigest = std::array<unsigned char, 32>;

inline RawDigest sha256_raw(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  RawDigest out{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
    fail(ErrorCode::kIoError, "sha256 computation failed");
  }
  return out;
}

inline std::string to_hex(const unsigned char* p, size_t n) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(n * 2, '0');
  for (size_t i = 0; i < n; ++i) {
    s[2 * i] = kHex[p[i] >> 4];
    s[2 * i + 1] = kHex[p[i] & 0xF];
  }
  return s;
}

// Lowercase hex SHA-256.
inline std::string sha256_hex(std::string_view data) {
  const RawDigest d = sha256_raw(data);
  return to_hex(d.data(), d.size());
}

}  // namespace satgraph
