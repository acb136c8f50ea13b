// SPDX-License-Identifier: Apache-2.0
#include "ganeval/digest.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <memory>
#include <vector>

#include <openssl/evp.h>

#include "ganeval/error.hpp"

namespace ganeval {

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

void append_u64_le(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::string to_hex(const unsigned char* data, unsigned len) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kDigits[data[i] >> 4]);
    out.push_back(kDigits[data[i] & 0xF]);
  }
  return out;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error(Errc::io, "failed to initialise SHA-256");
    }
  }

  void update(const void* data, std::size_t len) {
    if (EVP_DigestUpdate(ctx_.get(), data, len) != 1) {
      throw Error(Errc::io, "SHA-256 update failed");
    }
  }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md, &len) != 1) {
      throw Error(Errc::io, "SHA-256 finalisation failed");
    }
    return to_hex(md, len);
  }

 private:
  MdCtx ctx_;
};

}  // namespace

std::string sha256_hex(std::span<const unsigned char> bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string matrix_digest(const MatrixView& m) {
  Sha256 h;
  std::vector<unsigned char> buf;
  append_u64_le(buf, static_cast<std::uint64_t>(m.rows()));
  append_u64_le(buf, static_cast<std::uint64_t>(m.cols()));
  h.update(buf.data(), buf.size());

  buf.clear();
  buf.reserve(static_cast<std::size_t>(m.cols()) * 8);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    buf.clear();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      append_u64_le(buf, std::bit_cast<std::uint64_t>(m(i, j)));
    }
    h.update(buf.data(), buf.size());
  }
  return "sha256:" + h.hex();
}

}  // namespace ganeval
