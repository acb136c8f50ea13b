// SPDX-License-Identifier: Apache-2.0
#include "ganeval/npy.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>

#include <fmt/core.h>

#include "ganeval/error.hpp"

namespace ganeval {

namespace {

constexpr std::array<unsigned char, 6> kMagic = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kAlign = 64;

[[noreturn]] void format_error(const std::string& source, const std::string& msg) {
  throw Error(Errc::format, fmt::format("{}: {}", source, msg));
}

// Minimal reader for the Python dict literal in an NPY header.
class HeaderParser {
 public:
  HeaderParser(std::string_view text, const std::string& source) : text_(text), source_(source) {}

  ArrayFileHeader parse() {
    std::optional<std::string> descr;
    std::optional<bool> fortran;
    std::optional<std::vector<std::size_t>> shape;

    expect('{');
    for (;;) {
      skip_ws();
      if (peek() == '}') {
        ++pos_;
        break;
      }
      const std::string key = parse_string();
      expect(':');
      skip_ws();
      if (key == "descr") {
        descr = parse_string();
      } else if (key == "fortran_order") {
        fortran = parse_bool();
      } else if (key == "shape") {
        shape = parse_tuple();
      } else {
        fail(fmt::format("unexpected header key '{}'", key));
      }
      skip_ws();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != '}') {
        fail("expected ',' or '}' in header");
      }
    }
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after header dict");
    if (!descr || !fortran || !shape) fail("header is missing 'descr', 'fortran_order' or 'shape'");

    ArrayFileHeader h;
    if (*descr == "<f4") {
      h.dtype = Dtype::float32_le;
    } else if (*descr == "<f8") {
      h.dtype = Dtype::float64_le;
    } else {
      fail(fmt::format("unsupported dtype '{}' (expected '<f4' or '<f8')", *descr));
    }
    if (shape->size() != 2) {
      fail(fmt::format("expected a 2-D array, got {} dimensions", shape->size()));
    }
    h.fortran_order = *fortran;
    h.rows = (*shape)[0];
    h.cols = (*shape)[1];
    if (h.rows == 0 || h.cols == 0) {
      fail(fmt::format("empty array shape ({}, {})", h.rows, h.cols));
    }
    return h;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    format_error(source_, fmt::format("bad NPY header: {}", msg));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(fmt::format("expected '{}'", c));
    ++pos_;
  }

  std::string parse_string() {
    skip_ws();
    const char quote = peek();
    if (quote != '\'' && quote != '"') fail("expected a quoted string");
    ++pos_;
    const std::size_t end = text_.find(quote, pos_);
    if (end == std::string_view::npos) fail("unterminated string");
    std::string out(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }

  bool parse_bool() {
    if (text_.substr(pos_, 4) == "True") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "False") {
      pos_ += 5;
      return false;
    }
    fail("expected True or False");
  }

  std::vector<std::size_t> parse_tuple() {
    expect('(');
    std::vector<std::size_t> dims;
    for (;;) {
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        return dims;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a dimension");
      std::size_t v = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        const std::size_t digit = static_cast<std::size_t>(peek() - '0');
        if (v > (SIZE_MAX - digit) / 10) fail("dimension overflows");
        v = v * 10 + digit;
        ++pos_;
      }
      dims.push_back(v);
      skip_ws();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != ')') {
        fail("expected ',' or ')' in shape");
      }
    }
  }

  std::string_view text_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

std::uint64_t load_le(const unsigned char* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void store_le(std::vector<unsigned char>& out, std::uint64_t v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

double decode_value(const unsigned char* p, Dtype dtype) {
  if (dtype == Dtype::float32_le) {
    return static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(load_le(p, 4))));
  }
  return std::bit_cast<double>(load_le(p, 8));
}

std::string header_text(const ArrayFileHeader& h) {
  return fmt::format("{{'descr': '{}', 'fortran_order': {}, 'shape': ({}, {}), }}",
                     dtype_descr(h.dtype), h.fortran_order ? "True" : "False", h.rows, h.cols);
}

}  // namespace

std::size_t element_size(Dtype dtype) noexcept { return dtype == Dtype::float32_le ? 4 : 8; }

std::string_view dtype_descr(Dtype dtype) noexcept {
  return dtype == Dtype::float32_le ? "<f4" : "<f8";
}

NpyArray read_npy(std::istream& in, const std::string& source) {
  const std::streampos start = in.tellg();
  in.seekg(0, std::ios::end);
  const std::streamoff total = in.tellg() - start;
  in.seekg(start);
  if (!in || total < 0) format_error(source, "cannot determine stream size");

  std::array<unsigned char, 8> preamble{};
  if (!in.read(reinterpret_cast<char*>(preamble.data()), preamble.size())) {
    format_error(source, "file too short for an NPY preamble");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), preamble.begin())) {
    format_error(source, "bad magic (not an NPY file)");
  }
  const unsigned major = preamble[6];
  const unsigned minor = preamble[7];
  std::size_t len_bytes = 0;
  if (major == 1 && minor == 0) {
    len_bytes = 2;
  } else if (major == 2 && minor == 0) {
    len_bytes = 4;
  } else {
    format_error(source, fmt::format("unsupported NPY version {}.{}", major, minor));
  }
  std::array<unsigned char, 4> len_buf{};
  if (!in.read(reinterpret_cast<char*>(len_buf.data()), static_cast<std::streamsize>(len_bytes))) {
    format_error(source, "truncated header length");
  }
  const std::size_t header_len = load_le(len_buf.data(), len_bytes);
  const std::size_t preamble_len = 8 + len_bytes;
  if (static_cast<std::uint64_t>(total) < preamble_len + header_len) {
    format_error(source, "truncated header");
  }
  std::string text(header_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_len));
  if (!in) format_error(source, "truncated header");

  NpyArray out;
  out.header = HeaderParser(text, source).parse();
  const ArrayFileHeader& h = out.header;

  const std::uint64_t have = static_cast<std::uint64_t>(total) - preamble_len - header_len;
  const std::size_t esize = element_size(h.dtype);
  if (h.rows > SIZE_MAX / h.cols || h.rows * h.cols > SIZE_MAX / esize) {
    format_error(source, "shape is too large");
  }
  const std::size_t need = h.payload_bytes();
  if (have != need) {
    format_error(source, fmt::format("payload size mismatch: shape ({}, {}) of {} needs {} bytes, "
                                     "file has {}",
                                     h.rows, h.cols, dtype_descr(h.dtype), need, have));
  }

  const auto rows = static_cast<Eigen::Index>(h.rows);
  const auto cols = static_cast<Eigen::Index>(h.cols);
  out.data.resize(rows, cols);

  // Stream the payload in chunks of whole elements.
  constexpr std::size_t kChunkElems = 1 << 16;
  std::vector<unsigned char> buf(kChunkElems * esize);
  const std::size_t count = h.rows * h.cols;
  std::size_t k = 0;
  while (k < count) {
    const std::size_t take = std::min(kChunkElems, count - k);
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(take * esize))) {
      format_error(source, "truncated payload");
    }
    for (std::size_t t = 0; t < take; ++t, ++k) {
      Eigen::Index i = 0;
      Eigen::Index j = 0;
      if (h.fortran_order) {
        j = static_cast<Eigen::Index>(k / h.rows);
        i = static_cast<Eigen::Index>(k % h.rows);
      } else {
        i = static_cast<Eigen::Index>(k / h.cols);
        j = static_cast<Eigen::Index>(k % h.cols);
      }
      const double v = decode_value(buf.data() + t * esize, h.dtype);
      if (!std::isfinite(v)) {
        format_error(source, fmt::format("non-finite value {} at row {}, col {}", v, i, j));
      }
      out.data(i, j) = v;
    }
  }
  return out;
}

NpyArray read_npy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io, fmt::format("{}: cannot open for reading", path.string()));
  }
  return read_npy(in, path.string());
}

namespace {

ArrayFileHeader header_for(const MatrixView& m, Dtype dtype) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw Error(Errc::invalid_argument,
                fmt::format("refusing to write an empty {}x{} array", m.rows(), m.cols()));
  }
  require_finite(m);
  ArrayFileHeader h;
  h.dtype = dtype;
  h.rows = static_cast<std::size_t>(m.rows());
  h.cols = static_cast<std::size_t>(m.cols());
  return h;
}

std::vector<unsigned char> encode_preamble(const ArrayFileHeader& h) {
  std::string text = header_text(h);
  const std::size_t unpadded = 10 + text.size() + 1;
  const std::size_t padded = (unpadded + kAlign - 1) / kAlign * kAlign;
  text.append(padded - unpadded, ' ');
  text.push_back('\n');
  if (text.size() > 0xFFFF) {
    throw Error(Errc::invalid_argument, "NPY header exceeds the version 1.0 limit");
  }
  std::vector<unsigned char> out;
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  out.push_back(1);
  out.push_back(0);
  store_le(out, text.size(), 2);
  out.insert(out.end(), text.begin(), text.end());
  return out;
}

void encode_row(std::vector<unsigned char>& out, const MatrixView& m, Eigen::Index i, Dtype dtype) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (dtype == Dtype::float32_le) {
      store_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(m(i, j))), 4);
    } else {
      store_le(out, std::bit_cast<std::uint64_t>(m(i, j)), 8);
    }
  }
}

}  // namespace

std::vector<unsigned char> encode_npy(const MatrixView& m, Dtype dtype) {
  const ArrayFileHeader h = header_for(m, dtype);
  std::vector<unsigned char> out = encode_preamble(h);
  out.reserve(out.size() + h.payload_bytes());
  for (Eigen::Index i = 0; i < m.rows(); ++i) encode_row(out, m, i, dtype);
  return out;
}

void write_npy(const MatrixView& m, const std::filesystem::path& path, Dtype dtype) {
  const ArrayFileHeader h = header_for(m, dtype);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io, fmt::format("{}: cannot open for writing", path.string()));
  }
  std::vector<unsigned char> buf = encode_preamble(h);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    buf.clear();
    encode_row(buf, m, i, dtype);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  }
  out.flush();
  if (!out) {
    throw Error(Errc::io, fmt::format("{}: write failed", path.string()));
  }
}

}  // namespace ganeval
