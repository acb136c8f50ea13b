// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "ganeval/matrix.hpp"

namespace ganeval {

enum class Dtype { float32_le, float64_le };

std::size_t element_size(Dtype dtype) noexcept;
/// "<f4" or "<f8".
std::string_view dtype_descr(Dtype dtype) noexcept;

struct ArrayFileHeader {
  Dtype dtype = Dtype::float64_le;
  bool fortran_order = false;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t payload_bytes() const noexcept { return rows * cols * element_size(dtype); }
};

struct NpyArray {
  ArrayFileHeader header;
  Matrix data;  // logical n x d, regardless of the on-disk order
};

/// Parses an NPY v1.0 or v2.0 container holding a 2-D '<f4' or '<f8' array.
/// Column-major payloads are transposed into the logical layout. Rejects
/// bad magic, other dtypes, non-2-D or empty shapes, payload size
/// mismatches and non-finite values (Errc::format).
NpyArray read_npy(std::istream& in, const std::string& source = "<stream>");
NpyArray read_npy(const std::filesystem::path& path);

/// Canonical v1.0 encoding: the header
///   {'descr': '<f8', 'fortran_order': False, 'shape': (n, d), }
/// padded with spaces and terminated by '\n' so the 10-byte preamble plus
/// header is the smallest multiple of 64 that fits, followed by the
/// row-major little-endian payload.
std::vector<unsigned char> encode_npy(const MatrixView& m, Dtype dtype);
void write_npy(const MatrixView& m, const std::filesystem::path& path, Dtype dtype);

}  // namespace ganeval
