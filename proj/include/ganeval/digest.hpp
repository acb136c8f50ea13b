// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "ganeval/matrix.hpp"

namespace ganeval {

/// Lowercase hex SHA-256 of a byte buffer.
std::string sha256_hex(std::span<const unsigned char> bytes);

/// "sha256:<hex>" over the canonical encoding of a matrix: rows and cols as
/// little-endian uint64, then the entries as little-endian float64 in
/// row-major order. Identical values give identical digests regardless of
/// the file format they were loaded from.
std::string matrix_digest(const MatrixView& m);

}  // namespace ganeval
