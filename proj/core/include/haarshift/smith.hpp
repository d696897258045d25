#pragma once

#include "haarshift/rational.hpp"

namespace haarshift {

/// Invariant-factor decomposition of an integer matrix A: there are
/// unimodular U (rows x rows) and V (cols x cols, not returned) with
/// U * A * V diagonal, each diagonal entry nonnegative and dividing the next.
///
/// Only the row transform is tracked because callers use it to transport
/// coordinates between the ambient lattice and the diagonalized one; the
/// inverse is maintained alongside so no separate inversion is needed.
struct SmithDecomposition {
  std::vector<Int> diagonal;  // length min(rows, cols)
  IntMatrix row_ops;          // U
  IntMatrix row_ops_inv;      // U^{-1}, satisfies row_ops * row_ops_inv = I
};

/// Computes the decomposition by alternating row/column reduction with a
/// smallest-pivot rule. Throws std::invalid_argument on ragged input.
SmithDecomposition smith_normal_form(IntMatrix a);

}  // namespace haarshift
