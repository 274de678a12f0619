#pragma once

// Independent brute-force reference implementations used only by tests to
// cross-check the production kernels. Deliberately slow and literal.

#include <utility>
#include <vector>

#include "phash/linalg.hpp"

namespace phash::oracles {

/// Textbook O(N^2 M^2) double-sum orthonormal 2D DCT-II.
Matrix naive_dct2(const Matrix& block);

/// Single coefficient of the double-sum DCT.
double naive_dct2_coeff(const Matrix& block, int u, int v);

/// Cyclic-by-row Jacobi eigendecomposition of a symmetric matrix.
/// Returns (eigenvalue, eigenvector) pairs sorted by descending eigenvalue.
std::vector<std::pair<double, std::vector<double>>> jacobi_eigen(
    const Matrix& sym);

}  // namespace phash::oracles
