#pragma once

#include <cstddef>
#include <vector>

namespace phash {

/// Dense row-major matrix of doubles.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(size(), 0.0) {}
  Matrix(int r, int c, std::vector<double> values);

  std::size_t size() const {
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }
  double& at(int r, int c) {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  double at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }

  Matrix transposed() const;
  double frobenius_norm() const;
};

/// C = A * B.
Matrix matmul(const Matrix& a, const Matrix& b);

/// C = A * B^T.
Matrix matmul_bt(const Matrix& a, const Matrix& b);

/// Orthonormal 2D DCT-II (type II, orthonormal scaling) of a rows x cols
/// block; same dimensions as the input, invertible by idct2.
Matrix dct2(const Matrix& block);

/// Inverse of dct2.
Matrix idct2(const Matrix& coeffs);

/// The top-left band x band corner of dct2(block) without computing the full
/// transform. Requires 1 <= band <= min(rows, cols).
Matrix dct2_lowfreq(const Matrix& block, int band);

/// Eigendecomposition of a symmetric matrix: eigenvalues descending,
/// eigenvectors as the matching columns of `vectors`. Ties in eigenvalues are
/// ordered by lexicographic comparison of the sign-normalized vectors; every
/// vector is sign-normalized (largest-magnitude entry positive, first such
/// index on ties). Throws std::runtime_error if QL iteration fails to
/// converge.
struct EigResult {
  std::vector<double> values;
  Matrix vectors;
};
EigResult eig_sym(const Matrix& sym);

struct PcaResult {
  Matrix components;                       // f x k, orthonormal columns
  Matrix projected;                        // n x k
  std::vector<double> explained_variance;  // k, descending
};

/// PCA of n samples (rows) by f features (columns): top-k eigenpairs of the
/// unbiased sample covariance of column-centered data. Zero-variance input
/// yields the first k standard basis vectors with zero explained variance.
/// Throws std::invalid_argument when k < 1 or k > f.
PcaResult pca_project(const Matrix& data, int k);

struct SvdResult {
  std::vector<double> singular_values;  // descending, non-negative
  Matrix left_vectors;                  // rows x k
  Matrix right_vectors;                 // cols x k
};

/// Top-k singular triplets via eigendecomposition of the smaller Gram matrix.
/// Numerically null directions get deterministic standard-basis completions
/// and a zero singular value. Throws std::invalid_argument when k < 1 or
/// k > min(rows, cols).
SvdResult svd_truncated(const Matrix& mat, int k);

/// Median of a non-empty list: sort ascending to c(0..K) and return
/// (c(K/2) + c((K+1)/2)) / 2 with integer division. Throws
/// std::invalid_argument on an empty list.
double median_of(std::vector<double> values);

/// Flips the vector so its largest-magnitude entry (first on ties) is
/// positive. No-op for the zero vector.
void sign_normalize(std::vector<double>& v);

}  // namespace phash
