#include "phash/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace phash {

Matrix::Matrix(int r, int c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
  if (rows < 0 || cols < 0 || data.size() != size()) {
    throw std::invalid_argument("matrix dimensions do not match data size");
  }
}

Matrix Matrix::transposed() const {
  Matrix t(cols, rows);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  }
  return t;
}

double Matrix::frobenius_norm() const {
  double sum = 0.0;
  for (double v : data) sum += v * v;
  return std::sqrt(sum);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul shape mismatch");
  Matrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    double* crow = &c.data[static_cast<std::size_t>(i) * c.cols];
    for (int k = 0; k < a.cols; ++k) {
      double aik = a.at(i, k);
      const double* brow = &b.data[static_cast<std::size_t>(k) * b.cols];
      for (int j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_bt shape mismatch");
  Matrix c(a.rows, b.rows);
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = &a.data[static_cast<std::size_t>(i) * a.cols];
    for (int j = 0; j < b.rows; ++j) {
      const double* brow = &b.data[static_cast<std::size_t>(j) * b.cols];
      double sum = 0.0;
      for (int k = 0; k < a.cols; ++k) sum += arow[k] * brow[k];
      c.at(i, j) = sum;
    }
  }
  return c;
}

namespace {

// Rows 0..band-1 of the orthonormal N-point DCT-II basis.
Matrix dct_basis(int n, int band) {
  Matrix c(band, n);
  double scale0 = std::sqrt(1.0 / n);
  double scale = std::sqrt(2.0 / n);
  for (int k = 0; k < band; ++k) {
    for (int j = 0; j < n; ++j) {
      double angle = std::numbers::pi * (2.0 * j + 1.0) * k / (2.0 * n);
      c.at(k, j) = (k == 0 ? scale0 : scale * std::cos(angle));
    }
  }
  return c;
}

}  // namespace

Matrix dct2(const Matrix& block) {
  if (block.rows < 1 || block.cols < 1) {
    throw std::invalid_argument("dct2 requires a non-empty block");
  }
  Matrix cr = dct_basis(block.rows, block.rows);
  Matrix cc = dct_basis(block.cols, block.cols);
  return matmul_bt(matmul(cr, block), cc);
}

Matrix idct2(const Matrix& coeffs) {
  if (coeffs.rows < 1 || coeffs.cols < 1) {
    throw std::invalid_argument("idct2 requires a non-empty block");
  }
  Matrix cr = dct_basis(coeffs.rows, coeffs.rows);
  Matrix cc = dct_basis(coeffs.cols, coeffs.cols);
  return matmul(matmul(cr.transposed(), coeffs), cc);
}

Matrix dct2_lowfreq(const Matrix& block, int band) {
  if (band < 1 || band > std::min(block.rows, block.cols)) {
    throw std::invalid_argument("dct2_lowfreq band out of range");
  }
  Matrix cr = dct_basis(block.rows, band);
  Matrix cc = dct_basis(block.cols, band);
  return matmul_bt(matmul(cr, block), cc);
}

void sign_normalize(std::vector<double>& v) {
  std::size_t idx = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double mag = std::abs(v[i]);
    if (mag > best) {
      best = mag;
      idx = i;
    }
  }
  if (!v.empty() && v[idx] < 0.0) {
    for (double& x : v) x = -x;
  }
}

namespace {

// Householder reduction to tridiagonal form; returns the accumulated
// orthogonal transform so that input = Q T Q^T.
void householder_tridiag(Matrix& a, Matrix& q, std::vector<double>& diag,
                         std::vector<double>& sub) {
  int n = a.rows;
  q = Matrix(n, n);
  for (int i = 0; i < n; ++i) q.at(i, i) = 1.0;
  std::vector<double> v(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int k = 0; k + 2 < n; ++k) {
    int lead = k + 1;
    double norm2 = 0.0;
    for (int r = lead; r < n; ++r) norm2 += a.at(r, k) * a.at(r, k);
    double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    double x0 = a.at(lead, k);
    double alpha = x0 >= 0.0 ? -norm : norm;
    double vnorm2 = norm2 - 2.0 * alpha * x0 + alpha * alpha;
    if (vnorm2 <= 0.0) continue;
    double vnorm = std::sqrt(vnorm2);
    for (int r = lead; r < n; ++r) {
      v[static_cast<std::size_t>(r)] =
          (a.at(r, k) - (r == lead ? alpha : 0.0)) / vnorm;
    }
    // Rows: A[lead.., c] -= 2 v (v . A[lead.., c]) for all columns.
    for (int c = 0; c < n; ++c) {
      double dot = 0.0;
      for (int r = lead; r < n; ++r) {
        dot += v[static_cast<std::size_t>(r)] * a.at(r, c);
      }
      dot *= 2.0;
      for (int r = lead; r < n; ++r) {
        a.at(r, c) -= dot * v[static_cast<std::size_t>(r)];
      }
    }
    // Columns: A[r, lead..] -= 2 (A[r, lead..] . v) v.
    for (int r = 0; r < n; ++r) {
      double dot = 0.0;
      for (int c = lead; c < n; ++c) {
        dot += a.at(r, c) * v[static_cast<std::size_t>(c)];
      }
      dot *= 2.0;
      for (int c = lead; c < n; ++c) {
        a.at(r, c) -= dot * v[static_cast<std::size_t>(c)];
      }
    }
    // Q <- Q H.
    for (int r = 0; r < n; ++r) {
      double dot = 0.0;
      for (int c = lead; c < n; ++c) {
        dot += q.at(r, c) * v[static_cast<std::size_t>(c)];
      }
      dot *= 2.0;
      for (int c = lead; c < n; ++c) {
        q.at(r, c) -= dot * v[static_cast<std::size_t>(c)];
      }
    }
  }
  diag.assign(static_cast<std::size_t>(n), 0.0);
  sub.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = a.at(i, i);
  for (int i = 0; i + 1 < n; ++i) {
    sub[static_cast<std::size_t>(i)] = a.at(i + 1, i);
  }
}

// Implicit-shift QL iteration on a tridiagonal matrix, rotations accumulated
// into the columns of z. d holds the diagonal, e[i] the subdiagonal between
// rows i and i+1 (e[n-1] unused).
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, Matrix& z) {
  int n = static_cast<int>(d.size());
  if (n == 0) return;
  e[static_cast<std::size_t>(n) - 1] = 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) {
          throw std::runtime_error(
              "eigendecomposition failed to converge (off-diagonal residual " +
              std::to_string(std::abs(e[l])) + ")");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < z.rows; ++k) {
            f = z.at(k, i + 1);
            z.at(k, i + 1) = s * z.at(k, i) + c * f;
            z.at(k, i) = c * z.at(k, i) - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

EigResult eig_sym(const Matrix& sym) {
  if (sym.rows != sym.cols) {
    throw std::invalid_argument("eig_sym requires a square matrix");
  }
  int n = sym.rows;
  if (n == 0) throw std::invalid_argument("eig_sym requires a non-empty matrix");
  // Symmetrize to wash out representation asymmetry in the input.
  Matrix a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      a.at(r, c) = 0.5 * (sym.at(r, c) + sym.at(c, r));
    }
  }
  Matrix q;
  std::vector<double> d, e;
  householder_tridiag(a, q, d, e);
  tridiag_ql(d, e, q);

  std::vector<std::vector<double>> vecs(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto& v = vecs[static_cast<std::size_t>(j)];
    v.resize(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) v[static_cast<std::size_t>(r)] = q.at(r, j);
    sign_normalize(v);
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    double dx = d[static_cast<std::size_t>(x)];
    double dy = d[static_cast<std::size_t>(y)];
    if (dx != dy) return dx > dy;
    return std::lexicographical_compare(
        vecs[static_cast<std::size_t>(x)].begin(),
        vecs[static_cast<std::size_t>(x)].end(),
        vecs[static_cast<std::size_t>(y)].begin(),
        vecs[static_cast<std::size_t>(y)].end());
  });

  EigResult result;
  result.values.resize(static_cast<std::size_t>(n));
  result.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    int src = order[static_cast<std::size_t>(j)];
    result.values[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(src)];
    for (int r = 0; r < n; ++r) {
      result.vectors.at(r, j) = vecs[static_cast<std::size_t>(src)][static_cast<std::size_t>(r)];
    }
  }
  return result;
}

PcaResult pca_project(const Matrix& data, int k) {
  int n = data.rows;
  int f = data.cols;
  if (n < 1 || f < 1) throw std::invalid_argument("pca_project needs data");
  if (k < 1 || k > f) {
    throw std::invalid_argument("pca_project k must satisfy 1 <= k <= features");
  }

  Matrix centered(n, f);
  bool zero_variance = true;
  for (int c = 0; c < f; ++c) {
    double mean = 0.0;
    for (int r = 0; r < n; ++r) mean += data.at(r, c);
    mean /= n;
    double var = 0.0;
    for (int r = 0; r < n; ++r) {
      double dv = data.at(r, c) - mean;
      centered.at(r, c) = dv;
      var += dv * dv;
    }
    if (n > 1) var /= (n - 1);
    double tol = 1e-12 * std::max(1.0, std::abs(mean));
    if (var > tol * tol) zero_variance = false;
  }

  PcaResult result;
  if (zero_variance || n < 2) {
    result.components = Matrix(f, k);
    for (int j = 0; j < k; ++j) result.components.at(j, j) = 1.0;
    result.projected = matmul(centered, result.components);
    result.explained_variance.assign(static_cast<std::size_t>(k), 0.0);
    return result;
  }

  Matrix cov = matmul(centered.transposed(), centered);
  for (double& v : cov.data) v /= (n - 1);
  EigResult eig = eig_sym(cov);

  result.components = Matrix(f, k);
  result.explained_variance.resize(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    result.explained_variance[static_cast<std::size_t>(j)] =
        std::max(0.0, eig.values[static_cast<std::size_t>(j)]);
    for (int r = 0; r < f; ++r) {
      result.components.at(r, j) = eig.vectors.at(r, j);
    }
  }
  result.projected = matmul(centered, result.components);
  return result;
}

SvdResult svd_truncated(const Matrix& mat, int k) {
  int rows = mat.rows;
  int cols = mat.cols;
  if (rows < 1 || cols < 1) throw std::invalid_argument("svd needs a matrix");
  if (k < 1 || k > std::min(rows, cols)) {
    throw std::invalid_argument("svd_truncated k must satisfy 1 <= k <= min dim");
  }

  bool all_zero = true;
  for (double v : mat.data) {
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) {
    SvdResult result;
    result.singular_values.assign(static_cast<std::size_t>(k), 0.0);
    result.left_vectors = Matrix(rows, k);
    result.right_vectors = Matrix(cols, k);
    for (int j = 0; j < k; ++j) {
      result.left_vectors.at(j, j) = 1.0;
      result.right_vectors.at(j, j) = 1.0;
    }
    return result;
  }

  bool tall = rows >= cols;
  Matrix gram = tall ? matmul(mat.transposed(), mat)
                     : matmul(mat, mat.transposed());
  EigResult eig = eig_sym(gram);

  int derived_len = tall ? rows : cols;
  int gram_len = tall ? cols : rows;
  std::vector<std::vector<double>> gram_vecs;
  std::vector<std::vector<double>> derived_vecs;
  std::vector<double> sigmas;
  gram_vecs.reserve(static_cast<std::size_t>(k));
  derived_vecs.reserve(static_cast<std::size_t>(k));
  sigmas.reserve(static_cast<std::size_t>(k));

  for (int j = 0; j < k; ++j) {
    std::vector<double> w(static_cast<std::size_t>(gram_len));
    for (int r = 0; r < gram_len; ++r) {
      w[static_cast<std::size_t>(r)] = eig.vectors.at(r, j);
    }
    std::vector<double> y(static_cast<std::size_t>(derived_len), 0.0);
    if (tall) {
      for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < cols; ++c) sum += mat.at(r, c) * w[static_cast<std::size_t>(c)];
        y[static_cast<std::size_t>(r)] = sum;
      }
    } else {
      for (int c = 0; c < cols; ++c) {
        double sum = 0.0;
        for (int r = 0; r < rows; ++r) sum += mat.at(r, c) * w[static_cast<std::size_t>(r)];
        y[static_cast<std::size_t>(c)] = sum;
      }
    }
    double sigma = 0.0;
    for (double v : y) sigma += v * v;
    sigma = std::sqrt(sigma);
    gram_vecs.push_back(std::move(w));
    derived_vecs.push_back(std::move(y));
    sigmas.push_back(sigma);
  }

  double sigma_max = sigmas.empty() ? 0.0 : *std::max_element(sigmas.begin(), sigmas.end());
  double tol = std::max(rows, cols) * std::numeric_limits<double>::epsilon() * sigma_max;

  for (int j = 0; j < k; ++j) {
    auto& y = derived_vecs[static_cast<std::size_t>(j)];
    if (sigmas[static_cast<std::size_t>(j)] > tol && sigma_max > 0.0) {
      for (double& v : y) v /= sigmas[static_cast<std::size_t>(j)];
    } else {
      // Null direction: deterministic standard-basis completion.
      sigmas[static_cast<std::size_t>(j)] = 0.0;
      bool found = false;
      for (int cand = 0; cand < derived_len && !found; ++cand) {
        std::vector<double> v(static_cast<std::size_t>(derived_len), 0.0);
        v[static_cast<std::size_t>(cand)] = 1.0;
        for (int prev = 0; prev < j; ++prev) {
          const auto& u = derived_vecs[static_cast<std::size_t>(prev)];
          double dot = 0.0;
          for (int r = 0; r < derived_len; ++r) {
            dot += v[static_cast<std::size_t>(r)] * u[static_cast<std::size_t>(r)];
          }
          for (int r = 0; r < derived_len; ++r) {
            v[static_cast<std::size_t>(r)] -= dot * u[static_cast<std::size_t>(r)];
          }
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 0.5) {
          for (double& x : v) x /= norm;
          y = std::move(v);
          found = true;
        }
      }
      if (!found) {
        throw std::runtime_error("svd_truncated failed to complete a null basis");
      }
    }
  }

  // Enforce non-increasing singular values (stable across near-ties).
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return sigmas[static_cast<std::size_t>(x)] > sigmas[static_cast<std::size_t>(y)];
  });

  SvdResult result;
  result.singular_values.resize(static_cast<std::size_t>(k));
  result.left_vectors = Matrix(rows, k);
  result.right_vectors = Matrix(cols, k);
  for (int j = 0; j < k; ++j) {
    int src = order[static_cast<std::size_t>(j)];
    result.singular_values[static_cast<std::size_t>(j)] = sigmas[static_cast<std::size_t>(src)];
    const auto& gv = gram_vecs[static_cast<std::size_t>(src)];
    const auto& dv = derived_vecs[static_cast<std::size_t>(src)];
    for (int r = 0; r < rows; ++r) {
      result.left_vectors.at(r, j) =
          tall ? dv[static_cast<std::size_t>(r)] : gv[static_cast<std::size_t>(r)];
    }
    for (int c = 0; c < cols; ++c) {
      result.right_vectors.at(c, j) =
          tall ? gv[static_cast<std::size_t>(c)] : dv[static_cast<std::size_t>(c)];
    }
  }
  return result;
}

double median_of(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median of an empty list is undefined");
  }
  std::sort(values.begin(), values.end());
  std::size_t last = values.size() - 1;
  return 0.5 * (values[last / 2] + values[(last + 1) / 2]);
}

}  // namespace phash
