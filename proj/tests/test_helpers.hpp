#pragma once

#include <filesystem>
#include <string>

#include "phash/linalg.hpp"
#include "phash/prng.hpp"

namespace phash::testing {

/// Scratch directory under the system temp root, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / ("phash_test_" + name)) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

inline Matrix random_matrix(RandStream& rs, int rows, int cols,
                            double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.data) v = lo + (hi - lo) * rs.next_unit();
  return m;
}

inline Matrix random_symmetric(RandStream& rs, int n, double lo = -1.0,
                               double hi = 1.0) {
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      double v = lo + (hi - lo) * rs.next_unit();
      m.at(r, c) = v;
      m.at(c, r) = v;
    }
  }
  return m;
}

}  // namespace phash::testing
