#include "phash/blockhash.hpp"

#include <cmath>
#include <stdexcept>

#include "phash/encoding.hpp"

namespace phash {

namespace {

constexpr int kZigzag[8][2] = {{0, 0}, {0, 1}, {1, 0}, {2, 0},
                               {1, 1}, {0, 2}, {0, 3}, {1, 2}};

constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace

BitHash::BitHash(std::vector<std::uint8_t> bits, std::string algorithm_tag,
                 int version)
    : bits_(std::move(bits)), tag_(std::move(algorithm_tag)), version_(version) {
  if (bits_.size() != kBits) {
    throw std::invalid_argument("BitHash requires exactly 640 bits");
  }
  for (std::uint8_t b : bits_) {
    if (b > 1) throw std::invalid_argument("BitHash bits must be 0 or 1");
  }
}

int BitHash::popcount() const {
  int count = 0;
  for (std::uint8_t b : bits_) count += b;
  return count;
}

std::string BitHash::to_string() const {
  std::string out = tag_ + "-v" + std::to_string(version_) + ":";
  out.reserve(out.size() + kBits / 4);
  for (int j = 0; j < kBits / 4; ++j) {
    int nibble = bits_[static_cast<std::size_t>(4 * j)] << 3 |
                 bits_[static_cast<std::size_t>(4 * j + 1)] << 2 |
                 bits_[static_cast<std::size_t>(4 * j + 2)] << 1 |
                 bits_[static_cast<std::size_t>(4 * j + 3)];
    out.push_back(kHexDigits[nibble]);
  }
  return out;
}

BitHash BitHash::from_string(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("hash string missing ':' separator");
  }
  std::string_view prefix = text.substr(0, colon);
  std::string_view hex = text.substr(colon + 1);
  auto vpos = prefix.rfind("-v");
  if (vpos == std::string_view::npos || vpos + 2 >= prefix.size()) {
    throw std::invalid_argument("hash prefix missing version suffix");
  }
  std::string tag(prefix.substr(0, vpos));
  int version = 0;
  for (char c : prefix.substr(vpos + 2)) {
    if (c < '0' || c > '9') {
      throw std::invalid_argument("hash prefix has malformed version");
    }
    version = version * 10 + (c - '0');
  }
  if (hex.size() != kBits / 4) {
    throw std::invalid_argument("hash payload must be 160 hex characters");
  }
  auto raw = hex_decode(hex);
  std::vector<std::uint8_t> bits(kBits);
  for (int i = 0; i < kBits; ++i) {
    bits[static_cast<std::size_t>(i)] =
        (raw[static_cast<std::size_t>(i / 8)] >> (7 - i % 8)) & 1;
  }
  return BitHash(std::move(bits), std::move(tag), version);
}

std::array<int, 8> block_histogram(const Matrix& block) {
  if (block.rows != 8 || block.cols != 8) {
    throw std::invalid_argument("block_histogram expects an 8x8 block");
  }
  std::array<int, 8> bins{};
  for (double v : block.data) {
    int idx = static_cast<int>(v / 32.0);
    if (idx < 0) idx = 0;
    if (idx > 7) idx = 7;
    ++bins[static_cast<std::size_t>(idx)];
  }
  return bins;
}

std::array<double, 8> block_dct_features(const Matrix& block) {
  if (block.rows != 8 || block.cols != 8) {
    throw std::invalid_argument("block_dct_features expects an 8x8 block");
  }
  Matrix coeffs = dct2(block);
  std::array<double, 8> out{};
  for (int i = 0; i < 8; ++i) {
    out[static_cast<std::size_t>(i)] = coeffs.at(kZigzag[i][0], kZigzag[i][1]);
  }
  return out;
}

FeatureMatrix extract_features(const StandardImage& img) {
  FeatureMatrix features;
  features.values = Matrix(FeatureMatrix::kBlocks, FeatureMatrix::kFeatures);
  Matrix block(8, 8);
  for (int by = 0; by < 8; ++by) {
    for (int bx = 0; bx < 8; ++bx) {
      for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
          block.at(r, c) = img.at(by * 8 + r, bx * 8 + c);
        }
      }
      int row = by * 8 + bx;
      auto hist = block_histogram(block);
      auto dct = block_dct_features(block);
      for (int i = 0; i < 8; ++i) {
        features.values.at(row, i) = hist[static_cast<std::size_t>(i)];
        features.values.at(row, 8 + i) = dct[static_cast<std::size_t>(i)];
      }
    }
  }
  return features;
}

// Histogram counts are rescaled to occupancy fractions before PCA. This
// keeps the widely separated DCT coefficient scales intact, so the leading
// principal components stay pinned to the stable DCT structure instead of
// reshuffling with the histogram directions under mild image operations
// (contrast in particular scales every DCT column uniformly, which leaves
// those components and the median-threshold bits unchanged).
constexpr double kHistogramScale = 1.0 / 64.0;

InterFeature inter_quantize(const FeatureMatrix& features) {
  const Matrix& raw = features.values;
  if (raw.rows != FeatureMatrix::kBlocks || raw.cols != FeatureMatrix::kFeatures) {
    throw std::invalid_argument("feature matrix must be 64x16");
  }
  int n = raw.rows;
  Matrix scaled(raw.rows, raw.cols);
  for (int c = 0; c < raw.cols; ++c) {
    double mean = 0.0;
    for (int r = 0; r < n; ++r) mean += raw.at(r, c);
    mean /= n;
    double var = 0.0;
    for (int r = 0; r < n; ++r) {
      double d = raw.at(r, c) - mean;
      var += d * d;
    }
    var /= (n - 1);
    double sd = std::sqrt(var);
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
      for (int r = 0; r < n; ++r) scaled.at(r, c) = 0.0;  // constant column
    } else {
      double scale = c < 8 ? kHistogramScale : 1.0;
      for (int r = 0; r < n; ++r) scaled.at(r, c) = raw.at(r, c) * scale;
    }
  }
  PcaResult pca = pca_project(scaled, InterFeature::kComponents);
  InterFeature inter;
  inter.values = pca.projected.transposed();
  return inter;
}

BitHash binarize(const InterFeature& inter) {
  const Matrix& m = inter.values;
  if (m.rows != InterFeature::kComponents ||
      m.cols != FeatureMatrix::kBlocks) {
    throw std::invalid_argument("inter-feature matrix must be 10x64");
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(BitHash::kBits));
  std::vector<double> column(static_cast<std::size_t>(m.rows));
  for (int c = 0; c < m.cols; ++c) {
    for (int r = 0; r < m.rows; ++r) {
      column[static_cast<std::size_t>(r)] = m.at(r, c);
    }
    double mu = median_of(column);
    for (int r = 0; r < m.rows; ++r) {
      bits[static_cast<std::size_t>(c * m.rows + r)] =
          m.at(r, c) >= mu ? 1 : 0;
    }
  }
  return BitHash(std::move(bits));
}

BitHash hash_image(const LumaImage& img) {
  return binarize(inter_quantize(extract_features(standardize(img))));
}

}  // namespace phash
