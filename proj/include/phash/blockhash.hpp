#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phash/image.hpp"
#include "phash/linalg.hpp"

namespace phash {

/// Per-block perceptual feature: 8 histogram bin counts plus 8 low-frequency
/// DCT coefficients (DC + 7 AC in zigzag order).
struct BlockFeature {
  std::array<int, 8> histogram;
  std::array<double, 8> dct_coeffs;
};

/// 64 blocks (raster order) x 16 features (histogram bins 0-7, then DCT
/// coefficients 0-7).
struct FeatureMatrix {
  static constexpr int kBlocks = 64;
  static constexpr int kFeatures = 16;
  Matrix values;  // kBlocks x kFeatures
};

/// PCA-compressed 10 x 64 inter-feature matrix; rows ordered by descending
/// explained variance.
struct InterFeature {
  static constexpr int kComponents = 10;
  Matrix values;  // kComponents x FeatureMatrix::kBlocks
};

/// Fixed 640-bit perceptual hash.
class BitHash {
 public:
  static constexpr int kBits = 640;
  static constexpr const char* kDefaultTag = "bdct-pca";

  BitHash(std::vector<std::uint8_t> bits, std::string algorithm_tag = kDefaultTag,
          int version = 1);

  bool bit(int i) const { return bits_[static_cast<std::size_t>(i)] != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  int popcount() const;
  const std::string& algorithm_tag() const { return tag_; }
  int version() const { return version_; }

  /// "bdct-pca-v1:" followed by 160 lowercase hex characters. Bit 4j is the
  /// most significant bit of hex digit j.
  std::string to_string() const;
  static BitHash from_string(std::string_view text);

  friend bool operator==(const BitHash&, const BitHash&) = default;

 private:
  std::vector<std::uint8_t> bits_;  // kBits entries of 0/1
  std::string tag_;
  int version_;
};

/// Counts pixels per intensity octave: bin i holds pixels with
/// floor(value / 32) == i. Bins sum to 64 for an 8x8 block.
std::array<int, 8> block_histogram(const Matrix& block);

/// dct2 of the 8x8 block, then the first 8 coefficients in JPEG zigzag order:
/// (0,0),(0,1),(1,0),(2,0),(1,1),(0,2),(0,3),(1,2).
std::array<double, 8> block_dct_features(const Matrix& block);

/// Splits the standardized image into the 8x8 grid of 8x8 blocks (raster
/// order) and stacks each block's histogram + DCT features as one row.
FeatureMatrix extract_features(const StandardImage& img);

/// Rescales histogram counts to occupancy fractions (constant columns become
/// all zero), projects onto the top 10 principal components of the sample
/// covariance and returns the transposed projection (10 x 64), rows ordered
/// by descending explained variance.
InterFeature inter_quantize(const FeatureMatrix& features);

/// Thresholds each 10-value column at its median (bit = 1 iff value >= median)
/// and emits the 640 bits column-major: column 0 rows 0-9 first.
BitHash binarize(const InterFeature& inter);

/// Full pipeline: standardize -> extract_features -> inter_quantize ->
/// binarize. Deterministic; always 640 bits.
BitHash hash_image(const LumaImage& img);

}  // namespace phash
