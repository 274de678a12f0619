#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "phash/image.hpp"
#include "phash/linalg.hpp"
#include "phash/prng.hpp"

namespace phash {

/// Second-stage transform: the default takes the top singular pair of the
/// whole secondary image; `rectangles` draws r pseudo-random d x d blocks
/// from it and concatenates their top singular pairs.
enum class Stage2Mode { whole_image, rectangles };

/// Side of the square working frame every input is resampled to before
/// stage 1, matching the experimental setup the default parameters assume.
inline constexpr int kWorkingFrame = 512;

struct SpectralParams {
  int p = 200;   // stage-1 rectangle count
  int m = 256;   // stage-1 rectangle side
  int r = 200;   // stage-2 rectangle count (rectangles mode)
  int d = 150;   // stage-2 rectangle side (rectangles mode)
  int f_min = 8;
  int f_max = 24;
  bool smooth = true;
  Stage2Mode stage2_mode = Stage2Mode::whole_image;

  /// Number of DCT coefficients in the square annulus
  /// f_min <= max(u, v) < f_max. 512 with defaults.
  int band_length() const { return f_max * f_max - f_min * f_min; }
  int secondary_rows() const { return band_length() / 2; }
  int secondary_cols() const { return 2 * p; }

  /// Throws std::invalid_argument when the parameter set is inconsistent.
  void validate() const;
};

/// One feature vector per stage-1 rectangle, each of band_length() entries.
struct IntermediateFeatures {
  std::vector<std::vector<double>> vectors;
};

/// Matrix assembled from the intermediate feature tiles (256 x 400 with
/// default parameters).
struct SecondaryImage {
  Matrix values;
};

/// Pair of unit singular vectors forming the keyed spectral hash.
struct SpectralHash {
  static constexpr const char* kDefaultTag = "svd-dctpca";

  std::vector<double> u1;
  std::vector<double> v1;
  std::string algorithm_tag = kDefaultTag;

  /// "svd-dctpca-v1:" + base64 of u1 then v1 as little-endian 64-bit floats.
  std::string to_string() const;

  /// Splits the payload according to `params` (u = secondary_rows, v =
  /// secondary_cols for whole_image mode; r*d each for rectangles mode).
  static SpectralHash from_string(std::string_view text,
                                  const SpectralParams& params = {});
};

/// Stage 1: the input is resampled to the 512x512 working frame, then p
/// pseudo-random m x m rectangles are drawn (stream tag "stage1"); each is
/// 2D-DCT'd and the square annulus f_min <= max(u,v) < f_max is flattened
/// row-major into d_i.
IntermediateFeatures stage1_features(const LumaImage& img, const Key& key,
                                     const SpectralParams& params = {});

/// Stage 2 assembly: each feature vector becomes a (band_length/2) x 2 tile
/// (column-major fill); tiles are placed left-to-right in a pseudo-random
/// slot permutation (stream tag "assemble"); optional single-pass 3x3 mean
/// smoothing with edge replication.
SecondaryImage build_secondary(const IntermediateFeatures& features,
                               const Key& key,
                               const SpectralParams& params = {});

/// Full keyed pipeline; deterministic given (image, key, params).
SpectralHash hash_spectral(const LumaImage& img, const Key& key,
                           const SpectralParams& params = {});

/// D = 1 - (|<u_a, u_b>| + |<v_a, v_b>|) / 2 in [0, 1]. Throws
/// std::invalid_argument on mismatched vector lengths.
double spectral_distance(const SpectralHash& a, const SpectralHash& b);

}  // namespace phash
