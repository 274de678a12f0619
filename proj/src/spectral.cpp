#include "phash/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "phash/encoding.hpp"

namespace phash {

void SpectralParams::validate() const {
  if (p < 1) throw std::invalid_argument("spectral params: p must be >= 1");
  if (m < 8 || m > kWorkingFrame) {
    throw std::invalid_argument("spectral params: m must be in [8, 512]");
  }
  if (f_min < 1 || f_max <= f_min || f_max > m) {
    throw std::invalid_argument(
        "spectral params: need 1 <= f_min < f_max <= m");
  }
  if (band_length() % 2 != 0) {
    throw std::invalid_argument(
        "spectral params: f_max^2 - f_min^2 must be even");
  }
  if (stage2_mode == Stage2Mode::rectangles) {
    if (r < 1) throw std::invalid_argument("spectral params: r must be >= 1");
    if (d < 1 || d > secondary_rows() || d > secondary_cols()) {
      throw std::invalid_argument(
          "spectral params: stage-2 rectangle does not fit the secondary image");
    }
  }
}

IntermediateFeatures stage1_features(const LumaImage& img, const Key& key,
                                     const SpectralParams& params) {
  params.validate();
  // Every input is brought to the 512x512 working frame so rectangle
  // placements cover resolution-independent image fractions (and images
  // smaller than m always fit).
  LumaImage working = (img.height() == kWorkingFrame && img.width() == kWorkingFrame)
                          ? img
                          : resize(img, kWorkingFrame, kWorkingFrame);

  RandStream stream(key, "stage1");
  auto rects = sample_rectangles(stream, working.height(), working.width(),
                                 params.p, params.m, params.m);

  // Annulus scan order: row-major over the f_max x f_max corner.
  std::vector<std::pair<int, int>> annulus;
  annulus.reserve(static_cast<std::size_t>(params.band_length()));
  for (int u = 0; u < params.f_max; ++u) {
    for (int v = 0; v < params.f_max; ++v) {
      if (std::max(u, v) >= params.f_min) annulus.emplace_back(u, v);
    }
  }

  IntermediateFeatures features;
  features.vectors.reserve(static_cast<std::size_t>(params.p));
  Matrix sub(params.m, params.m);
  for (const auto& [top, left] : rects) {
    for (int r = 0; r < params.m; ++r) {
      for (int c = 0; c < params.m; ++c) {
        sub.at(r, c) = working.at(top + r, left + c);
      }
    }
    Matrix coeffs = dct2_lowfreq(sub, params.f_max);
    std::vector<double> d_i;
    d_i.reserve(annulus.size());
    for (const auto& [u, v] : annulus) d_i.push_back(coeffs.at(u, v));
    features.vectors.push_back(std::move(d_i));
  }
  return features;
}

SecondaryImage build_secondary(const IntermediateFeatures& features,
                               const Key& key, const SpectralParams& params) {
  params.validate();
  if (static_cast<int>(features.vectors.size()) != params.p) {
    throw std::invalid_argument("expected exactly p intermediate vectors");
  }
  std::size_t band = static_cast<std::size_t>(params.band_length());
  for (const auto& v : features.vectors) {
    if (v.size() != band) {
      throw std::invalid_argument("intermediate vector length mismatch");
    }
  }

  int rows = params.secondary_rows();
  RandStream stream(key, "assemble");
  std::vector<int> perm = sample_permutation(stream, params.p);

  Matrix j(rows, params.secondary_cols());
  for (int slot = 0; slot < params.p; ++slot) {
    const auto& tile = features.vectors[static_cast<std::size_t>(
        perm[static_cast<std::size_t>(slot)])];
    for (int col = 0; col < 2; ++col) {
      for (int row = 0; row < rows; ++row) {
        j.at(row, 2 * slot + col) =
            tile[static_cast<std::size_t>(col * rows + row)];
      }
    }
  }

  if (params.smooth) {
    Matrix smoothed(j.rows, j.cols);
    for (int r = 0; r < j.rows; ++r) {
      for (int c = 0; c < j.cols; ++c) {
        double sum = 0.0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            int rr = std::clamp(r + dr, 0, j.rows - 1);
            int cc = std::clamp(c + dc, 0, j.cols - 1);
            sum += j.at(rr, cc);
          }
        }
        smoothed.at(r, c) = sum / 9.0;
      }
    }
    j = std::move(smoothed);
  }
  return SecondaryImage{std::move(j)};
}

SpectralHash hash_spectral(const LumaImage& img, const Key& key,
                           const SpectralParams& params) {
  params.validate();
  SecondaryImage secondary =
      build_secondary(stage1_features(img, key, params), key, params);

  SpectralHash hash;
  if (params.stage2_mode == Stage2Mode::whole_image) {
    SvdResult svd = svd_truncated(secondary.values, 1);
    hash.u1.resize(static_cast<std::size_t>(secondary.values.rows));
    hash.v1.resize(static_cast<std::size_t>(secondary.values.cols));
    for (int r = 0; r < secondary.values.rows; ++r) {
      hash.u1[static_cast<std::size_t>(r)] = svd.left_vectors.at(r, 0);
    }
    for (int c = 0; c < secondary.values.cols; ++c) {
      hash.v1[static_cast<std::size_t>(c)] = svd.right_vectors.at(c, 0);
    }
  } else {
    RandStream stream(key, "stage2");
    auto rects =
        sample_rectangles(stream, secondary.values.rows,
                          secondary.values.cols, params.r, params.d, params.d);
    hash.u1.reserve(static_cast<std::size_t>(params.r) * params.d);
    hash.v1.reserve(static_cast<std::size_t>(params.r) * params.d);
    Matrix block(params.d, params.d);
    for (const auto& [top, left] : rects) {
      for (int r = 0; r < params.d; ++r) {
        for (int c = 0; c < params.d; ++c) {
          block.at(r, c) = secondary.values.at(top + r, left + c);
        }
      }
      SvdResult svd = svd_truncated(block, 1);
      for (int r = 0; r < params.d; ++r) {
        hash.u1.push_back(svd.left_vectors.at(r, 0));
      }
      for (int c = 0; c < params.d; ++c) {
        hash.v1.push_back(svd.right_vectors.at(c, 0));
      }
    }
    for (auto* vec : {&hash.u1, &hash.v1}) {
      double norm = 0.0;
      for (double x : *vec) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (double& x : *vec) x /= norm;
      }
    }
  }
  return hash;
}

double spectral_distance(const SpectralHash& a, const SpectralHash& b) {
  if (a.u1.size() != b.u1.size() || a.v1.size() != b.v1.size()) {
    throw std::invalid_argument("spectral hashes have mismatched lengths");
  }
  double du = 0.0, dv = 0.0;
  for (std::size_t i = 0; i < a.u1.size(); ++i) du += a.u1[i] * b.u1[i];
  for (std::size_t i = 0; i < a.v1.size(); ++i) dv += a.v1[i] * b.v1[i];
  double d = 1.0 - 0.5 * (std::abs(du) + std::abs(dv));
  return std::clamp(d, 0.0, 1.0);
}

namespace {

void append_doubles_le(std::vector<std::uint8_t>& out,
                       const std::vector<double>& values) {
  static_assert(sizeof(double) == 8);
  for (double v : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) {
      out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
  }
}

std::vector<double> read_doubles_le(const std::vector<std::uint8_t>& raw,
                                    std::size_t offset, std::size_t count) {
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int j = 0; j < 8; ++j) {
      bits |= static_cast<std::uint64_t>(raw[offset + 8 * i + j]) << (8 * j);
    }
    std::memcpy(&values[i], &bits, 8);
  }
  return values;
}

}  // namespace

std::string SpectralHash::to_string() const {
  std::vector<std::uint8_t> payload;
  payload.reserve(8 * (u1.size() + v1.size()));
  append_doubles_le(payload, u1);
  append_doubles_le(payload, v1);
  return algorithm_tag + "-v1:" + base64_encode(payload.data(), payload.size());
}

SpectralHash SpectralHash::from_string(std::string_view text,
                                       const SpectralParams& params) {
  params.validate();
  std::string prefix = std::string(kDefaultTag) + "-v1:";
  if (text.substr(0, prefix.size()) != prefix) {
    throw std::invalid_argument("spectral hash string has unexpected prefix");
  }
  auto raw = base64_decode(text.substr(prefix.size()));
  std::size_t u_len, v_len;
  if (params.stage2_mode == Stage2Mode::whole_image) {
    u_len = static_cast<std::size_t>(params.secondary_rows());
    v_len = static_cast<std::size_t>(params.secondary_cols());
  } else {
    u_len = static_cast<std::size_t>(params.r) * params.d;
    v_len = u_len;
  }
  if (raw.size() != 8 * (u_len + v_len)) {
    throw std::invalid_argument(
        "spectral hash payload does not match the parameter set");
  }
  SpectralHash hash;
  hash.u1 = read_doubles_le(raw, 0, u_len);
  hash.v1 = read_doubles_le(raw, 8 * u_len, v_len);
  return hash;
}

}  // namespace phash
